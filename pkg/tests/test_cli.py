"""CLI: config parsing, dispatch, report formats, exit codes."""

import json

import pytest
from click.testing import CliRunner

from boxworld import ClassicalSystemUnsupported, ParseError
from boxworld.cli import build_config, main, parse_config, run


def write_spec(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content)
    return str(path)


@pytest.fixture
def spec_2222(tmp_path):
    return write_spec(tmp_path, "s.yaml", "systems: [[2, 2], [2, 2]]\n")


@pytest.fixture
def spec_22(tmp_path):
    return write_spec(tmp_path, "single.yaml", "systems: [[2, 2]]\n")


class TestParseConfig:
    def test_valid_theorem_config(self, spec_2222):
        config = parse_config(["--spec", spec_2222, "--check", "verify-theorem"])
        assert config.command == "verify-theorem"
        assert config.multi.describe() == "(2,2)&(2,2)"

    def test_classical_rejected_at_parse_time(self, tmp_path):
        spec = write_spec(tmp_path, "c.yaml", "systems: [[2]]\n")
        with pytest.raises(ClassicalSystemUnsupported):
            parse_config(["--spec", spec, "--check", "verify-theorem"])

    def test_classical_allowed_for_geometry_commands(self, tmp_path):
        spec = write_spec(tmp_path, "c.yaml", "systems: [[3]]\n")
        config = parse_config(["--spec", spec, "--check", "enum-vertices"])
        assert config.multi.describe() == "(3)"

    def test_outcome_count_one_is_parse_error(self, tmp_path):
        spec = write_spec(tmp_path, "bad.yaml", "systems: [[2, 1]]\n")
        with pytest.raises(ParseError):
            parse_config(["--spec", spec, "--check", "enum-vertices"])

    def test_yaml_error_carries_position(self, tmp_path):
        spec = write_spec(tmp_path, "broken.yaml", "systems: [[2, 2]\n  - oops\n")
        with pytest.raises(ParseError) as err:
            parse_config(["--spec", spec, "--check", "enum-vertices"])
        assert err.value.line is not None

    def test_nonpositive_budget_rejected(self, spec_22):
        with pytest.raises(ParseError):
            build_config(spec_22, "verify-lemma1", 0, 10, None, None, "human", None, None, (), None)

    def test_unsorted_input_is_canonicalized(self, tmp_path):
        spec = write_spec(tmp_path, "u.yaml", "systems: [[2, 3], [2, 2]]\n")
        config = parse_config(["--spec", spec, "--check", "verify-cor2"])
        assert config.multi.describe() == "(2,2)&(2,3)"
        assert config.record.system_map == (1, 0)

    def test_unknown_check_is_usage_error(self, spec_22):
        runner = CliRunner()
        result = runner.invoke(main, ["--spec", spec_22, "--check", "frobnicate"])
        assert result.exit_code == 2


class TestRunCommands:
    def test_verify_theorem_single_22(self, spec_22):
        runner = CliRunner()
        result = runner.invoke(main, ["--spec", spec_22, "--check", "verify-theorem"])
        assert result.exit_code == 0
        assert "reversible transformations found: 8" in result.output
        assert "trivial group size: 8" in result.output
        assert "MATCH" in result.output

    def test_verify_theorem_bipartite_2222(self, spec_2222):
        runner = CliRunner()
        result = runner.invoke(main, ["--spec", spec_2222, "--check", "verify-theorem"])
        assert result.exit_code == 0
        assert "reversible transformations found: 128; trivial group size: 128; MATCH" in result.output

    def test_enum_vertices_2222_has_24_records(self, spec_2222):
        runner = CliRunner()
        result = runner.invoke(
            main, ["--spec", spec_2222, "--check", "enum-vertices", "--format", "machine"]
        )
        assert result.exit_code == 0
        records = [json.loads(line) for line in result.output.splitlines()]
        vertex_records = [r for r in records if r["instance"].startswith("vertex:")]
        assert len(vertex_records) == 24
        for r in vertex_records:
            for coord in r["witness"].split():
                num, den = coord.split("/")
                int(num), int(den)

    def test_verify_lemma1_22_23(self, tmp_path):
        spec = write_spec(tmp_path, "m.yaml", "systems: [[2, 2], [2, 3]]\n")
        runner = CliRunner()
        result = runner.invoke(main, ["--spec", spec, "--check", "verify-lemma1"])
        assert result.exit_code == 0

    def test_enum_decomps_subunit(self, spec_2222):
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["--spec", spec_2222, "--check", "enum-decomps", "--effect", "X[1|1]@1*U@2",
             "--format", "machine"],
        )
        assert result.exit_code == 0
        records = [json.loads(line) for line in result.output.splitlines()]
        decs = [r for r in records if r["instance"].startswith("decomposition:")]
        assert len(decs) == 2

    def test_enum_decomps_effect_sum(self, spec_22):
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["--spec", spec_22, "--check", "enum-decomps",
             "--effect", "X[1|1]@1+X[2|1]@1", "--format", "machine"],
        )
        assert result.exit_code == 0
        records = [json.loads(line) for line in result.output.splitlines()]
        decs = [r for r in records if r["instance"].startswith("decomposition:")]
        assert len(decs) == 2  # the unit effect: one decomposition per measurement

    def test_witness_pass_and_fail(self, spec_2222):
        runner = CliRunner()
        ok = runner.invoke(
            main,
            ["--spec", spec_2222, "--check", "witness", "--mode", "lemma2",
             "--target", "X[1|2]@1*X[1|1]@2",
             "--avoid", "X[1|1]@1*X[1|1]@2", "--avoid", "X[2|1]@1*X[2|1]@2"],
        )
        assert ok.exit_code == 0
        bad = runner.invoke(
            main,
            ["--spec", spec_2222, "--check", "witness", "--mode", "lemma8",
             "--target", "X[2|1]@1*X[2|2]@2",
             "--avoid", "X[1|1]@1*X[1|1]@2", "--avoid", "X[2|1]@1*X[1|1]@2"],
        )
        assert bad.exit_code == 1
        assert "invalid problem" in bad.output

    def test_witness_requires_target_and_mode(self, spec_2222):
        runner = CliRunner()
        assert runner.invoke(main, ["--spec", spec_2222, "--check", "witness"]).exit_code == 2

    def test_budget_exhaustion_marks_partial(self, spec_2222):
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["--spec", spec_2222, "--check", "enum-transforms", "--budget-nodes", "3",
             "--format", "machine"],
        )
        assert result.exit_code == 3
        records = [json.loads(line) for line in result.output.splitlines()]
        assert any(r["verdict"] == "partial" for r in records)

    def test_out_file_written(self, spec_22, tmp_path):
        out = tmp_path / "report.jsonl"
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["--spec", spec_22, "--check", "enum-vertices", "--format", "machine",
             "--out", str(out)],
        )
        assert result.exit_code == 0
        assert out.exists() and out.read_text().count("\n") >= 5

    def test_label_grammar_error_is_usage_error(self, spec_2222):
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["--spec", spec_2222, "--check", "enum-decomps", "--effect", "X[1:1]@1"],
        )
        assert result.exit_code == 2

    def test_labels_translated_through_canonical_sort(self, tmp_path):
        # original system 1 is (3,2): measurement 1 has 3 outcomes; after
        # sorting it becomes measurement 2 of sorted system 2
        spec = write_spec(tmp_path, "u.yaml", "systems: [[3, 2], [2, 2]]\n")
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["--spec", spec, "--check", "enum-decomps", "--effect", "U@1*X[1|1]@2",
             "--format", "machine"],
        )
        assert result.exit_code == 0
        records = [json.loads(line) for line in result.output.splitlines()]
        decs = [r for r in records if r["instance"].startswith("decomposition:")]
        # the unit moved to sorted system 2 with measurements (2, 3): two decompositions
        assert len(decs) == 2
        assert all("@2" in r["witness"] for r in decs)


class TestDeterminism:
    def test_machine_reports_byte_identical(self, spec_2222):
        runner = CliRunner()
        args = ["--spec", spec_2222, "--check", "enum-vertices", "--format", "machine"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.output == second.output

    def test_run_twice_same_config(self, spec_22):
        config = parse_config(
            ["--spec", spec_22, "--check", "verify-theorem", "--format", "machine"]
        )
        import io
        from contextlib import redirect_stdout

        def capture():
            buf = io.StringIO()
            with redirect_stdout(buf):
                code = run(config)
            return code, buf.getvalue()

        assert capture() == capture()
