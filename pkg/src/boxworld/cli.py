"""Command-line front end.

One command, one grammar: a system description file selects the joint
system, --check selects the verification or enumeration to run, and the
report is rendered as human text or line-delimited JSON records (which are
byte-identical across repeated runs on the same inputs).

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
3 resource budget exhausted (the partial report is marked partial).
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from .dynamics import (
    DEFAULT_MAX_NODES,
    decompose_trivial,
    enumerate_reversible,
    verify_theorem,
)
from .effects import Decomposition, enumerate_decompositions, verify_corollary2, verify_lemma1
from .errors import (
    BoxworldError,
    ClassicalSystemUnsupported,
    InvalidWitnessProblem,
    NotInCone,
    ParseError,
    ResourceBudgetExceeded,
)
from .model import (
    CanonicalRelabelling,
    EffectVector,
    MultiSpec,
    canonical_sort,
    joint_effect_vector,
)
from .polytope import DEFAULT_MAX_RAYS, build_polytope, enumerate_vertices
from .reporting import Report, human_lines, machine_lines
from .specfile import parse_effect_expression, parse_joint_label, parse_system_file
from .witness import WitnessMode, WitnessProblem, brute_force_witness, lemma2_witness, lemma8_witness

COMMANDS = (
    "verify-lemma1",
    "verify-cor2",
    "verify-theorem",
    "enum-vertices",
    "enum-transforms",
    "enum-decomps",
    "witness",
)
THEOREM_LEVEL = {"verify-lemma1", "verify-cor2", "verify-theorem", "enum-transforms", "witness"}


@dataclass(frozen=True)
class Budget:
    max_rays: int = DEFAULT_MAX_RAYS
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float | None = None

    def deadline(self) -> float | None:
        if self.max_seconds is None:
            return None
        return time.monotonic() + self.max_seconds


@dataclass(frozen=True)
class RunConfig:
    spec_path: Path
    command: str
    budget: Budget
    out: Path | None
    fmt: str
    effect: str | None
    target: str | None
    avoid: tuple[str, ...]
    mode: str | None
    original: MultiSpec
    multi: MultiSpec  # canonical-sorted; all commands run here
    record: CanonicalRelabelling


def build_config(
    spec: str,
    check: str,
    budget_nodes: int,
    budget_rays: int,
    budget_seconds: float | None,
    out: str | None,
    fmt: str,
    effect: str | None,
    target: str | None,
    avoid: tuple[str, ...],
    mode: str | None,
) -> RunConfig:
    if check not in COMMANDS:
        raise ParseError(f"unknown command {check!r}")
    if budget_nodes <= 0 or budget_rays <= 0 or (budget_seconds is not None and budget_seconds <= 0):
        raise ParseError("budget values must be positive")
    original = parse_system_file(spec)
    multi, record = canonical_sort(original)
    if check in THEOREM_LEVEL and multi.has_classical:
        raise ClassicalSystemUnsupported(
            f"{original.describe()} contains a classical (single-measurement) system; "
            f"'{check}' is a theorem-level command"
        )
    if check == "enum-decomps" and not effect:
        raise ParseError("enum-decomps requires --effect")
    if check == "witness":
        if not target:
            raise ParseError("witness requires --target")
        if mode not in ("lemma2", "lemma8"):
            raise ParseError("witness requires --mode lemma2|lemma8")
    return RunConfig(
        spec_path=Path(spec),
        command=check,
        budget=Budget(budget_rays, budget_nodes, budget_seconds),
        out=Path(out) if out else None,
        fmt=fmt,
        effect=effect,
        target=target,
        avoid=tuple(avoid),
        mode=mode,
        original=original,
        multi=multi,
        record=record,
    )


def _frac_str(value) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def _translate(config: RunConfig, text: str):
    """Parse a label in the input file's numbering, move it to sorted order."""
    return config.record.apply_label(parse_joint_label(config.original, text))


def _run_enum_vertices(config: RunConfig, report: Report) -> None:
    polytope = build_polytope(config.multi)
    vertices = enumerate_vertices(
        polytope, max_rays=config.budget.max_rays, deadline=config.budget.deadline()
    )
    width = len(str(len(vertices)))
    for i, v in enumerate(vertices, start=1):
        report.info(
            "vertex",
            f"{i:0{width}d}",
            witness=" ".join(_frac_str(c) for c in v.coordinates),
        )
    report.add("enum-vertices", "vertex enumeration complete", True, witness=f"vertices={len(vertices)}")


def _run_enum_transforms(config: RunConfig, report: Report) -> None:
    perms = enumerate_reversible(
        config.multi, max_nodes=config.budget.max_nodes, deadline=config.budget.deadline()
    )
    width = len(str(len(perms)))
    trivial_count = 0
    for i, perm in enumerate(perms, start=1):
        pairs = ";".join(f"{src}->{dst}" for src, dst in perm.label_pairs())
        form = decompose_trivial(config.multi, perm)
        if form is not None:
            trivial_count += 1
            payload = f"{pairs} | {form.describe()}"
        else:
            payload = f"{pairs} | no trivial form"
        report.info("transform", f"{i:0{width}d}", witness=payload)
    report.add(
        "enum-transforms",
        "reversible transformations enumerated",
        True,
        witness=f"transformations={len(perms)} trivially-decomposable={trivial_count}",
    )


def _run_enum_decomps(config: RunConfig, report: Report) -> None:
    labels = parse_effect_expression(config.original, config.effect)
    moved = [config.record.apply_label(lab) for lab in labels]
    total = [0] * config.multi.joint_dimension
    for lab in moved:
        for j, v in enumerate(joint_effect_vector(config.multi, lab).coordinates):
            total[j] += v
    effect = EffectVector(tuple(total))
    try:
        decomps = enumerate_decompositions(config.multi, effect)
    except NotInCone as exc:
        report.add("enum-decomps", config.effect, False, witness=str(exc))
        return
    width = len(str(len(decomps)))
    for i, dec in enumerate(decomps, start=1):
        report.info("decomposition", f"{i:0{width}d}", witness=str(dec))
    report.add(
        "enum-decomps",
        "decomposition enumeration complete",
        True,
        witness=f"decompositions={len(decomps)}",
    )


def _run_witness(config: RunConfig, report: Report) -> None:
    target = _translate(config, config.target)
    avoid = Decomposition(tuple(_translate(config, text) for text in config.avoid))
    mode = WitnessMode.LEMMA2 if config.mode == "lemma2" else WitnessMode.LEMMA8
    try:
        problem = WitnessProblem(config.multi, avoid, target, mode)
        assignment = lemma2_witness(problem) if mode is WitnessMode.LEMMA2 else lemma8_witness(problem)
    except InvalidWitnessProblem as exc:
        report.add("witness", f"target={config.target}", False, witness=f"invalid problem: {exc}")
        return
    oracle = brute_force_witness(config.multi, avoid, target)
    report.add(
        "witness",
        f"target={target} avoid={avoid}",
        oracle is not None,
        witness=f"constructed={assignment} oracle={oracle}",
    )


def run(config: RunConfig) -> int:
    """Execute the configured command; returns the process exit status."""
    started = time.time()
    report = Report(config.command)
    report.info(
        "input",
        f"{config.original.describe()} canonicalized to {config.multi.describe()}",
        witness=config.record.describe(),
        work=0,
    )
    status = 0
    try:
        if config.command == "verify-lemma1":
            report.extend(verify_lemma1(config.multi))
        elif config.command == "verify-cor2":
            report.extend(verify_corollary2(config.multi))
        elif config.command == "verify-theorem":
            report.extend(
                verify_theorem(
                    config.multi,
                    max_nodes=config.budget.max_nodes,
                    deadline=config.budget.deadline(),
                )
            )
        elif config.command == "enum-vertices":
            _run_enum_vertices(config, report)
        elif config.command == "enum-transforms":
            _run_enum_transforms(config, report)
        elif config.command == "enum-decomps":
            _run_enum_decomps(config, report)
        elif config.command == "witness":
            _run_witness(config, report)
    except ResourceBudgetExceeded as exc:
        report.mark_partial(str(exc))
        status = 3
    if status == 0 and not report.passed:
        status = 1
    if config.fmt == "machine":
        lines = machine_lines(config.command, report)
    else:
        lines = human_lines(config.command, report, elapsed=time.time() - started)
    text = "\n".join(lines) + "\n"
    if config.out is not None:
        config.out.write_text(text)
    else:
        click.echo(text, nl=False)
    return status


@click.command(name="boxworld")
@click.option("--spec", required=True, type=click.Path(exists=True, dir_okay=False), help="System description file.")
@click.option("--check", required=True, type=click.Choice(COMMANDS), help="Verification or enumeration to run.")
@click.option("--budget-nodes", default=DEFAULT_MAX_NODES, show_default=True, help="Max search nodes.")
@click.option("--budget-rays", default=DEFAULT_MAX_RAYS, show_default=True, help="Max intermediate rays.")
@click.option("--budget-seconds", default=None, type=float, help="Wall-clock budget in seconds.")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
@click.option("--format", "fmt", default="human", type=click.Choice(["human", "machine"]), show_default=True)
@click.option("--effect", default=None, help="Effect expression for enum-decomps (sum of joint labels).")
@click.option("--target", default=None, help="Target fiducial label for witness.")
@click.option("--avoid", multiple=True, help="Fiducial label to avoid (repeatable).")
@click.option("--mode", default=None, type=click.Choice(["lemma2", "lemma8"]), help="Witness construction mode.")
def main(spec, check, budget_nodes, budget_rays, budget_seconds, out, fmt, effect, target, avoid, mode):
    """Exact verification and enumeration for multipartite Boxworld systems."""
    try:
        config = build_config(
            spec, check, budget_nodes, budget_rays, budget_seconds, out, fmt, effect, target, avoid, mode
        )
    except (ParseError, ClassicalSystemUnsupported) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    try:
        sys.exit(run(config))
    except BoxworldError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def parse_config(argv: list[str]) -> RunConfig:
    """Programmatic front door sharing the CLI grammar exactly."""
    ctx = main.make_context("boxworld", list(argv), resilient_parsing=False)
    params = ctx.params
    return build_config(
        params["spec"],
        params["check"],
        params["budget_nodes"],
        params["budget_rays"],
        params["budget_seconds"],
        params["out"],
        params["fmt"],
        params["effect"],
        params["target"],
        params["avoid"],
        params["mode"],
    )


if __name__ == "__main__":
    main()
