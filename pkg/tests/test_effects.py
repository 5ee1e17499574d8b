"""Effect decompositions, multiformity, covering and the sub-unit verifiers."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from boxworld import (
    ClassicalSystemUnsupported,
    EffectVector,
    JointEffectLabel,
    LocalEffectLabel,
    MultiSpec,
    NotInCone,
    PreconditionNotMet,
    UNIT,
    joint_effect_vector,
)
from boxworld.effects import (
    Decomposition,
    classify_subunit,
    covers,
    enumerate_decompositions,
    is_multiform,
    subunit_labels,
    verify_corollary2,
    verify_lemma1,
)
from boxworld.linalg import dot
from boxworld.model import label_table


def label_of(multi, *pairs):
    return joint_effect_vector(multi, JointEffectLabel.fiducial(*pairs))


def subunit_vector(multi, unit_system, *pairs):
    comps = []
    it = iter(pairs)
    for i in range(multi.size):
        if i + 1 == unit_system:
            comps.append(UNIT)
        else:
            x, a = next(it)
            comps.append(LocalEffectLabel(x, a))
    return joint_effect_vector(multi, JointEffectLabel(tuple(comps)))


def reference_decompositions(multi, effect):
    """Pruning-free oracle: try every multiset up to the mixed-state size bound."""
    tbl = label_table(multi)
    mixed_value = dot(effect.coordinates, tbl.mixed_vector)
    k_product = math.prod(max(s.outcome_counts) for s in multi.systems)
    bound = math.floor(mixed_value * k_product)
    out = []
    for size in range(0, bound + 1):
        for combo in itertools.combinations_with_replacement(range(len(tbl.labels)), size):
            total = [0] * multi.joint_dimension
            for j in combo:
                for t, v in enumerate(tbl.vectors[j]):
                    total[t] += v
            if tuple(total) == tuple(effect.coordinates):
                out.append(combo)
    return sorted(out)


def as_index_multisets(multi, decomps):
    tbl = label_table(multi)
    out = []
    for d in decomps:
        out.append(tuple(sorted(tbl.index[tbl.raw_of(t)] for t in d.terms)))
    return sorted(out)


class TestEnumerateDecompositions:
    def test_single_unit_two_decompositions(self):
        multi = MultiSpec.of((2, 2))
        unit = joint_effect_vector(multi, JointEffectLabel((UNIT,)))
        decomps = enumerate_decompositions(multi, unit)
        assert len(decomps) == 2
        assert {str(d) for d in decomps} == {
            "{X[1|1]@1, X[2|1]@1}",
            "{X[1|2]@1, X[2|2]@1}",
        }

    def test_subunit_two_decompositions(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        sub = subunit_vector(multi, 2, (1, 1))
        decomps = enumerate_decompositions(multi, sub)
        assert {str(d) for d in decomps} == {
            "{X[1|1]@1*X[1|1]@2, X[1|1]@1*X[2|1]@2}",
            "{X[1|1]@1*X[1|2]@2, X[1|1]@1*X[2|2]@2}",
        }

    def test_fiducial_effect_unique_decomposition(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        for pairs in [((1, 1), (1, 1)), ((2, 1), (1, 2)), ((2, 2), (2, 2))]:
            effect = label_of(multi, *pairs)
            decomps = enumerate_decompositions(multi, effect)
            assert len(decomps) == 1
            assert len(decomps[0]) == 1

    def test_not_in_cone_rejected(self):
        multi = MultiSpec.of((2, 2))
        from fractions import Fraction

        with pytest.raises(NotInCone):
            enumerate_decompositions(multi, EffectVector((Fraction(1, 2), 0, 0)))
        with pytest.raises(NotInCone):
            enumerate_decompositions(multi, EffectVector((0, -1, 0)))
        # integer vector inside no fiducial combination: unit minus a fiducial label
        with pytest.raises(NotInCone):
            enumerate_decompositions(multi, EffectVector((0, 1, -1)))

    def test_zero_effect_has_empty_decomposition(self):
        multi = MultiSpec.of((2, 2))
        decomps = enumerate_decompositions(multi, EffectVector((0, 0, 0)))
        assert decomps == [Decomposition(())]

    def test_matches_reference_search(self):
        """Pruned DFS equals the pruning-free oracle on systems up to joint dimension 16."""
        cases = []
        for spec in [
            ((2, 2),),
            ((2, 3),),
            ((3, 3),),
            ((2, 2, 2),),
            ((2, 2), (2, 2)),
            ((2, 2), (2, 3)),
            ((2, 2), (3, 3)),
            ((2, 3), (2, 3)),
        ]:
            multi = MultiSpec.of(*spec)
            assert multi.joint_dimension <= 16
            tbl = label_table(multi)
            targets = [EffectVector(tbl._vector_of(raw)) for raw in tbl.subunit_raws[:4]]
            targets.append(EffectVector(tbl.vectors[0]))
            if multi.joint_dimension <= 12:
                # the unit's oracle bound explodes combinatorially beyond this
                targets.append(EffectVector(tbl.unit_vector))
            else:
                pair_sum = tuple(
                    a + b for a, b in zip(tbl.vectors[0], tbl.vectors[len(tbl.vectors) // 2])
                )
                targets.append(EffectVector(pair_sum))
            cases.append((multi, targets))
        for multi, targets in cases:
            for effect in targets:
                got = as_index_multisets(multi, enumerate_decompositions(multi, effect))
                assert got == reference_decompositions(multi, effect)

    @given(data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_generated_sums_are_recovered(self, data):
        """Any explicit nonnegative integer combination appears among the results."""
        multi = data.draw(
            st.sampled_from([MultiSpec.of((2, 2)), MultiSpec.of((2, 3)), MultiSpec.of((2, 2), (2, 2))])
        )
        tbl = label_table(multi)
        picks = data.draw(
            st.lists(st.integers(0, len(tbl.labels) - 1), min_size=1, max_size=3)
        )
        total = [0] * multi.joint_dimension
        for j in picks:
            for t, v in enumerate(tbl.vectors[j]):
                total[t] += v
        effect = EffectVector(tuple(total))
        results = as_index_multisets(multi, enumerate_decompositions(multi, effect))
        assert tuple(sorted(picks)) in results
        for idxs in results:
            s = [0] * multi.joint_dimension
            for j in idxs:
                for t, v in enumerate(tbl.vectors[j]):
                    s[t] += v
            assert tuple(s) == tuple(total)


class TestIsMultiform:
    def test_subunit_multiform(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        assert is_multiform(multi, subunit_vector(multi, 1, (2, 1)))

    def test_fiducial_not_multiform(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        assert not is_multiform(multi, label_of(multi, (1, 2), (2, 1)))

    def test_joint_unit_multiform(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        assert is_multiform(multi, joint_effect_vector(multi, JointEffectLabel((UNIT, UNIT))))


class TestClassifySubunit:
    def test_detects_unit_system(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        d = classify_subunit(multi, subunit_vector(multi, 2, (1, 1)))
        assert d is not None and d.unit_system == 2
        assert d.as_label().subunit_system == 2

    def test_joint_unit_not_subunit(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        assert classify_subunit(multi, joint_effect_vector(multi, JointEffectLabel((UNIT, UNIT)))) is None

    def test_fiducial_not_subunit(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        assert classify_subunit(multi, label_of(multi, (1, 1), (1, 1))) is None

    def test_degenerate_single_system_unit(self):
        multi = MultiSpec.of((2, 2))
        d = classify_subunit(multi, joint_effect_vector(multi, JointEffectLabel((UNIT,))))
        assert d is not None and d.unit_system == 1 and d.fixed_components == ()


class TestCovers:
    def _decomp(self, multi, *pair_lists):
        return Decomposition(tuple(JointEffectLabel.fiducial(*p) for p in pair_lists))

    def test_whole_set_sum_counts_nonstrictly(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        terms = self._decomp(multi, ((1, 1), (1, 1)), ((1, 1), (1, 2)))
        target = subunit_vector(multi, 2, (1, 1))
        assert covers(multi, terms, target, strict=False)

    def test_whole_set_excluded_when_strict(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        terms = self._decomp(multi, ((1, 1), (1, 1)), ((1, 1), (1, 2)))
        target = subunit_vector(multi, 2, (1, 1))
        assert not covers(multi, terms, target, strict=True)

    def test_zero_effect_strictly_covered_by_empty_subset(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        terms = self._decomp(multi, ((1, 1), (1, 1)))
        zero = EffectVector((0,) * multi.joint_dimension)
        assert covers(multi, terms, zero, strict=True)

    def test_repeated_terms_respected(self):
        multi = MultiSpec.of((2, 2))
        terms = Decomposition(
            (JointEffectLabel.fiducial((1, 1)), JointEffectLabel.fiducial((1, 1)))
        )
        doubled = 2 * label_of(multi, (1, 1))
        assert covers(multi, terms, doubled, strict=False)
        assert not covers(multi, terms, doubled, strict=True)


class TestVerifyLemma1:
    def test_bipartite_2222(self):
        report = verify_lemma1(MultiSpec.of((2, 2), (2, 2)))
        assert report.passed
        checked = [r for r in report.records if r.verdict == "pass"]
        assert len(checked) == 8  # sub-unit effects
        totals = report.records[-1]
        assert "decompositions=16" in totals.witness
        assert "repeated-term decompositions=0" in totals.witness

    def test_bipartite_22_23(self):
        assert verify_lemma1(MultiSpec.of((2, 2), (2, 3))).passed

    def test_tripartite_222(self):
        assert verify_lemma1(MultiSpec.of((2, 2), (2, 2), (2, 2))).passed

    def test_decomposition_count_matches_measurements(self):
        """Each sub-unit effect has exactly one decomposition per unit-system measurement."""
        for spec in [((2, 2), (2, 3)), ((2, 3), (2, 3)), ((2, 2), (3, 3))]:
            multi = MultiSpec.of(*spec)
            for lab in subunit_labels(multi):
                i = lab.subunit_system
                decomps = enumerate_decompositions(multi, joint_effect_vector(multi, lab))
                assert len(decomps) == multi.systems[i - 1].measurements

    def test_classical_rejected(self):
        with pytest.raises(ClassicalSystemUnsupported):
            verify_lemma1(MultiSpec.of((2,), (2, 2)))


class TestVerifyCorollary2:
    def test_bipartite_2222_exactly_subunits(self):
        report = verify_corollary2(MultiSpec.of((2, 2), (2, 2)))
        assert report.passed
        multiform_records = [r for r in report.records if "multiform size-2 sum" in r.instance]
        assert len(multiform_records) == 8

    def test_single_22_degenerate_unit(self):
        multi = MultiSpec.of((2, 2))
        report = verify_corollary2(multi)
        assert report.passed
        multiform_records = [r for r in report.records if "multiform size-2 sum" in r.instance]
        assert len(multiform_records) == 1  # the unit effect

    def test_bipartite_22_33_system1_only(self):
        multi = MultiSpec.of((2, 2), (3, 3))
        report = verify_corollary2(multi)
        assert report.passed
        tbl = label_table(multi)
        multiform_records = [r for r in report.records if "multiform size-2 sum" in r.instance]
        # sub-unit effects whose unit system is system 1 (the 2-outcome one)
        n_system1 = sum(1 for raw in tbl.subunit_raws if raw[0] is None)
        assert len(multiform_records) == n_system1

    def test_requires_canonical_order(self):
        with pytest.raises(PreconditionNotMet):
            verify_corollary2(MultiSpec.of((2, 3), (2, 2)))

    def test_classical_rejected(self):
        with pytest.raises(ClassicalSystemUnsupported):
            verify_corollary2(MultiSpec.of((3,)))
