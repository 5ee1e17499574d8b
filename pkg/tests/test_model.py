"""Core representation: canonical coordinates, states, evaluation, sorting."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from boxworld import (
    UNIT,
    Assignment,
    DimensionError,
    EffectVector,
    InvalidAssignment,
    InvalidLabel,
    InvalidSpec,
    JointEffectLabel,
    LocalEffectLabel,
    MultiSpec,
    SystemSpec,
    canonical_sort,
    enumerate_pure_product_states,
    evaluate,
    joint_effect_vector,
    local_effect_vector,
    pure_product_state,
)
from boxworld.linalg import rank

system_specs = st.lists(st.integers(2, 4), min_size=1, max_size=3).map(
    lambda ks: SystemSpec(tuple(ks))
)
multi_specs = st.lists(system_specs, min_size=1, max_size=2).map(
    lambda ss: MultiSpec(tuple(ss))
)


def all_fiducial_labels(multi):
    per_system = [
        [(x, a) for x in range(1, s.measurements + 1) for a in range(1, s.outcomes(x) + 1)]
        for s in multi.systems
    ]
    for combo in itertools.product(*per_system):
        yield JointEffectLabel.fiducial(*combo)


class TestSystemSpec:
    def test_dimension_formula(self):
        assert SystemSpec((2, 2)).dimension == 3
        assert SystemSpec((2, 3)).dimension == 4
        assert SystemSpec((3, 3, 4)).dimension == 8

    def test_outcome_count_one_rejected(self):
        with pytest.raises(InvalidSpec):
            SystemSpec((2, 1))

    def test_empty_rejected(self):
        with pytest.raises(InvalidSpec):
            SystemSpec(())

    def test_classical_flag(self):
        assert SystemSpec((5,)).is_classical
        assert not SystemSpec((2, 2)).is_classical


class TestLocalEffectVector:
    def test_unit_is_first_basis_vector(self):
        spec = SystemSpec((2, 2))
        assert local_effect_vector(spec, UNIT).coordinates == (1, 0, 0)

    def test_dependent_outcome_formula(self):
        spec = SystemSpec((2, 2))
        assert local_effect_vector(spec, LocalEffectLabel(1, 2)).coordinates == (1, -1, 0)

    def test_out_of_range_rejected(self):
        spec = SystemSpec((2, 2))
        with pytest.raises(InvalidLabel):
            local_effect_vector(spec, LocalEffectLabel(3, 1))
        with pytest.raises(InvalidLabel):
            local_effect_vector(spec, LocalEffectLabel(1, 3))

    @given(spec=system_specs)
    def test_basis_has_full_rank(self, spec):
        """The unit plus independent fiducial vectors form a basis of dimension d."""
        rows = [local_effect_vector(spec, UNIT).coordinates]
        for x in range(1, spec.measurements + 1):
            for a in range(1, spec.outcomes(x)):
                rows.append(local_effect_vector(spec, LocalEffectLabel(x, a)).coordinates)
        assert len(rows) == spec.dimension
        assert rank(rows) == spec.dimension

    @given(spec=system_specs)
    def test_measurement_sums_to_unit(self, spec):
        """Sum over all outcomes of one measurement equals the unit, dependent included."""
        unit = local_effect_vector(spec, UNIT)
        for x in range(1, spec.measurements + 1):
            total = local_effect_vector(spec, LocalEffectLabel(x, 1))
            for a in range(2, spec.outcomes(x) + 1):
                total = total + local_effect_vector(spec, LocalEffectLabel(x, a))
            assert total == unit


class TestJointEffectVector:
    def test_joint_unit_single_nonzero(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        unit = JointEffectLabel((UNIT, UNIT))
        coords = joint_effect_vector(multi, unit).coordinates
        assert sum(1 for v in coords if v != 0) == 1
        assert coords[0] == 1

    def test_basis_pair_single_slot(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        lab = JointEffectLabel.fiducial((1, 1), (1, 1))
        coords = joint_effect_vector(multi, lab).coordinates
        assert sorted(coords) == [0] * 8 + [1]

    def test_kronecker_linearity(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        lhs = joint_effect_vector(multi, JointEffectLabel((LocalEffectLabel(1, 2), UNIT)))
        a = joint_effect_vector(multi, JointEffectLabel((UNIT, UNIT)))
        b = joint_effect_vector(multi, JointEffectLabel((LocalEffectLabel(1, 1), UNIT)))
        assert lhs == a - b

    def test_component_count_mismatch(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        with pytest.raises(InvalidLabel):
            joint_effect_vector(multi, JointEffectLabel((UNIT,)))


class TestPureProductState:
    def test_hitting_structure(self):
        multi = MultiSpec.of((2, 2))
        state = pure_product_state(multi, Assignment(((1, 1),)))
        x11 = joint_effect_vector(multi, JointEffectLabel.fiducial((1, 1)))
        x21 = joint_effect_vector(multi, JointEffectLabel.fiducial((1, 2)))
        assert evaluate(x11, state) == 1
        assert evaluate(x21, state) == 0

    def test_normalization(self):
        multi = MultiSpec.of((2, 2))
        unit = joint_effect_vector(multi, JointEffectLabel((UNIT,)))
        for a in enumerate_pure_product_states(multi):
            assert evaluate(unit, pure_product_state(multi, a)) == 1

    def test_assignment_counts(self):
        assert len(enumerate_pure_product_states(MultiSpec.of((2, 2)))) == 4
        assert len(enumerate_pure_product_states(MultiSpec.of((2, 2), (2, 2)))) == 16
        assert len(enumerate_pure_product_states(MultiSpec.of((2, 3)))) == 6

    def test_incomplete_assignment_rejected(self):
        multi = MultiSpec.of((2, 2), (2, 2))
        with pytest.raises(InvalidAssignment):
            pure_product_state(multi, Assignment(((1, 1),)))
        with pytest.raises(InvalidAssignment):
            pure_product_state(multi, Assignment(((1,), (1, 1))))

    @given(multi=multi_specs, data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_fiducial_evaluation_is_indicator(self, multi, data):
        """A pure product state hits a fiducial label iff every component matches."""
        assignments = enumerate_pure_product_states(multi)
        a = data.draw(st.sampled_from(assignments))
        labels = list(all_fiducial_labels(multi))
        lab = data.draw(st.sampled_from(labels))
        state = pure_product_state(multi, a)
        value = evaluate(joint_effect_vector(multi, lab), state)
        matches = all(
            a.outcome(i + 1, c.measurement) == c.outcome
            for i, c in enumerate(lab.components)
        )
        assert value in (0, 1)
        assert (value == 1) == matches


class TestEvaluate:
    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            evaluate(
                EffectVector((1, 0, 0)),
                pure_product_state(MultiSpec.of((2, 2), (2, 2)), Assignment(((1, 1), (1, 1)))),
            )

    def test_measurement_pair_sums_to_one(self):
        """Summing over all outcome tuples of one joint measurement gives 1."""
        multi = MultiSpec.of((2, 2), (2, 2))
        state = pure_product_state(multi, Assignment(((1, 2), (2, 1))))
        total = sum(
            evaluate(
                joint_effect_vector(multi, JointEffectLabel.fiducial((1, a), (2, b))), state
            )
            for a in (1, 2)
            for b in (1, 2)
        )
        assert total == 1

    def test_exact_fractions_survive(self):
        multi = MultiSpec.of((2, 2))
        states = [pure_product_state(multi, a) for a in enumerate_pure_product_states(multi)]
        mix = Fraction(1, 4) * (states[0] + states[1] + states[2] + states[3])
        x11 = joint_effect_vector(multi, JointEffectLabel.fiducial((1, 1)))
        assert evaluate(x11, mix) == Fraction(1, 2)


class TestCanonicalSort:
    def test_measurement_swap_recorded(self):
        multi = MultiSpec.of((3, 2))
        sorted_multi, record = canonical_sort(multi)
        assert sorted_multi == MultiSpec.of((2, 3))
        assert record.measurement_maps == ((1, 0),)
        assert not record.is_identity

    def test_system_swap_recorded(self):
        multi = MultiSpec.of((2, 3), (2, 2))
        sorted_multi, record = canonical_sort(multi)
        assert sorted_multi == MultiSpec.of((2, 2), (2, 3))
        assert record.system_map == (1, 0)

    def test_idempotent(self):
        multi = MultiSpec.of((2, 2), (2, 3))
        sorted_multi, record = canonical_sort(multi)
        assert sorted_multi == multi
        assert record.is_identity
        again, record2 = canonical_sort(sorted_multi)
        assert again == sorted_multi and record2.is_identity

    @given(multi=multi_specs)
    @settings(max_examples=60, deadline=None)
    def test_relabelling_round_trip(self, multi):
        """Applying the record then inverting it is the identity on labels."""
        sorted_multi, record = canonical_sort(multi)
        assert sorted(s.outcome_counts for s in sorted_multi.systems) == [
            s.outcome_counts for s in sorted_multi.systems
        ]
        for lab in all_fiducial_labels(multi):
            moved = record.apply_label(lab)
            joint_effect_vector(sorted_multi, moved)  # must be valid there
            assert record.invert_label(moved) == lab

    @given(multi=multi_specs)
    @settings(max_examples=30, deadline=None)
    def test_vectors_transported_consistently(self, multi):
        """Label translation commutes with evaluation against translated states."""
        sorted_multi, record = canonical_sort(multi)
        labels = list(all_fiducial_labels(multi))[:6]
        for orig_assignment in enumerate_pure_product_states(multi)[:4]:
            moved_outcomes = [None] * multi.size
            for i in range(multi.size):
                meas_map = record.measurement_maps[i]
                reordered = [0] * len(meas_map)
                for j, q in enumerate(meas_map):
                    reordered[q] = orig_assignment.outcomes[i][j]
                moved_outcomes[record.system_map[i]] = tuple(reordered)
            moved_assignment = Assignment(tuple(moved_outcomes))
            for lab in labels:
                orig_val = evaluate(
                    joint_effect_vector(multi, lab),
                    pure_product_state(multi, orig_assignment),
                )
                moved_val = evaluate(
                    joint_effect_vector(sorted_multi, record.apply_label(lab)),
                    pure_product_state(sorted_multi, moved_assignment),
                )
                assert orig_val == moved_val
