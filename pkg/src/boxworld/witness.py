"""Constructive witness states.

Given a fiducial target f and a collection of fiducial effects to avoid,
build a pure product state that hits f and none of the avoided effects.
Two constructions are implemented, selected by mode:

* LEMMA2: the avoid collection has at most K^(1)_1 elements and covers no
  sub-unit effect. Inductive over systems in canonical-sorted order; at
  each step either no other first-system measurement is filled by the
  avoided first components (block each such measurement and recurse on the
  terms agreeing with f there) or some measurement is exactly filled (pick
  the smallest term disagreeing with f off-system and recurse on it alone).
* LEMMA8: the avoid collection covers no sub-unit effect but fully resolves
  the unit on some system i. Branch on whether the filled measurement is
  the target's measurement on i, then recurse off-system via the LEMMA2
  construction with a single avoided term.

Every returned assignment is validated by evaluation before it is handed
back; a validation failure raises ConstructionBug and is treated as a test
failure, never an expected outcome. brute_force_witness is the independent
oracle: a lexicographic scan over all pure product states.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass

from .effects import Decomposition, _term_key
from .errors import ConstructionBug, InvalidWitnessProblem
from .model import (
    Assignment,
    JointEffectLabel,
    MultiSpec,
    SystemSpec,
    canonical_sort,
    label_table,
)


class WitnessMode(enum.Enum):
    LEMMA2 = "lemma2"
    LEMMA8 = "lemma8"


def _subunit_cover(multi: MultiSpec, raw_terms) -> tuple | None:
    """A sub-multiset sum equal to some sub-unit vector, or None."""
    tbl = label_table(multi)
    counts = Counter(raw_terms)
    keys = sorted(counts)
    vectors = [tbl.vectors[tbl.index[k]] for k in keys]
    maxima = [counts[k] for k in keys]
    dim = multi.joint_dimension
    for choice in itertools.product(*(range(m + 1) for m in maxima)):
        total = [0] * dim
        for mult, vec in zip(choice, vectors):
            if mult:
                for j, v in enumerate(vec):
                    total[j] += mult * v
        key = tuple(total)
        if key in tbl.subunit_vec_index:
            return key
    return None


def _filled_systems(multi: MultiSpec, raw_terms) -> list[int]:
    """Systems (0-based) on which the avoided components sum to the local unit."""
    tbl = label_table(multi)
    out = []
    for i, spec in enumerate(multi.systems):
        total = [0] * spec.dimension
        for raw in raw_terms:
            vec = tbl.local_vectors[i][raw[i]]
            for j, v in enumerate(vec):
                total[j] += v
        if tuple(total) == tbl.local_units[i]:
            out.append(i)
    return out


@dataclass(frozen=True)
class WitnessProblem:
    """A hit-and-avoid instance; construction validates the mode invariants."""

    multi: MultiSpec
    avoid: Decomposition
    target: JointEffectLabel
    mode: WitnessMode

    def __post_init__(self):
        tbl = label_table(self.multi)
        target_raw = tbl.raw_of(self.target)
        if not self.target.is_fiducial:
            raise InvalidWitnessProblem("target must be a fiducial label")
        avoid_raws = tuple(tbl.raw_of(t) for t in self.avoid.terms)
        if target_raw in avoid_raws:
            raise InvalidWitnessProblem("target may not belong to the avoided set")
        cover = _subunit_cover(self.multi, avoid_raws)
        if cover is not None:
            raise InvalidWitnessProblem("avoided set covers a sub-unit effect")
        if self.mode is WitnessMode.LEMMA2:
            limit = self.multi.min_first_outcomes
            if len(avoid_raws) > limit:
                raise InvalidWitnessProblem(
                    f"LEMMA2 allows at most {limit} avoided effects, got {len(avoid_raws)}"
                )
        elif self.mode is WitnessMode.LEMMA8:
            if not _filled_systems(self.multi, avoid_raws):
                raise InvalidWitnessProblem(
                    "LEMMA8 requires the avoided components to resolve the unit on some system"
                )

    def describe(self) -> str:
        return f"target={self.target} avoid={self.avoid} mode={self.mode.value}"


def _smallest_free(spec: SystemSpec, measurement: int, excluded: set[int]) -> int:
    for a in range(1, spec.outcomes(measurement) + 1):
        if a not in excluded:
            return a
    raise ConstructionBug(
        f"measurement {measurement} is fully excluded; preconditions were violated upstream"
    )


def _lemma2_raw(systems: tuple[SystemSpec, ...], avoid: tuple, target: tuple) -> list[tuple]:
    """Inductive construction over the leading system; raw labels relative to systems."""
    spec = systems[0]
    x1, a1 = target[0]
    if len(systems) == 1:
        avoided_by_meas: dict[int, set[int]] = {}
        for (x, a), in avoid:
            avoided_by_meas.setdefault(x, set()).add(a)
        choices = []
        for x in range(1, spec.measurements + 1):
            if x == x1:
                choices.append(a1)
            else:
                choices.append(_smallest_free(spec, x, avoided_by_meas.get(x, set())))
        return [tuple(choices)]

    first = [e[0] for e in avoid]
    filled = None
    for xp in range(1, spec.measurements + 1):
        if xp == x1:
            continue
        present = {a for (x, a) in first if x == xp}
        if len(present) == spec.outcomes(xp):
            filled = xp
            break

    if filled is None:
        # case (a): block every other measurement, recurse on terms agreeing with f
        first_set = set(first)
        choices = [0] * spec.measurements
        choices[x1 - 1] = a1
        for x in range(1, spec.measurements + 1):
            if x != x1:
                choices[x - 1] = _smallest_free(
                    spec, x, {a for (xx, a) in first_set if xx == x}
                )
        sub_avoid = tuple(e[1:] for e in avoid if e[0] == target[0])
        return [tuple(choices)] + _lemma2_raw(systems[1:], sub_avoid, target[1:])

    # case (b): a filled measurement forces exactly K_xp pairwise distinct terms
    if len(avoid) != spec.outcomes(filled) or any(x != filled for (x, _) in first):
        raise ConstructionBug(
            "filled measurement does not consist of exactly its outcome set"
        )
    if sorted(a for _, a in first) != list(range(1, spec.outcomes(filled) + 1)):
        raise ConstructionBug("filled measurement repeats an outcome")
    picks = [idx for idx, e in enumerate(avoid) if e[1:] != target[1:]]
    if not picks:
        raise ConstructionBug(
            "every avoided term agrees with the target off-system; the set covers a sub-unit"
        )
    alpha = picks[0]
    choices = [0] * spec.measurements
    choices[x1 - 1] = a1
    choices[filled - 1] = avoid[alpha][0][1]
    for x in range(1, spec.measurements + 1):
        if choices[x - 1] == 0:
            choices[x - 1] = 1
    return [tuple(choices)] + _lemma2_raw(systems[1:], (avoid[alpha][1:],), target[1:])


def _drop_system(raw: tuple, i: int) -> tuple:
    return raw[:i] + raw[i + 1 :]


def _lemma8_raw(multi: MultiSpec, avoid: tuple, target: tuple) -> list[tuple]:
    filled_systems = _filled_systems(multi, avoid)
    if not filled_systems:
        raise ConstructionBug("no system resolves the unit; validation should have caught this")
    i = filled_systems[0]
    spec = multi.systems[i]
    components = [e[i] for e in avoid]
    meas = {x for x, _ in components}
    if len(meas) != 1:
        raise ConstructionBug("unit-resolving components span several measurements")
    xp = next(iter(meas))
    if sorted(a for _, a in components) != list(range(1, spec.outcomes(xp) + 1)):
        raise ConstructionBug("unit-resolving components do not form one full measurement")

    x, a = target[i]
    others = tuple(s for j, s in enumerate(multi.systems) if j != i)
    if xp == x:
        alpha = next(idx for idx, e in enumerate(avoid) if e[i] == (x, a))
        choices = [1] * spec.measurements
        choices[x - 1] = a
    else:
        picks = [idx for idx, e in enumerate(avoid) if _drop_system(e, i) != _drop_system(target, i)]
        if not picks:
            raise ConstructionBug(
                "all avoided terms agree with the target off-system; the sum is a covered sub-unit"
            )
        alpha = picks[0]
        choices = [1] * spec.measurements
        choices[x - 1] = a
        choices[xp - 1] = avoid[alpha][i][1]
    rest = _lemma2_raw(others, (_drop_system(avoid[alpha], i),), _drop_system(target, i))
    return rest[:i] + [tuple(choices)] + rest[i:]


def _validated(problem: WitnessProblem, outcomes: list[tuple]) -> Assignment:
    tbl = label_table(problem.multi)
    assignment = tuple(outcomes)
    target_raw = tbl.raw_of(problem.target)
    if not tbl.raw_hits(target_raw, assignment):
        raise ConstructionBug(f"construction missed the target for {problem.describe()}")
    for term in problem.avoid.terms:
        if tbl.raw_hits(tbl.raw_of(term), assignment):
            raise ConstructionBug(
                f"construction hit avoided term {term} for {problem.describe()}"
            )
    return Assignment(assignment)


def lemma2_witness(problem: WitnessProblem) -> Assignment:
    """Run the inductive small-avoid construction; output validated by evaluation."""
    if problem.mode is not WitnessMode.LEMMA2:
        raise InvalidWitnessProblem("problem is not in LEMMA2 mode")
    _, record = canonical_sort(problem.multi)
    if not record.is_identity:
        raise InvalidWitnessProblem("LEMMA2 construction requires a canonical-sorted MultiSpec")
    tbl = label_table(problem.multi)
    avoid = tuple(tbl.raw_of(t) for t in problem.avoid.terms)
    target = tbl.raw_of(problem.target)
    outcomes = _lemma2_raw(problem.multi.systems, avoid, target)
    return _validated(problem, outcomes)


def lemma8_witness(problem: WitnessProblem) -> Assignment:
    """Run the unit-resolving construction; output validated by evaluation."""
    if problem.mode is not WitnessMode.LEMMA8:
        raise InvalidWitnessProblem("problem is not in LEMMA8 mode")
    tbl = label_table(problem.multi)
    avoid = tuple(tbl.raw_of(t) for t in problem.avoid.terms)
    target = tbl.raw_of(problem.target)
    outcomes = _lemma8_raw(problem.multi, avoid, target)
    return _validated(problem, outcomes)


def brute_force_witness(
    multi: MultiSpec, avoid: Decomposition, target: JointEffectLabel
) -> Assignment | None:
    """Independent oracle: first pure product state (lexicographic) that hits
    the target and none of the avoided effects, or None."""
    tbl = label_table(multi)
    mask = tbl.hit_masks[tbl.index[tbl.raw_of(target)]]
    for term in avoid.terms:
        mask &= ~tbl.hit_masks[tbl.index[tbl.raw_of(term)]]
        if not mask:
            return None
    lowest = mask & -mask
    return Assignment(tbl.assignments[lowest.bit_length() - 1])
