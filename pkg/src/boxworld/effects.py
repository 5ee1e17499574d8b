"""Effect-cone analysis: decompositions, multiformity, covering, sub-unit structure.

A decomposition of an effect is a multiset of joint fiducial labels whose
vectors sum to it. Enumeration is a depth-first search over labels in
canonical order with two exact pruning rules: the running remainder must
evaluate nonnegatively on every pure product state, and the multiset size
is capped by the pairing of the target with the maximally mixed state times
the product of the largest local outcome counts (every fiducial term
contributes at least the reciprocal of that product there).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ClassicalSystemUnsupported,
    DimensionError,
    NotInCone,
    PreconditionNotMet,
)
from .linalg import dot
from .model import (
    UNIT,
    EffectVector,
    JointEffectLabel,
    LocalEffectLabel,
    MultiSpec,
    canonical_sort,
    joint_effect_vector,
    label_table,
)
from .reporting import Report


def _term_key(label: JointEffectLabel):
    return tuple((c.measurement, c.outcome) for c in label.components)


@dataclass(frozen=True)
class Decomposition:
    """A multiset of joint fiducial labels, stored in canonical sorted order."""

    terms: tuple[JointEffectLabel, ...]

    def __post_init__(self):
        terms = tuple(sorted(self.terms, key=_term_key))
        for t in terms:
            if not t.is_fiducial:
                raise ValueError(f"decomposition term {t} is not fiducial")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def vector_sum(self, multi: MultiSpec) -> EffectVector:
        total = [0] * multi.joint_dimension
        for t in self.terms:
            for j, v in enumerate(joint_effect_vector(multi, t).coordinates):
                total[j] += v
        return EffectVector(tuple(total))

    def __str__(self) -> str:
        return "{" + ", ".join(str(t) for t in self.terms) + "}"


@dataclass(frozen=True)
class SubUnitDescriptor:
    """Identifies an effect as sub-unit: the unit system plus the fixed components."""

    unit_system: int  # 1-based
    fixed_components: tuple[LocalEffectLabel, ...]  # remaining systems, in order

    def as_label(self) -> JointEffectLabel:
        comps = list(self.fixed_components)
        comps.insert(self.unit_system - 1, UNIT)
        return JointEffectLabel(tuple(comps))


def _check_dimension(multi: MultiSpec, effect: EffectVector) -> None:
    if effect.dimension != multi.joint_dimension:
        raise DimensionError(
            f"effect dimension {effect.dimension} != joint dimension {multi.joint_dimension}"
        )


def _decompose_indices(multi: MultiSpec, coords, stop_after: int | None = None):
    """Index multisets (nondecreasing) of fiducial labels summing to coords.

    Raises NotInCone on obviously infeasible targets; an exhausted search with
    no results is reported as an empty list and mapped to NotInCone by the
    public wrapper.
    """
    tbl = label_table(multi)
    dim = multi.joint_dimension
    remaining = list(coords)
    for v in remaining:
        if isinstance(v, Fraction):
            raise NotInCone("target has non-integer coordinates")
    profile = [dot(remaining, sv) for sv in tbl.state_vectors]
    if any(p < 0 for p in profile):
        raise NotInCone("target evaluates negatively on a pure product state")
    mixed_value = dot(remaining, tbl.mixed_vector)
    if mixed_value < 0:
        raise NotInCone("target evaluates negatively on the maximally mixed state")
    k_product = math.prod(max(s.outcome_counts) for s in multi.systems)
    bound = math.floor(mixed_value * k_product)

    hit_lists = []
    for mask in tbl.hit_masks:
        hits = []
        bit = 0
        while mask:
            if mask & 1:
                hits.append(bit)
            mask >>= 1
            bit += 1
        hit_lists.append(tuple(hits))

    vectors = tbl.vectors
    n_labels = len(vectors)
    results: list[tuple[int, ...]] = []
    current: list[int] = []
    done = False

    def dfs(start: int) -> None:
        nonlocal done
        if done:
            return
        if not any(remaining):
            results.append(tuple(current))
            if stop_after is not None and len(results) >= stop_after:
                done = True
            return
        if len(current) >= bound:
            return
        for j in range(start, n_labels):
            hits = hit_lists[j]
            if any(profile[s] < 1 for s in hits):
                continue
            vec = vectors[j]
            for s in hits:
                profile[s] -= 1
            for t in range(dim):
                remaining[t] -= vec[t]
            current.append(j)
            dfs(j)
            current.pop()
            for t in range(dim):
                remaining[t] += vec[t]
            for s in hits:
                profile[s] += 1
            if done:
                return

    dfs(0)
    return results


def enumerate_decompositions(multi: MultiSpec, effect: EffectVector) -> list[Decomposition]:
    """Complete list of decompositions of the effect, canonically ordered."""
    _check_dimension(multi, effect)
    index_sets = _decompose_indices(multi, effect.coordinates)
    if not index_sets:
        raise NotInCone("target admits no fiducial decomposition")
    tbl = label_table(multi)
    return [
        Decomposition(tuple(tbl.label_object(tbl.labels[j]) for j in idxs))
        for idxs in index_sets
    ]


def is_multiform(multi: MultiSpec, effect: EffectVector) -> bool:
    """True iff the effect admits at least two distinct decompositions."""
    _check_dimension(multi, effect)
    index_sets = _decompose_indices(multi, effect.coordinates, stop_after=2)
    if not index_sets:
        raise NotInCone("target admits no fiducial decomposition")
    return len(index_sets) >= 2


def classify_subunit(multi: MultiSpec, effect: EffectVector) -> SubUnitDescriptor | None:
    """Descriptor if the vector equals some sub-unit label's vector, else None."""
    _check_dimension(multi, effect)
    tbl = label_table(multi)
    raw = tbl.subunit_vec_index.get(tuple(effect.coordinates))
    if raw is None:
        return None
    unit_system = next(i for i, c in enumerate(raw) if c is None) + 1
    fixed = tuple(LocalEffectLabel(*c) for c in raw if c is not None)
    return SubUnitDescriptor(unit_system, fixed)


def covers(
    multi: MultiSpec, terms: Decomposition, target: EffectVector, strict: bool = False
) -> bool:
    """True iff some sub-multiset of the terms sums to the target.

    The empty sub-multiset counts, so any nonempty set of terms strictly
    covers the zero effect. With strict=True the full multiset is excluded.
    """
    _check_dimension(multi, target)
    goal = tuple(target.coordinates)
    counts = Counter(_term_key(t) for t in terms.terms)
    keys = sorted(counts)
    vectors = [joint_effect_vector(multi, JointEffectLabel.fiducial(*k)).coordinates for k in keys]
    maxima = [counts[k] for k in keys]
    for choice in itertools.product(*(range(m + 1) for m in maxima)):
        if strict and list(choice) == maxima:
            continue
        total = [0] * multi.joint_dimension
        for mult, vec in zip(choice, vectors):
            if mult:
                for j, v in enumerate(vec):
                    total[j] += mult * v
        if tuple(total) == goal:
            return True
    return False


def _reject_classical(multi: MultiSpec) -> None:
    if multi.has_classical:
        raise ClassicalSystemUnsupported(
            f"{multi.describe()} contains a single-measurement system"
        )


def subunit_labels(multi: MultiSpec) -> list[JointEffectLabel]:
    """All sub-unit labels (exactly one unit component) in deterministic order."""
    tbl = label_table(multi)
    return [tbl.label_object(raw) for raw in tbl.subunit_raws]


def verify_lemma1(multi: MultiSpec) -> Report:
    """Exhaustively check the decomposition structure of every sub-unit effect.

    For each sub-unit effect and each of its decompositions: every term must
    agree with the effect away from the unit system, and the unit-system
    components must be exactly one full fiducial measurement. Additionally
    (the corollary) no strict nonempty sub-multiset of a decomposition may be
    multiform.
    """
    _reject_classical(multi)
    tbl = label_table(multi)
    report = Report("verify-lemma1")
    total_decomps = 0
    repeated_terms = 0
    for raw in tbl.subunit_raws:
        unit_at = next(i for i, c in enumerate(raw) if c is None)
        spec = multi.systems[unit_at]
        effect = EffectVector(tbl._vector_of(raw))
        label_str = str(tbl.label_object(raw))
        decomps = enumerate_decompositions(multi, effect)
        total_decomps += len(decomps)
        problems = []
        if len(decomps) != spec.measurements:
            problems.append(
                f"expected {spec.measurements} decompositions, found {len(decomps)}"
            )
        for dec in decomps:
            term_keys = [_term_key(t) for t in dec.terms]
            if len(set(term_keys)) != len(term_keys):
                repeated_terms += 1
            unit_components = []
            for t in dec.terms:
                for j, comp in enumerate(t.components):
                    if j == unit_at:
                        unit_components.append((comp.measurement, comp.outcome))
                    elif (comp.measurement, comp.outcome) != raw[j]:
                        problems.append(f"term {t} deviates off the unit system")
            by_measurement = Counter(x for x, _ in unit_components)
            if len(by_measurement) != 1:
                problems.append(f"decomposition {dec} mixes measurements on the unit system")
            else:
                x = next(iter(by_measurement))
                expected = Counter({a: 1 for a in range(1, spec.outcomes(x) + 1)})
                if Counter(a for _, a in unit_components) != expected:
                    problems.append(
                        f"decomposition {dec} does not exhaust measurement {x}"
                    )
            # corollary: strict nonempty sub-multisets are never multiform
            n = len(dec.terms)
            for size in range(1, n):
                for subset in set(itertools.combinations(range(n), size)):
                    partial = [0] * multi.joint_dimension
                    for i in subset:
                        vec = joint_effect_vector(multi, dec.terms[i]).coordinates
                        for j, v in enumerate(vec):
                            partial[j] += v
                    if is_multiform(multi, EffectVector(tuple(partial))):
                        problems.append(
                            f"strict sub-multiset {[str(dec.terms[i]) for i in subset]} is multiform"
                        )
        report.add(
            "lemma1",
            label_str,
            not problems,
            witness="; ".join(problems) if problems else None,
            work=len(decomps),
        )
    report.info(
        "lemma1",
        "totals",
        witness=(
            f"sub-unit effects={len(tbl.subunit_raws)} decompositions={total_decomps} "
            f"repeated-term decompositions={repeated_terms}"
        ),
        work=0,
    )
    return report


def verify_corollary2(multi: MultiSpec) -> Report:
    """Group all size-K^(1)_1 multisets by vector sum; the multiform sums must
    be exactly the sub-unit effects at systems owning a measurement with that
    many outcomes."""
    _reject_classical(multi)
    _, record = canonical_sort(multi)
    if not record.is_identity:
        raise PreconditionNotMet("verify_corollary2 requires a canonical-sorted MultiSpec")
    tbl = label_table(multi)
    r = multi.systems[0].outcome_counts[0]
    report = Report("verify-cor2")

    sums: dict[tuple, int] = {}
    for combo in itertools.combinations_with_replacement(range(len(tbl.labels)), r):
        total = [0] * multi.joint_dimension
        for j in combo:
            vec = tbl.vectors[j]
            for t, v in enumerate(vec):
                total[t] += v
        key = tuple(total)
        sums[key] = sums.get(key, 0) + 1

    multiform_sums = set()
    for key, count in sums.items():
        if count >= 2 or is_multiform(multi, EffectVector(key)):
            multiform_sums.add(key)

    predicted = {
        tbl._vector_of(raw)
        for raw in tbl.subunit_raws
        if r in multi.systems[next(i for i, c in enumerate(raw) if c is None)].outcome_counts
    }

    for key in sorted(multiform_sums):
        descriptor = classify_subunit(multi, EffectVector(key))
        report.add(
            "cor2",
            f"multiform size-{r} sum {list(key)}",
            descriptor is not None and key in predicted,
            witness=None if descriptor else "sum is multiform but not sub-unit",
        )
    missing = predicted - multiform_sums
    report.add(
        "cor2",
        "sub-unit set equality",
        not missing and multiform_sums == predicted,
        witness=None if multiform_sums == predicted else (
            f"{len(multiform_sums - predicted)} unexpected, {len(missing)} missing"
        ),
        work=len(sums),
    )
    report.info(
        "cor2",
        "totals",
        witness=f"size-{r} multisets={sum(sums.values())} distinct sums={len(sums)} "
        f"multiform sums={len(multiform_sums)}",
        work=0,
    )
    return report
