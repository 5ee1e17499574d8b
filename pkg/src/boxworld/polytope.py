"""The allowed state set as an exact polytope.

H-representation: one normalization equality (unit pairing = 1) plus one
positivity inequality per joint fiducial label, in label-lexicographic
order. Normalization per joint measurement and no-signaling of marginals
hold automatically in these coordinates because each measurement's effects
sum to the unit componentwise; build_polytope asserts that symbolically.
Vertices come from the double description method run on the homogeneous
positivity cone, exactly.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DimensionError, ResourceBudgetExceeded
from .linalg import IncrementalSpan, dot, invert
from .model import (
    EffectVector,
    MultiSpec,
    StateVector,
    label_table,
)

DEFAULT_MAX_RAYS = 500_000


@dataclass(frozen=True)
class StatePolytope:
    """H-representation of the allowed state set, with a lazy vertex cache."""

    multi: MultiSpec
    equality: EffectVector
    inequalities: tuple[EffectVector, ...]
    _vertices: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def ambient_dimension(self) -> int:
        return self.equality.dimension


def _assert_marginal_identities(multi: MultiSpec) -> None:
    # Eq-style self-test: every measurement's effects sum to the local unit,
    # hence joint normalization and marginal independence are identities.
    tbl = label_table(multi)
    for i, spec in enumerate(multi.systems):
        unit = tbl.local_units[i]
        for x in range(1, spec.measurements + 1):
            total = [0] * spec.dimension
            for a in range(1, spec.outcomes(x) + 1):
                vec = tbl.local_vectors[i][(x, a)]
                for j, v in enumerate(vec):
                    total[j] += v
            assert tuple(total) == unit, "measurement does not resolve the unit"
    # joint normalization for every measurement-choice tuple, symbolically
    for choices in itertools.product(*(range(1, s.measurements + 1) for s in multi.systems)):
        total = [0] * multi.joint_dimension
        outcome_ranges = [range(1, s.outcomes(x) + 1) for s, x in zip(multi.systems, choices)]
        for outcomes in itertools.product(*outcome_ranges):
            raw = tuple(zip(choices, outcomes))
            vec = tbl.vectors[tbl.index[raw]]
            for j, v in enumerate(vec):
                total[j] += v
        assert tuple(total) == tbl.unit_vector, "joint measurement does not resolve the unit"


def build_polytope(multi: MultiSpec) -> StatePolytope:
    """H-representation in the tensor coordinates; runs the marginal self-test."""
    _assert_marginal_identities(multi)
    tbl = label_table(multi)
    return StatePolytope(
        multi=multi,
        equality=EffectVector(tbl.unit_vector),
        inequalities=tuple(EffectVector(v) for v in tbl.vectors),
    )


@lru_cache(maxsize=None)
def shared_polytope(multi: MultiSpec) -> StatePolytope:
    """Per-spec polytope instance so the vertex cache is reused."""
    return build_polytope(multi)


def membership(polytope: StatePolytope, state: StateVector) -> bool:
    """Exact H-representation membership test."""
    if state.dimension != polytope.ambient_dimension:
        raise DimensionError(
            f"state dimension {state.dimension} != ambient {polytope.ambient_dimension}"
        )
    if dot(polytope.equality.coordinates, state.coordinates) != 1:
        return False
    return all(dot(f.coordinates, state.coordinates) >= 0 for f in polytope.inequalities)


def _primitive(vec: list) -> tuple:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g == 0:
        raise ValueError("zero ray")
    if g == 1:
        return tuple(vec)
    return tuple(v // g for v in vec)


def _integer_ray(fracs) -> tuple:
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    return _primitive([int(f * denom) for f in fracs])


def _extreme_rays(
    rows: list[tuple], dim: int, max_rays: int, deadline: float | None = None
) -> list[tuple]:
    """Double description on the pointed cone {x : <row, x> >= 0 for all rows}.

    Rows are inserted in the given order. Ray zero-sets are tracked as exact
    bitmasks over the processed rows; adjacency is the standard combinatorial
    test. Raises ResourceBudgetExceeded if the intermediate ray count passes
    max_rays or the optional monotonic-clock deadline expires.
    """
    span = IncrementalSpan(dim)
    initial_idx = []
    for i, row in enumerate(rows):
        if span.try_insert(row) is None:
            initial_idx.append(i)
            if len(initial_idx) == dim:
                break
    if len(initial_idx) < dim:
        raise ValueError("constraint rows do not span the ambient space")
    base = [rows[i] for i in initial_idx]
    base_inv = invert(base)
    rays: list[tuple] = []
    for j in range(dim):
        rays.append(_integer_ray([Fraction(base_inv[i][j]) for i in range(dim)]))

    processed: list[tuple] = list(base)
    masks: list[int] = []
    for r in rays:
        m = 0
        for t, row in enumerate(processed):
            if dot(row, r) == 0:
                m |= 1 << t
        masks.append(m)

    remaining = [rows[i] for i in range(len(rows)) if i not in set(initial_idx)]
    for row in remaining:
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceBudgetExceeded("vertex enumeration exceeded the time budget")
        evals = [dot(row, r) for r in rays]
        bit = 1 << len(processed)
        if all(e >= 0 for e in evals):
            processed.append(row)
            for i, e in enumerate(evals):
                if e == 0:
                    masks[i] |= bit
            continue
        pos = [i for i, e in enumerate(evals) if e > 0]
        neg = [i for i, e in enumerate(evals) if e < 0]
        zero = [i for i, e in enumerate(evals) if e == 0]
        keep_rays = [rays[i] for i in pos + zero]
        keep_masks = [masks[i] for i in pos + zero]
        seen = set(keep_rays)
        new_rays: list[tuple] = []
        min_zeros = dim - 2
        for ip in pos:
            mp = masks[ip]
            for im in neg:
                common = mp & masks[im]
                if common.bit_count() < min_zeros:
                    continue
                adjacent = True
                for k, mk in enumerate(masks):
                    if k != ip and k != im and (common & mk) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = [
                    evals[ip] * rays[im][j] - evals[im] * rays[ip][j] for j in range(dim)
                ]
                ray = _primitive(combo)
                if ray in seen:
                    continue
                seen.add(ray)
                new_rays.append(ray)
        processed.append(row)
        rays = keep_rays
        masks = keep_masks
        for i, m in enumerate(masks):
            if dot(row, rays[i]) == 0:
                masks[i] = m | bit
        for ray in new_rays:
            m = 0
            for t, prow in enumerate(processed):
                if dot(prow, ray) == 0:
                    m |= 1 << t
            rays.append(ray)
            masks.append(m)
        if len(rays) > max_rays:
            raise ResourceBudgetExceeded(
                f"double description exceeded {max_rays} intermediate rays"
            )
    return sorted(rays)


def enumerate_vertices(
    polytope: StatePolytope, max_rays: int | None = None, deadline: float | None = None
) -> tuple[StateVector, ...]:
    """Exact, duplicate-free, deterministically ordered vertex list (cached)."""
    if polytope._vertices is not None:
        return polytope._vertices
    budget = DEFAULT_MAX_RAYS if max_rays is None else max_rays
    rows = [f.coordinates for f in polytope.inequalities]
    rays = _extreme_rays(rows, polytope.ambient_dimension, budget, deadline)
    unit = polytope.equality.coordinates
    vertices = []
    for ray in rays:
        scale = dot(unit, ray)
        assert scale > 0, "unbounded ray in a state polytope"
        vertices.append(StateVector(tuple(Fraction(c, scale) for c in ray)))
    vertices.sort(key=lambda s: s.coordinates)
    result = tuple(vertices)
    for v in result:
        assert membership(polytope, v), "vertex violates an H-representation constraint"
    object.__setattr__(polytope, "_vertices", result)
    return result


def is_allowed_effect(
    polytope: StatePolytope, effect: EffectVector, max_rays: int | None = None
) -> bool:
    """True iff the effect evaluates inside [0, 1] on every vertex."""
    if effect.dimension != polytope.ambient_dimension:
        raise DimensionError(
            f"effect dimension {effect.dimension} != ambient {polytope.ambient_dimension}"
        )
    for v in enumerate_vertices(polytope, max_rays):
        value = dot(effect.coordinates, v.coordinates)
        if value < 0 or value > 1:
            return False
    return True
