"""Reversible dynamics as permutations of joint fiducial effect strings.

A candidate transformation is a bijection of the joint fiducial labels
(its adjoint action on the extreme rays of the effect cone); states
transform by the transpose of its linear extension. Enumeration searches
over label images in lexicographic order with exact pruning: a partial
assignment survives only if it preserves every linear relation among the
assigned labels' vectors, in both directions. Dependent labels therefore
have forced images (computed from the relation coefficients), and a
pair-compatibility filter derived from the same relation structure (two
labels sharing a minimal-circuit of the fiducial matroid must map to a
pair sharing the same circuit-size multiset) cuts the branching without
presupposing any verified result. Completed candidates must still pass
the vertex-based allowedness check.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .effects import classify_subunit, enumerate_decompositions
from .errors import (
    ClassicalSystemUnsupported,
    DimensionError,
    InvalidLabel,
    PreconditionNotMet,
    ResourceBudgetExceeded,
)
from .linalg import IncrementalSpan, dot, invert, mat_mul, mat_vec
from .model import (
    EffectVector,
    JointEffectLabel,
    MultiSpec,
    StateVector,
    label_table,
)
from .polytope import enumerate_vertices, shared_polytope
from .reporting import Report

DEFAULT_MAX_NODES = 20_000_000


@dataclass(frozen=True)
class EffectPermutation:
    """Bijection on the full joint fiducial alphabet of a MultiSpec."""

    multi: MultiSpec
    mapping: tuple[int, ...]  # lexicographic label index -> label index

    def __post_init__(self):
        n = len(label_table(self.multi).labels)
        if len(self.mapping) != n or sorted(self.mapping) != list(range(n)):
            raise InvalidLabel("mapping is not a bijection on the fiducial alphabet")

    @classmethod
    def identity(cls, multi: MultiSpec) -> "EffectPermutation":
        return cls(multi, tuple(range(len(label_table(multi).labels))))

    @classmethod
    def from_label_map(
        cls, multi: MultiSpec, images: dict[JointEffectLabel, JointEffectLabel]
    ) -> "EffectPermutation":
        tbl = label_table(multi)
        mapping = [-1] * len(tbl.labels)
        for src, dst in images.items():
            mapping[tbl.index[tbl.raw_of(src)]] = tbl.index[tbl.raw_of(dst)]
        if -1 in mapping:
            raise InvalidLabel("label map does not cover the fiducial alphabet")
        return cls(multi, tuple(mapping))

    def apply(self, label: JointEffectLabel) -> JointEffectLabel:
        tbl = label_table(self.multi)
        return tbl.label_object(tbl.labels[self.mapping[tbl.index[tbl.raw_of(label)]]])

    def inverse(self) -> "EffectPermutation":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return EffectPermutation(self.multi, tuple(inv))

    def compose(self, other: "EffectPermutation") -> "EffectPermutation":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        return EffectPermutation(
            self.multi, tuple(self.mapping[j] for j in other.mapping)
        )

    def label_pairs(self) -> list[tuple[JointEffectLabel, JointEffectLabel]]:
        tbl = label_table(self.multi)
        return [
            (tbl.label_object(tbl.labels[i]), tbl.label_object(tbl.labels[j]))
            for i, j in enumerate(self.mapping)
        ]


@dataclass(frozen=True)
class LinearExtension:
    """The unique linear map agreeing with a label permutation on every fiducial vector."""

    multi: MultiSpec
    matrix: tuple  # joint_dimension x joint_dimension, exact entries

    def apply_effect(self, effect: EffectVector) -> EffectVector:
        if effect.dimension != self.multi.joint_dimension:
            raise DimensionError("effect dimension mismatch")
        return EffectVector(mat_vec(self.matrix, effect.coordinates))

    def apply_state(self, state: StateVector) -> StateVector:
        """The induced state map: transpose action."""
        if state.dimension != self.multi.joint_dimension:
            raise DimensionError("state dimension mismatch")
        cols = tuple(zip(*self.matrix))
        return StateVector(mat_vec(cols, state.coordinates))


@dataclass(frozen=True)
class LocalRelabelling:
    """Alphabet map between two same-type systems: a K-preserving measurement
    bijection plus one outcome permutation per source measurement (1-based)."""

    measurement_map: tuple[int, ...]
    outcome_maps: tuple[tuple[int, ...], ...]

    def apply(self, component: tuple[int, int]) -> tuple[int, int]:
        x, a = component
        return self.measurement_map[x - 1], self.outcome_maps[x - 1][a - 1]

    def describe(self) -> str:
        parts = []
        for x, (dest, outs) in enumerate(zip(self.measurement_map, self.outcome_maps), start=1):
            outs_str = ",".join(f"{a}->{b}" for a, b in enumerate(outs, start=1))
            parts.append(f"{x}->{dest}[{outs_str}]")
        return " ".join(parts)


@dataclass(frozen=True)
class TrivialForm:
    """A same-type system permutation followed by local relabellings.

    system_permutation[i] is the destination slot (0-based) of system i;
    local_relabellings[i] maps system i's alphabet onto the destination's.
    """

    system_permutation: tuple[int, ...]
    local_relabellings: tuple[LocalRelabelling, ...]

    @property
    def permutes_systems(self) -> bool:
        return any(p != i for i, p in enumerate(self.system_permutation))

    def to_effect_permutation(self, multi: MultiSpec) -> EffectPermutation:
        tbl = label_table(multi)
        mapping = []
        n = multi.size
        for raw in tbl.labels:
            out = [None] * n
            for i in range(n):
                out[self.system_permutation[i]] = self.local_relabellings[i].apply(raw[i])
            mapping.append(tbl.index[tuple(out)])
        return EffectPermutation(multi, tuple(mapping))

    def describe(self) -> str:
        perm = " ".join(f"{i + 1}->{p + 1}" for i, p in enumerate(self.system_permutation))
        locals_str = "; ".join(
            f"@{i + 1}: {r.describe()}" for i, r in enumerate(self.local_relabellings)
        )
        return f"P[{perm}] Q[{locals_str}]"


@dataclass(frozen=True)
class SystemSubset:
    """A subset of systems, 1-based to match label components."""

    systems: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "systems", frozenset(self.systems))

    @classmethod
    def of(cls, *indices: int) -> "SystemSubset":
        return cls(frozenset(indices))

    def __contains__(self, index: int) -> bool:
        return index in self.systems

    def describe(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.systems)) + "}"


def hamming_distance(first: JointEffectLabel, second: JointEffectLabel) -> int:
    """Number of components in which two joint fiducial strings differ."""
    if len(first.components) != len(second.components):
        raise DimensionError("labels have different numbers of components")
    return sum(1 for a, b in zip(first.components, second.components) if a != b)


class _DynTable:
    """Spanning set, inverse basis matrix, pair profiles and tuple indices."""

    def __init__(self, multi: MultiSpec):
        tbl = label_table(multi)
        self.tbl = tbl
        dim = multi.joint_dimension
        span = IncrementalSpan(dim)
        span_idx = []
        for i, v in enumerate(tbl.vectors):
            if span.try_insert(v) is None:
                span_idx.append(i)
                if len(span_idx) == dim:
                    break
        assert len(span_idx) == dim, "fiducial vectors must span the joint space"
        self.span_idx = tuple(span_idx)
        base = tuple(zip(*(tbl.vectors[i] for i in span_idx)))  # columns are span vectors
        self.base_inv = invert(base)

        raws = tbl.labels
        n_labels = len(raws)
        n = multi.size
        counts = [s.outcome_counts for s in multi.systems]
        ids: dict[tuple, int] = {}
        profiles = [[0] * n_labels for _ in range(n_labels)]
        for k in range(n_labels):
            for l in range(k + 1, n_labels):
                diffs = [i for i in range(n) if raws[k][i] != raws[l][i]]
                if len(diffs) != 1:
                    pid = 0
                else:
                    i = diffs[0]
                    (x, _), (xp, _) = raws[k][i], raws[l][i]
                    ks = counts[i]
                    if x == xp:
                        sizes = tuple(sorted(ks[x - 1] + ks[y] for y in range(len(ks)) if y != x - 1))
                    else:
                        sizes = (ks[x - 1] + ks[xp - 1],)
                    pid = ids.setdefault(sizes, len(ids) + 1)
                profiles[k][l] = profiles[l][k] = pid
        self.profiles = profiles
        self.tuple0 = tuple(
            i for i, raw in enumerate(raws) if all(x == 1 for (x, _) in raw)
        )


@lru_cache(maxsize=None)
def _dyn_table(multi: MultiSpec) -> _DynTable:
    return _DynTable(multi)


@lru_cache(maxsize=None)
def _vertex_eval_table(multi: MultiSpec) -> tuple:
    """evals[v][j]: pairing of vertex v with fiducial label j; all entries >= 0."""
    tbl = label_table(multi)
    vertices = enumerate_vertices(shared_polytope(multi))
    return tuple(
        tuple(dot(vec, v.coordinates) for vec in tbl.vectors) for v in vertices
    )


def linear_extension(multi: MultiSpec, perm: EffectPermutation) -> LinearExtension | None:
    """Solve for the linear map on a spanning label subset, then verify it
    agrees with the permutation on every remaining label; None if not."""
    dt = _dyn_table(multi)
    tbl = dt.tbl
    image_cols = tuple(zip(*(tbl.vectors[perm.mapping[i]] for i in dt.span_idx)))
    matrix = mat_mul(image_cols, dt.base_inv)
    span_set = set(dt.span_idx)
    for i, vec in enumerate(tbl.vectors):
        if i in span_set:
            continue
        if mat_vec(matrix, vec) != tbl.vectors[perm.mapping[i]]:
            return None
    clean = tuple(
        tuple(int(v) if isinstance(v, Fraction) and v.denominator == 1 else v for v in row)
        for row in matrix
    )
    return LinearExtension(multi, clean)


def is_allowed_reversible(multi: MultiSpec, perm: EffectPermutation) -> bool:
    """A permutation is an allowed reversible transformation iff it extends
    linearly and the induced state map (and its inverse) keeps every polytope
    vertex inside the polytope.

    Positivity of a transformed vertex at label t equals the vertex's own
    evaluation at the permuted label, which is nonnegative identically, so
    only the normalization row can fail; it is checked through one full
    measurement tuple per direction.
    """
    if linear_extension(multi, perm) is None:
        return False
    dt = _dyn_table(multi)
    evals = _vertex_eval_table(multi)
    inverse = perm.inverse()
    for mapping in (perm.mapping, inverse.mapping):
        for row in evals:
            if sum(row[mapping[t]] for t in dt.tuple0) != 1:
                return False
    return True


def _reject_classical(multi: MultiSpec) -> None:
    if multi.has_classical:
        raise ClassicalSystemUnsupported(
            f"{multi.describe()} contains a single-measurement system"
        )


def _measurement_bijections(src_counts: tuple[int, ...], dst_counts: tuple[int, ...]):
    """All K-preserving bijections src measurement -> dst measurement (1-based images)."""
    by_k_src: dict[int, list[int]] = {}
    by_k_dst: dict[int, list[int]] = {}
    for x, k in enumerate(src_counts, start=1):
        by_k_src.setdefault(k, []).append(x)
    for x, k in enumerate(dst_counts, start=1):
        by_k_dst.setdefault(k, []).append(x)
    if sorted(by_k_src) != sorted(by_k_dst) or any(
        len(by_k_src[k]) != len(by_k_dst[k]) for k in by_k_src
    ):
        return
    ks = sorted(by_k_src)
    pools = [itertools.permutations(by_k_dst[k]) for k in ks]
    for combo in itertools.product(*pools):
        mapping = [0] * len(src_counts)
        for k, dst_choice in zip(ks, combo):
            for src_x, dst_x in zip(by_k_src[k], dst_choice):
                mapping[src_x - 1] = dst_x
        yield tuple(mapping)


def _system_relabellings(src_counts: tuple[int, ...], dst_counts: tuple[int, ...]):
    for meas_map in _measurement_bijections(src_counts, dst_counts):
        outcome_pools = [
            itertools.permutations(range(1, k + 1)) for k in src_counts
        ]
        for outcome_maps in itertools.product(*outcome_pools):
            yield LocalRelabelling(meas_map, tuple(outcome_maps))


def generate_trivial_group(multi: MultiSpec):
    """Yield every (EffectPermutation, TrivialForm) of the trivial group:
    same-type system permutations composed with local relabellings of
    measurement choices (within equal-outcome-count classes) and outcomes."""
    _reject_classical(multi)
    n = multi.size
    types = [tuple(sorted(s.outcome_counts)) for s in multi.systems]
    for sys_perm in itertools.permutations(range(n)):
        if any(types[i] != types[sys_perm[i]] for i in range(n)):
            continue
        pools = [
            _system_relabellings(
                multi.systems[i].outcome_counts, multi.systems[sys_perm[i]].outcome_counts
            )
            for i in range(n)
        ]
        for relabellings in itertools.product(*pools):
            form = TrivialForm(sys_perm, tuple(relabellings))
            yield form.to_effect_permutation(multi), form


def trivial_group_size(multi: MultiSpec) -> int:
    """Predicted order: |same-type system perms| x prod over systems and
    equal-K classes of m_c! * prod K!."""
    import math

    n = multi.size
    types = [tuple(sorted(s.outcome_counts)) for s in multi.systems]
    sys_perms = sum(
        1
        for p in itertools.permutations(range(n))
        if all(types[i] == types[p[i]] for i in range(n))
    )
    local = 1
    for s in multi.systems:
        classes: dict[int, int] = {}
        for k in s.outcome_counts:
            classes[k] = classes.get(k, 0) + 1
        for k, m in classes.items():
            local *= math.factorial(m) * math.factorial(k) ** m
    return sys_perms * local


def enumerate_reversible(
    multi: MultiSpec, max_nodes: int | None = None, deadline: float | None = None
) -> list[EffectPermutation]:
    """Complete enumeration of allowed reversible label permutations.

    Backtracking over label images in lexicographic order; partial maps must
    preserve the linear-relation space of the assigned fiducial vectors
    (forced images for dependent labels, independence for free ones) and the
    minimal-circuit pair profiles. Survivors are filtered through the
    vertex-based allowedness check and returned in canonical order.
    """
    _reject_classical(multi)
    budget = DEFAULT_MAX_NODES if max_nodes is None else max_nodes
    dt = _dyn_table(multi)
    tbl = dt.tbl
    vectors = tbl.vectors
    vec_index = tbl.vec_index
    profiles = dt.profiles
    n_labels = len(vectors)
    dim = multi.joint_dimension

    src_span = IncrementalSpan(dim)
    img_span = IncrementalSpan(dim)
    image = [-1] * n_labels
    used = [False] * n_labels
    free_sources: list[int] = []
    found: list[tuple[int, ...]] = []
    nodes = 0

    def backtrack(k: int) -> None:
        nonlocal nodes
        if k == n_labels:
            found.append(tuple(image))
            return
        nodes += 1
        if nodes > budget:
            raise ResourceBudgetExceeded(
                f"reversible enumeration exceeded {budget} search nodes"
            )
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise ResourceBudgetExceeded("reversible enumeration exceeded the time budget")
        vec = vectors[k]
        prof_k = profiles[k]
        combo = src_span.coefficients(vec)
        if combo is not None:
            # dependent label: image forced by the relation coefficients
            forced = [Fraction(0)] * dim
            for t, c in enumerate(combo):
                if c:
                    w = vectors[image[free_sources[t]]]
                    for j in range(dim):
                        forced[j] += c * w[j]
            if any(f.denominator != 1 for f in forced):
                return
            j = vec_index.get(tuple(int(f) for f in forced))
            if j is None or used[j]:
                return
            prof_j = profiles[j]
            for a in range(k):
                if prof_k[a] != prof_j[image[a]]:
                    return
            image[k] = j
            used[j] = True
            backtrack(k + 1)
            image[k] = -1
            used[j] = False
            return
        snap_src = src_span.snapshot()
        src_span.try_insert(vec)
        free_sources.append(k)
        for j in range(n_labels):
            if used[j]:
                continue
            prof_j = profiles[j]
            ok = True
            for a in range(k):
                if prof_k[a] != prof_j[image[a]]:
                    ok = False
                    break
            if not ok:
                continue
            snap_img = img_span.snapshot()
            if img_span.try_insert(vectors[j]) is not None:
                # image dependent on earlier images: an extra relation appears
                continue
            image[k] = j
            used[j] = True
            backtrack(k + 1)
            image[k] = -1
            used[j] = False
            img_span.rollback(snap_img)
        free_sources.pop()
        src_span.rollback(snap_src)

    backtrack(0)
    candidates = [EffectPermutation(multi, m) for m in sorted(found)]
    return [p for p in candidates if is_allowed_reversible(multi, p)]


def decompose_trivial(multi: MultiSpec, perm: EffectPermutation) -> TrivialForm | None:
    """Recover system permutation and local relabellings from a permutation
    that preserves Hamming distance 1; None when no trivial form reproduces
    the permutation exactly."""
    tbl = label_table(multi)
    raws = tbl.labels
    n_labels = len(raws)
    n = multi.size
    for k in range(n_labels):
        rk = raws[k]
        ik = raws[perm.mapping[k]]
        for l in range(k + 1, n_labels):
            rl = raws[l]
            if sum(1 for i in range(n) if rk[i] != rl[i]) != 1:
                continue
            il = raws[perm.mapping[l]]
            if sum(1 for i in range(n) if ik[i] != il[i]) != 1:
                return None

    base = raws[0]
    base_image = raws[perm.mapping[0]]
    slots = [None] * n
    component_maps: list[dict] = [dict() for _ in range(n)]
    for i in range(n):
        for value in tbl.local_alphabets[i]:
            if value == base[i]:
                continue
            varied = base[:i] + (value,) + base[i + 1 :]
            img = raws[perm.mapping[tbl.index[varied]]]
            diffs = [j for j in range(n) if img[j] != base_image[j]]
            if len(diffs) != 1:
                return None
            j = diffs[0]
            if slots[i] is None:
                slots[i] = j
            elif slots[i] != j:
                return None
            component_maps[i][value] = img[j]
        component_maps[i][base[i]] = base_image[slots[i]]
    if sorted(slots) != list(range(n)):
        return None

    relabellings = []
    for i in range(n):
        src = multi.systems[i]
        dst = multi.systems[slots[i]]
        cmap = component_maps[i]
        if len(set(cmap.values())) != len(cmap):
            return None
        meas_map = [0] * src.measurements
        outcome_maps = [[0] * k for k in src.outcome_counts]
        for (x, a), (xp, ap) in cmap.items():
            if meas_map[x - 1] == 0:
                meas_map[x - 1] = xp
            elif meas_map[x - 1] != xp:
                # outcomes of one measurement must land in one measurement
                return None
            outcome_maps[x - 1][a - 1] = ap
        if sorted(meas_map) != sorted(range(1, dst.measurements + 1)):
            return None
        for x0, xp in enumerate(meas_map):
            if dst.outcome_counts[xp - 1] != src.outcome_counts[x0]:
                return None
            if sorted(outcome_maps[x0]) != list(range(1, src.outcome_counts[x0] + 1)):
                return None
        relabellings.append(
            LocalRelabelling(tuple(meas_map), tuple(tuple(om) for om in outcome_maps))
        )
    form = TrivialForm(tuple(slots), tuple(relabellings))
    if form.to_effect_permutation(multi).mapping != perm.mapping:
        return None
    return form


def _subunit_image_sum(multi: MultiSpec, perm: EffectPermutation, decomposition) -> EffectVector:
    tbl = label_table(multi)
    total = [0] * multi.joint_dimension
    for term in decomposition.terms:
        vec = tbl.vectors[perm.mapping[tbl.index[tbl.raw_of(term)]]]
        for j, v in enumerate(vec):
            total[j] += v
    return EffectVector(tuple(total))


def verify_lemma5(multi: MultiSpec, perm: EffectPermutation) -> Report:
    """Every sub-unit effect's image (term-by-term through the permutation)
    must again be a sub-unit effect, at a system with equal minimal outcome
    count; checked over every decomposition."""
    if not is_allowed_reversible(multi, perm):
        raise PreconditionNotMet("verify_lemma5 requires an allowed reversible permutation")
    tbl = label_table(multi)
    report = Report("verify-lemma5")
    for raw in tbl.subunit_raws:
        unit_at = next(i for i, c in enumerate(raw) if c is None)
        effect = EffectVector(tbl._vector_of(raw))
        decomps = enumerate_decompositions(multi, effect)
        image_sums = {
            _subunit_image_sum(multi, perm, dec).coordinates for dec in decomps
        }
        problems = []
        if len(image_sums) != 1:
            problems.append("decompositions map to different sums; linearity broken")
        descriptor = classify_subunit(multi, EffectVector(next(iter(image_sums))))
        if descriptor is None:
            problems.append("image sum is not a sub-unit effect")
        else:
            src_min = min(multi.systems[unit_at].outcome_counts)
            dst_min = min(multi.systems[descriptor.unit_system - 1].outcome_counts)
            if src_min != dst_min:
                problems.append(
                    f"unit system moved across minimal outcome counts {src_min}->{dst_min}"
                )
        report.add(
            "lemma5",
            str(tbl.label_object(raw)),
            not problems,
            witness="; ".join(problems) if problems else None,
            work=len(decomps),
        )
    return report


def _permutes_subunits_within(multi: MultiSpec, perm: EffectPermutation, omega: SystemSubset):
    """Image system of each omega sub-unit effect, or None if some image
    leaves omega or stops being sub-unit."""
    tbl = label_table(multi)
    out = {}
    for raw in tbl.subunit_raws:
        unit_at = next(i for i, c in enumerate(raw) if c is None) + 1
        if unit_at not in omega:
            continue
        effect = EffectVector(tbl._vector_of(raw))
        dec = enumerate_decompositions(multi, effect)[0]
        descriptor = classify_subunit(multi, _subunit_image_sum(multi, perm, dec))
        if descriptor is None or descriptor.unit_system not in omega:
            return None
        out[raw] = descriptor.unit_system
    return out


def verify_structural_lemmas(
    multi: MultiSpec, perm: EffectPermutation, omega: SystemSubset
) -> Report:
    """Two structural facts for a permutation that permutes the sub-unit
    effects of the systems in omega: fiducial pairs agree outside omega iff
    their images do, and whenever the image of a sub-unit decomposition
    covers a sub-unit effect it sums to it exactly."""
    for i in omega.systems:
        if not 1 <= i <= multi.size:
            raise PreconditionNotMet(f"system {i} outside 1..{multi.size}")
    if _permutes_subunits_within(multi, perm, omega) is None:
        raise PreconditionNotMet(
            f"permutation does not permute the sub-unit effects of {omega.describe()}"
        )
    tbl = label_table(multi)
    raws = tbl.labels
    n = multi.size
    outside = [i for i in range(n) if (i + 1) not in omega]
    report = Report("verify-structural")

    agree_checked = 0
    agree_ok = True
    for k in range(len(raws)):
        ik = raws[perm.mapping[k]]
        for l in range(k + 1, len(raws)):
            il = raws[perm.mapping[l]]
            before = all(raws[k][i] == raws[l][i] for i in outside)
            after = all(ik[i] == il[i] for i in outside)
            agree_checked += 1
            if before != after:
                agree_ok = False
                report.add(
                    "lemma6",
                    f"pair ({tbl.label_object(raws[k])}, {tbl.label_object(raws[l])})",
                    False,
                    witness=f"agreement outside {omega.describe()} not preserved",
                )
    report.add(
        "lemma6",
        f"agreement outside {omega.describe()} preserved both ways",
        agree_ok,
        work=agree_checked,
    )

    cover_checked = 0
    cover_ok = True
    subunit_vecs = {tbl._vector_of(r): r for r in tbl.subunit_raws}
    for raw in tbl.subunit_raws:
        effect = EffectVector(tbl._vector_of(raw))
        for dec in enumerate_decompositions(multi, effect):
            image_terms = [
                tbl.vectors[perm.mapping[tbl.index[tbl.raw_of(t)]]] for t in dec.terms
            ]
            full = [0] * multi.joint_dimension
            for vec in image_terms:
                for j, v in enumerate(vec):
                    full[j] += v
            for size in range(1, len(image_terms) + 1):
                for subset in set(itertools.combinations(range(len(image_terms)), size)):
                    total = [0] * multi.joint_dimension
                    for t in subset:
                        for j, v in enumerate(image_terms[t]):
                            total[j] += v
                    key = tuple(total)
                    if key in subunit_vecs:
                        cover_checked += 1
                        if key != tuple(full):
                            cover_ok = False
                            report.add(
                                "lemma7",
                                f"decomposition of {tbl.label_object(raw)}",
                                False,
                                witness="image covers a sub-unit it does not equal",
                            )
    report.add("lemma7", "covered sub-units equal full image sums", cover_ok, work=cover_checked)
    return report


def verify_theorem(
    multi: MultiSpec, max_nodes: int | None = None, deadline: float | None = None
) -> Report:
    """Set equality between the enumerated allowed reversible permutations and
    the generated trivial group, plus trivial-form decomposability of every
    element with same-type system permutations only."""
    _reject_classical(multi)
    report = Report("verify-theorem")
    enumerated = enumerate_reversible(multi, max_nodes=max_nodes, deadline=deadline)
    trivial = list(generate_trivial_group(multi))

    enum_set = {p.mapping for p in enumerated}
    triv_set = {p.mapping for p, _ in trivial}
    report.add(
        "theorem",
        f"{multi.describe()} reversible enumeration matches trivial group",
        enum_set == triv_set,
        witness=(
            f"reversible transformations found: {len(enum_set)}; "
            f"trivial group size: {len(triv_set)}; "
            f"{'MATCH' if enum_set == triv_set else 'MISMATCH'}"
        ),
        work=len(enum_set) + len(triv_set),
    )
    report.add(
        "theorem",
        "trivial group size formula",
        len(triv_set) == trivial_group_size(multi),
        witness=f"generated {len(triv_set)}, formula {trivial_group_size(multi)}",
    )

    decomposed = 0
    swapping = 0
    failures = 0
    for p in enumerated:
        form = decompose_trivial(multi, p)
        if form is None:
            failures += 1
            report.add(
                "permops",
                "decomposition failure",
                False,
                witness="; ".join(str(a) + "->" + str(b) for a, b in p.label_pairs()),
            )
            continue
        decomposed += 1
        if form.permutes_systems:
            swapping += 1
    report.add(
        "permops",
        "every reversible permutation decomposes into a same-type trivial form",
        failures == 0,
        witness=f"decomposed {decomposed}/{len(enumerated)}; system-permuting elements: {swapping}",
        work=len(enumerated),
    )
    return report
