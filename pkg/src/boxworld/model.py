"""Exact vector representation of local and joint Boxworld systems.

Coordinate convention (fixed once, everywhere): for each system the unit
effect is the first standard basis vector, and the independent fiducial
effects X[a|x] with a < K_x are the subsequent standard basis vectors in
(x, a) lexicographic order. The dependent outcome a = K_x is forced to
unit minus the sum of the others. Joint vectors are Kronecker products
with system 1 varying slowest. All arithmetic is exact: coordinates are
ints or fractions, never floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    DimensionError,
    InvalidAssignment,
    InvalidLabel,
    InvalidSpec,
)


def _exact(value):
    """Normalize an exact scalar; integral fractions collapse to int."""
    if isinstance(value, float):
        raise TypeError("floating point is not allowed in exact vectors")
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


@dataclass(frozen=True)
class SystemSpec:
    """A single system: ordered outcome counts K_x for its fiducial measurements."""

    outcome_counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(self.outcome_counts)
        object.__setattr__(self, "outcome_counts", counts)
        if len(counts) < 1:
            raise InvalidSpec("a system needs at least one measurement")
        for k in counts:
            if not isinstance(k, int) or k < 2:
                raise InvalidSpec(f"outcome count {k!r} is invalid; every measurement needs K >= 2")

    @property
    def measurements(self) -> int:
        return len(self.outcome_counts)

    @property
    def dimension(self) -> int:
        return 1 + sum(k - 1 for k in self.outcome_counts)

    @property
    def is_classical(self) -> bool:
        return self.measurements == 1

    def outcomes(self, measurement: int) -> int:
        """Outcome count of a 1-based measurement index."""
        if not 1 <= measurement <= self.measurements:
            raise InvalidLabel(f"measurement {measurement} out of range 1..{self.measurements}")
        return self.outcome_counts[measurement - 1]


@dataclass(frozen=True)
class MultiSpec:
    """An ordered collection of systems forming a joint system."""

    systems: tuple[SystemSpec, ...]

    def __post_init__(self):
        systems = tuple(self.systems)
        object.__setattr__(self, "systems", systems)
        if len(systems) < 1:
            raise InvalidSpec("a joint system needs at least one system")

    @classmethod
    def of(cls, *outcome_counts) -> "MultiSpec":
        """Convenience constructor: MultiSpec.of((2, 2), (2, 3))."""
        return cls(tuple(SystemSpec(tuple(c)) for c in outcome_counts))

    @property
    def size(self) -> int:
        return len(self.systems)

    @property
    def joint_dimension(self) -> int:
        dim = 1
        for s in self.systems:
            dim *= s.dimension
        return dim

    @property
    def min_first_outcomes(self) -> int:
        """Smallest outcome count of any fiducial measurement (K^(1)_1 once sorted)."""
        return min(min(s.outcome_counts) for s in self.systems)

    @property
    def has_classical(self) -> bool:
        return any(s.is_classical for s in self.systems)

    def describe(self) -> str:
        return "&".join("(" + ",".join(str(k) for k in s.outcome_counts) + ")" for s in self.systems)


@dataclass(frozen=True)
class LocalEffectLabel:
    """A fiducial effect X[a|x] on one system, or the distinguished unit effect."""

    measurement: int | None = None
    outcome: int | None = None

    def __post_init__(self):
        if (self.measurement is None) != (self.outcome is None):
            raise InvalidLabel("either both measurement and outcome are set, or neither (unit)")
        if self.measurement is not None and (self.measurement < 1 or self.outcome < 1):
            raise InvalidLabel("measurement and outcome indices are 1-based")

    @property
    def is_unit(self) -> bool:
        return self.measurement is None

    def __str__(self) -> str:
        if self.is_unit:
            return "U"
        return f"X[{self.outcome}|{self.measurement}]"


UNIT = LocalEffectLabel()


@dataclass(frozen=True)
class JointEffectLabel:
    """A tensor string of local labels, one component per system."""

    components: tuple[LocalEffectLabel, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def fiducial(cls, *pairs) -> "JointEffectLabel":
        """Build a fiducial label from (measurement, outcome) pairs: fiducial((1,1), (2,1))."""
        return cls(tuple(LocalEffectLabel(x, a) for x, a in pairs))

    @property
    def is_fiducial(self) -> bool:
        return all(not c.is_unit for c in self.components)

    @property
    def subunit_system(self) -> int | None:
        """1-based index of the single unit component, if exactly one exists."""
        units = [i for i, c in enumerate(self.components) if c.is_unit]
        if len(units) == 1:
            return units[0] + 1
        return None

    def __str__(self) -> str:
        return "*".join(f"{c}@{i + 1}" for i, c in enumerate(self.components))


@dataclass(frozen=True)
class EffectVector:
    """Exact rational vector representing an effect."""

    coordinates: tuple

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(_exact(v) for v in self.coordinates))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def __add__(self, other: "EffectVector") -> "EffectVector":
        if self.dimension != other.dimension:
            raise DimensionError("effect dimensions differ")
        return EffectVector(tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __sub__(self, other: "EffectVector") -> "EffectVector":
        if self.dimension != other.dimension:
            raise DimensionError("effect dimensions differ")
        return EffectVector(tuple(a - b for a, b in zip(self.coordinates, other.coordinates)))

    def __rmul__(self, scalar) -> "EffectVector":
        return EffectVector(tuple(scalar * a for a in self.coordinates))


@dataclass(frozen=True)
class StateVector:
    """Exact rational vector representing a state."""

    coordinates: tuple

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(_exact(v) for v in self.coordinates))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def __add__(self, other: "StateVector") -> "StateVector":
        if self.dimension != other.dimension:
            raise DimensionError("state dimensions differ")
        return StateVector(tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __rmul__(self, scalar) -> "StateVector":
        return StateVector(tuple(scalar * a for a in self.coordinates))


@dataclass(frozen=True)
class Assignment:
    """A deterministic outcome choice for every (system, measurement) pair."""

    outcomes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(tuple(s) for s in self.outcomes))

    def outcome(self, system: int, measurement: int) -> int:
        """Chosen outcome for 1-based system and measurement indices."""
        return self.outcomes[system - 1][measurement - 1]

    def __str__(self) -> str:
        return "|".join(",".join(str(a) for a in s) for s in self.outcomes)


def _validate_local(spec: SystemSpec, label: LocalEffectLabel) -> None:
    if label.is_unit:
        return
    if not 1 <= label.measurement <= spec.measurements:
        raise InvalidLabel(f"measurement {label.measurement} out of range for {spec.outcome_counts}")
    if not 1 <= label.outcome <= spec.outcomes(label.measurement):
        raise InvalidLabel(f"outcome {label.outcome} out of range for measurement {label.measurement}")


def _local_offset(spec: SystemSpec, measurement: int) -> int:
    # first coordinate is the unit; independent outcomes of measurement x start here
    return 1 + sum(k - 1 for k in spec.outcome_counts[: measurement - 1])


def local_effect_vector(spec: SystemSpec, label: LocalEffectLabel) -> EffectVector:
    """Canonical coordinates of a local unit or fiducial effect."""
    _validate_local(spec, label)
    d = spec.dimension
    coords = [0] * d
    if label.is_unit:
        coords[0] = 1
        return EffectVector(tuple(coords))
    x, a = label.measurement, label.outcome
    k = spec.outcomes(x)
    base = _local_offset(spec, x)
    if a < k:
        coords[base + a - 1] = 1
    else:
        # dependent outcome: unit minus the independent ones of this measurement
        coords[0] = 1
        for b in range(k - 1):
            coords[base + b] = -1
    return EffectVector(tuple(coords))


def _kron(u: tuple, v: tuple) -> tuple:
    return tuple(a * b for a in u for b in v)


def joint_effect_vector(multi: MultiSpec, label: JointEffectLabel) -> EffectVector:
    """Kronecker product of the component vectors, system 1 slowest-varying."""
    if len(label.components) != multi.size:
        raise InvalidLabel(
            f"label has {len(label.components)} components for {multi.size} systems"
        )
    coords = (1,)
    for spec, comp in zip(multi.systems, label.components):
        coords = _kron(coords, local_effect_vector(spec, comp).coordinates)
    return EffectVector(coords)


def _local_state_coords(spec: SystemSpec, choices: tuple[int, ...]) -> tuple:
    # dual basis solution: pairs to 1 with the unit, indicator with each X[a|x], a < K_x
    coords = [0] * spec.dimension
    coords[0] = 1
    for x, k in enumerate(spec.outcome_counts, start=1):
        base = _local_offset(spec, x)
        chosen = choices[x - 1]
        if chosen < k:
            coords[base + chosen - 1] = 1
    return tuple(coords)


def pure_product_state(multi: MultiSpec, assignment: Assignment) -> StateVector:
    """State vector of a deterministic assignment (tensor of local dual solutions)."""
    if len(assignment.outcomes) != multi.size:
        raise InvalidAssignment(
            f"assignment covers {len(assignment.outcomes)} systems, expected {multi.size}"
        )
    coords = (1,)
    for spec, choices in zip(multi.systems, assignment.outcomes):
        if len(choices) != spec.measurements:
            raise InvalidAssignment(
                f"assignment covers {len(choices)} measurements for a system with {spec.measurements}"
            )
        for x, a in enumerate(choices, start=1):
            if not 1 <= a <= spec.outcomes(x):
                raise InvalidAssignment(f"outcome {a} out of range for measurement {x}")
        coords = _kron(coords, _local_state_coords(spec, choices))
    return StateVector(coords)


def evaluate(effect: EffectVector, state: StateVector):
    """Exact pairing of an effect with a state; 'hits' means the value is 1."""
    if effect.dimension != state.dimension:
        raise DimensionError(
            f"effect dimension {effect.dimension} != state dimension {state.dimension}"
        )
    return _exact(sum(a * b for a, b in zip(effect.coordinates, state.coordinates)))


def enumerate_pure_product_states(multi: MultiSpec) -> list[Assignment]:
    """All deterministic assignments, lexicographic, system 1 slowest."""
    per_system = []
    for spec in multi.systems:
        per_system.append(
            list(itertools.product(*(range(1, k + 1) for k in spec.outcome_counts)))
        )
    return [Assignment(combo) for combo in itertools.product(*per_system)]


@dataclass(frozen=True)
class CanonicalRelabelling:
    """Record translating labels between an input ordering and its canonical sort.

    system_map[i] is the sorted position of original system i;
    measurement_maps[i][x-1] + 1 is the sorted measurement index of original
    measurement x on original system i. Outcome indices are untouched.
    """

    system_map: tuple[int, ...]
    measurement_maps: tuple[tuple[int, ...], ...]

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.system_map)) and all(
            all(q == j for j, q in enumerate(m)) for m in self.measurement_maps
        )

    def apply_label(self, label: JointEffectLabel) -> JointEffectLabel:
        """Translate an original-order label into sorted-order coordinates."""
        n = len(self.system_map)
        comps: list[LocalEffectLabel | None] = [None] * n
        for i, comp in enumerate(label.components):
            if comp.is_unit:
                moved = comp
            else:
                moved = LocalEffectLabel(self.measurement_maps[i][comp.measurement - 1] + 1, comp.outcome)
            comps[self.system_map[i]] = moved
        return JointEffectLabel(tuple(comps))

    def invert_label(self, label: JointEffectLabel) -> JointEffectLabel:
        """Translate a sorted-order label back into original coordinates."""
        n = len(self.system_map)
        inv_sys = [0] * n
        for i, p in enumerate(self.system_map):
            inv_sys[p] = i
        comps = []
        for i in range(n):
            orig = inv_sys[i]
            comp = label.components[i]
            if comp.is_unit:
                comps.append(comp)
            else:
                mmap = self.measurement_maps[orig]
                inv_meas = {q: j for j, q in enumerate(mmap)}
                comps.append(LocalEffectLabel(inv_meas[comp.measurement - 1] + 1, comp.outcome))
        # reorder components back to original system order
        out: list[LocalEffectLabel | None] = [None] * n
        for i in range(n):
            out[inv_sys[i]] = comps[i]
        return JointEffectLabel(tuple(out))

    def describe(self) -> str:
        sys_part = " ".join(f"{i + 1}->{p + 1}" for i, p in enumerate(self.system_map))
        meas_part = ";".join(
            ",".join(f"{j + 1}->{q + 1}" for j, q in enumerate(m)) for m in self.measurement_maps
        )
        return f"systems[{sys_part}] measurements[{meas_part}]"


def canonical_sort(multi: MultiSpec) -> tuple[MultiSpec, CanonicalRelabelling]:
    """Sort measurements by outcome count within each system, then systems by
    their sorted count tuples; returns the equivalent spec plus the record
    needed to translate labels. Idempotent."""
    meas_orders = []
    sorted_counts = []
    for spec in multi.systems:
        order = sorted(range(spec.measurements), key=lambda j: (spec.outcome_counts[j], j))
        meas_orders.append(order)
        sorted_counts.append(tuple(spec.outcome_counts[j] for j in order))
    sys_order = sorted(range(multi.size), key=lambda i: (sorted_counts[i], i))
    system_map = [0] * multi.size
    for pos, i in enumerate(sys_order):
        system_map[i] = pos
    measurement_maps = []
    for i in range(multi.size):
        inv = [0] * len(meas_orders[i])
        for pos, j in enumerate(meas_orders[i]):
            inv[j] = pos
        measurement_maps.append(tuple(inv))
    sorted_multi = MultiSpec(tuple(SystemSpec(sorted_counts[i]) for i in sys_order))
    record = CanonicalRelabelling(tuple(system_map), tuple(measurement_maps))
    return sorted_multi, record


# ---------------------------------------------------------------------------
# Cached per-spec tables used by the enumeration engines.
# ---------------------------------------------------------------------------

RawLocal = tuple[int, int]  # (measurement, outcome), 1-based
RawLabel = tuple  # tuple of RawLocal or None (unit component)


class LabelTable:
    """Precomputed label/vector/assignment tables for one MultiSpec.

    Engines work on raw tuples and integer vectors; the public dataclasses
    are built from these on demand. Everything is immutable after build.
    """

    def __init__(self, multi: MultiSpec):
        self.multi = multi
        n = multi.size

        self.local_alphabets: list[tuple[RawLocal, ...]] = []
        self.local_vectors: list[dict[RawLocal, tuple]] = []
        self.local_units: list[tuple] = []
        for spec in multi.systems:
            alphabet = tuple(
                (x, a)
                for x in range(1, spec.measurements + 1)
                for a in range(1, spec.outcomes(x) + 1)
            )
            self.local_alphabets.append(alphabet)
            vecs = {
                (x, a): local_effect_vector(spec, LocalEffectLabel(x, a)).coordinates
                for (x, a) in alphabet
            }
            self.local_vectors.append(vecs)
            self.local_units.append(local_effect_vector(spec, UNIT).coordinates)

        self.labels: tuple[RawLabel, ...] = tuple(itertools.product(*self.local_alphabets))
        self.index: dict[RawLabel, int] = {lab: i for i, lab in enumerate(self.labels)}
        self.vectors: tuple[tuple, ...] = tuple(self._vector_of(lab) for lab in self.labels)
        self.vec_index: dict[tuple, int] = {v: i for i, v in enumerate(self.vectors)}

        unit = (1,)
        for u in self.local_units:
            unit = _kron(unit, u)
        self.unit_vector: tuple = unit

        self.assignments: tuple[tuple, ...] = tuple(
            a.outcomes for a in enumerate_pure_product_states(multi)
        )
        self.state_vectors: tuple[tuple, ...] = tuple(
            pure_product_state(multi, Assignment(a)).coordinates for a in self.assignments
        )
        self.hit_masks: tuple[int, ...] = tuple(
            self._hit_mask(lab) for lab in self.labels
        )
        self.full_mask: int = (1 << len(self.assignments)) - 1

        # sub-unit labels: exactly one unit component (the degenerate N=1 case
        # makes the unit itself the single sub-unit label)
        subunit_raws: list[RawLabel] = []
        for i in range(n):
            others = [self.local_alphabets[j] if j != i else [None] for j in range(n)]
            for combo in itertools.product(*others):
                subunit_raws.append(tuple(combo))
        self.subunit_raws: tuple[RawLabel, ...] = tuple(subunit_raws)
        self.subunit_vec_index: dict[tuple, RawLabel] = {
            self._vector_of(raw): raw for raw in self.subunit_raws
        }

        mixed = (Fraction(1),)
        for spec in multi.systems:
            local = [Fraction(0)] * spec.dimension
            local[0] = Fraction(1)
            for x, k in enumerate(spec.outcome_counts, start=1):
                base = _local_offset(spec, x)
                for b in range(k - 1):
                    local[base + b] = Fraction(1, k)
            mixed = _kron(mixed, tuple(local))
        self.mixed_vector: tuple = mixed  # maximally mixed state, exact

    def _vector_of(self, raw: RawLabel) -> tuple:
        coords = (1,)
        for i, comp in enumerate(raw):
            part = self.local_units[i] if comp is None else self.local_vectors[i][comp]
            coords = _kron(coords, part)
        return coords

    def _hit_mask(self, raw: RawLabel) -> int:
        mask = 0
        for bit, assignment in enumerate(self.assignments):
            if all(assignment[i][x - 1] == a for i, (x, a) in enumerate(raw)):
                mask |= 1 << bit
        return mask

    def raw_hits(self, raw: RawLabel, assignment: tuple) -> bool:
        """Componentwise hit test; unit components always hit."""
        return all(
            comp is None or assignment[i][comp[0] - 1] == comp[1]
            for i, comp in enumerate(raw)
        )

    def label_object(self, raw: RawLabel) -> JointEffectLabel:
        return JointEffectLabel(
            tuple(UNIT if c is None else LocalEffectLabel(*c) for c in raw)
        )

    def raw_of(self, label: JointEffectLabel) -> RawLabel:
        if len(label.components) != self.multi.size:
            raise InvalidLabel(
                f"label has {len(label.components)} components for {self.multi.size} systems"
            )
        raw = tuple(
            None if c.is_unit else (c.measurement, c.outcome) for c in label.components
        )
        for i, comp in enumerate(raw):
            if comp is not None and comp not in self.local_vectors[i]:
                raise InvalidLabel(f"component {self.label_object(raw)} invalid at system {i + 1}")
        return raw


@lru_cache(maxsize=None)
def label_table(multi: MultiSpec) -> LabelTable:
    return LabelTable(multi)
