"""Exact toolkit for multipartite Boxworld systems.

Builds the rational vector representation of local and joint systems,
represents the no-signaling state set as an exact polytope, enumerates
effect decompositions, constructs witness states, and enumerates all
allowed reversible dynamics at desk scale.
"""

from .dynamics import (
    EffectPermutation,
    LinearExtension,
    LocalRelabelling,
    SystemSubset,
    TrivialForm,
    decompose_trivial,
    enumerate_reversible,
    generate_trivial_group,
    hamming_distance,
    is_allowed_reversible,
    linear_extension,
    trivial_group_size,
    verify_lemma5,
    verify_structural_lemmas,
    verify_theorem,
)
from .effects import (
    Decomposition,
    SubUnitDescriptor,
    classify_subunit,
    covers,
    enumerate_decompositions,
    is_multiform,
    subunit_labels,
    verify_corollary2,
    verify_lemma1,
)
from .errors import (
    BoxworldError,
    ClassicalSystemUnsupported,
    ConstructionBug,
    DimensionError,
    InvalidAssignment,
    InvalidLabel,
    InvalidSpec,
    InvalidWitnessProblem,
    NotInCone,
    ParseError,
    PreconditionNotMet,
    ResourceBudgetExceeded,
)
from .model import (
    UNIT,
    Assignment,
    CanonicalRelabelling,
    EffectVector,
    JointEffectLabel,
    LocalEffectLabel,
    MultiSpec,
    StateVector,
    SystemSpec,
    canonical_sort,
    enumerate_pure_product_states,
    evaluate,
    joint_effect_vector,
    local_effect_vector,
    pure_product_state,
)
from .polytope import (
    StatePolytope,
    build_polytope,
    enumerate_vertices,
    is_allowed_effect,
    membership,
    shared_polytope,
)
from .reporting import CheckRecord, Report
from .specfile import parse_effect_expression, parse_joint_label, parse_system_file
from .witness import (
    WitnessMode,
    WitnessProblem,
    brute_force_witness,
    lemma2_witness,
    lemma8_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BoxworldError",
    "CanonicalRelabelling",
    "CheckRecord",
    "ClassicalSystemUnsupported",
    "ConstructionBug",
    "Decomposition",
    "DimensionError",
    "EffectPermutation",
    "EffectVector",
    "InvalidAssignment",
    "InvalidLabel",
    "InvalidSpec",
    "InvalidWitnessProblem",
    "JointEffectLabel",
    "LinearExtension",
    "LocalEffectLabel",
    "LocalRelabelling",
    "MultiSpec",
    "NotInCone",
    "ParseError",
    "PreconditionNotMet",
    "Report",
    "ResourceBudgetExceeded",
    "StatePolytope",
    "StateVector",
    "SubUnitDescriptor",
    "SystemSpec",
    "SystemSubset",
    "TrivialForm",
    "UNIT",
    "WitnessMode",
    "WitnessProblem",
    "brute_force_witness",
    "build_polytope",
    "canonical_sort",
    "classify_subunit",
    "covers",
    "decompose_trivial",
    "enumerate_decompositions",
    "enumerate_pure_product_states",
    "enumerate_reversible",
    "enumerate_vertices",
    "evaluate",
    "generate_trivial_group",
    "hamming_distance",
    "is_allowed_effect",
    "is_allowed_reversible",
    "is_multiform",
    "joint_effect_vector",
    "lemma2_witness",
    "lemma8_witness",
    "linear_extension",
    "local_effect_vector",
    "membership",
    "parse_effect_expression",
    "parse_joint_label",
    "parse_system_file",
    "pure_product_state",
    "shared_polytope",
    "subunit_labels",
    "trivial_group_size",
    "verify_corollary2",
    "verify_lemma1",
    "verify_lemma5",
    "verify_structural_lemmas",
    "verify_theorem",
]
