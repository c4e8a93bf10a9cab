"""Weak separation, Grassmann necklaces, purity of their interiors and exteriors, plabic tilings."""
from .cyclic_core import (
    GroundContext,
    Subset,
    cyclic_interval,
    cyclic_less,
    dominates,
    neighbors,
    weakly_separated,
    weakly_separated_naive,
)
from .errors import (
    InputError,
    InvalidComplexError,
    PreconditionError,
    ResourceLimitError,
    ValidationError,
)
from .necklace import (
    GeneralizedNecklace,
    Necklace,
    Permutation,
    alignments,
    average_rotation,
    find_simple_alignment,
    is_less,
    largest_necklace,
    necklace_to_permutation,
    permutation_to_necklace,
    reduce_dummies,
    reduce_simple_alignment,
    validate_generalized,
    validate_necklace,
)
from .regions import (
    Collection,
    exterior,
    generalized_exterior,
    generalized_interior,
    interior,
    interior_chamber,
    is_chamber_set,
    separated_fan,
)
from .purity import (
    Mutation,
    PurityReport,
    apply_mutation,
    find_mutations,
    is_maximal,
    maximal_separated_collections,
    mutation_connected,
    purity_report,
    verify_prop4,
    verify_rank_formula,
    verify_theorem3prime,
)
from .plabic import (
    PlanePoint,
    PolyCurve,
    Tiling,
    build_tiling,
    complex_check,
    embed,
    fills_region,
    necklace_curve,
    point_inside,
    render_svg,
    verify_prop5,
)

__version__ = "0.1.0"

__all__ = [
    "GroundContext",
    "Subset",
    "cyclic_interval",
    "cyclic_less",
    "dominates",
    "neighbors",
    "weakly_separated",
    "weakly_separated_naive",
    "InputError",
    "InvalidComplexError",
    "PreconditionError",
    "ResourceLimitError",
    "ValidationError",
    "GeneralizedNecklace",
    "Necklace",
    "Permutation",
    "alignments",
    "average_rotation",
    "find_simple_alignment",
    "is_less",
    "largest_necklace",
    "necklace_to_permutation",
    "permutation_to_necklace",
    "reduce_dummies",
    "reduce_simple_alignment",
    "validate_generalized",
    "validate_necklace",
    "Collection",
    "exterior",
    "generalized_exterior",
    "generalized_interior",
    "interior",
    "interior_chamber",
    "is_chamber_set",
    "separated_fan",
    "Mutation",
    "PurityReport",
    "apply_mutation",
    "find_mutations",
    "is_maximal",
    "maximal_separated_collections",
    "mutation_connected",
    "purity_report",
    "verify_prop4",
    "verify_rank_formula",
    "verify_theorem3prime",
    "PlanePoint",
    "PolyCurve",
    "Tiling",
    "build_tiling",
    "complex_check",
    "embed",
    "fills_region",
    "necklace_curve",
    "point_inside",
    "render_svg",
    "verify_prop5",
]
