from .schema import (
    UNIT_SQUARE,
    BranchingProfile,
    Box,
    EvenDistributionReport,
    GenerationalSet,
    LeafMeasure,
    Node,
    Placer,
    RepulsionSchedule,
)
from .services import (
    build_cantor,
    build_random_filtration,
    build_socialist,
    cantor_schedule,
    corner_placer,
    equidistributed_measure,
    explicit_schedule,
    is_socialist,
    last_common_generation,
    last_common_generation_histogram,
    point_mass,
    validate_even_distribution,
)

__all__ = [
    "UNIT_SQUARE",
    "BranchingProfile",
    "Box",
    "EvenDistributionReport",
    "GenerationalSet",
    "LeafMeasure",
    "Node",
    "Placer",
    "RepulsionSchedule",
    "build_cantor",
    "build_random_filtration",
    "build_socialist",
    "cantor_schedule",
    "corner_placer",
    "equidistributed_measure",
    "explicit_schedule",
    "is_socialist",
    "last_common_generation",
    "last_common_generation_histogram",
    "point_mass",
    "validate_even_distribution",
]
