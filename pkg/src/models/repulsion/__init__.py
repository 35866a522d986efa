from .schema import GenerationMassSquares, RepulsionEvaluation, TransferDelta
from .services import (
    apply_gram,
    delta_q_exchange,
    delta_q_socialist,
    delta_q_transfer,
    generation_mass_squares,
    gram_matrix,
    mass_exchange,
    mass_transfer,
    node_masses,
    potential,
    potentials,
    repulsion_hierarchical,
    repulsion_naive,
)

__all__ = [
    "GenerationMassSquares",
    "RepulsionEvaluation",
    "TransferDelta",
    "apply_gram",
    "delta_q_exchange",
    "delta_q_socialist",
    "delta_q_transfer",
    "generation_mass_squares",
    "gram_matrix",
    "mass_exchange",
    "mass_transfer",
    "node_masses",
    "potential",
    "potentials",
    "repulsion_hierarchical",
    "repulsion_naive",
]
