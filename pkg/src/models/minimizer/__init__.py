from .schema import (
    EquidistributionReport,
    ExchangeStabilityReport,
    MinimizationResult,
    NondegeneracyReport,
    SolveStage,
)
from .services import (
    brute_force_minimize,
    kkt_residual,
    minimize_repulsion,
    project_to_simplex,
    projected_gradient,
    verify_equidistribution,
    verify_exchange_stability,
    verify_nondegeneracy,
)

__all__ = [
    "EquidistributionReport",
    "ExchangeStabilityReport",
    "MinimizationResult",
    "NondegeneracyReport",
    "SolveStage",
    "brute_force_minimize",
    "kkt_residual",
    "minimize_repulsion",
    "project_to_simplex",
    "projected_gradient",
    "verify_equidistribution",
    "verify_exchange_stability",
    "verify_nondegeneracy",
]
