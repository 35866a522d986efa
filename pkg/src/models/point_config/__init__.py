from .schema import (
    ConjectureReport,
    EquilibriumSolution,
    PointConfiguration,
    RandomInstance,
    RepulsionMatrix,
    RowSumReport,
    SweepRow,
)
from .services import (
    build_repulsion_matrix,
    cantor_configuration,
    capacity_lower_bound,
    check_sampler_fits,
    conjecture_sweep,
    quadratic_form,
    random_separated_configuration,
    realize_instance,
    row_sum_report,
    scale_configuration,
    solve_equilibrium,
)

__all__ = [
    "ConjectureReport",
    "EquilibriumSolution",
    "PointConfiguration",
    "RandomInstance",
    "RepulsionMatrix",
    "RowSumReport",
    "SweepRow",
    "build_repulsion_matrix",
    "cantor_configuration",
    "capacity_lower_bound",
    "check_sampler_fits",
    "conjecture_sweep",
    "quadratic_form",
    "random_separated_configuration",
    "realize_instance",
    "row_sum_report",
    "scale_configuration",
    "solve_equilibrium",
]
