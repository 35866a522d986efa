from .schema import EnergyEstimate, EnergyLowerBound
from .services import comparison_constant, energy_lower_bound_via_repulsion, energy_mc

__all__ = [
    "EnergyEstimate",
    "EnergyLowerBound",
    "comparison_constant",
    "energy_lower_bound_via_repulsion",
    "energy_mc",
]
