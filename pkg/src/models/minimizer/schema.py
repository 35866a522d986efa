try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self), format_spec)

from pydantic import BaseModel, ConfigDict, Field

from models.filtration_model import LeafMeasure


class SolveStage(StrEnum):
    STATIONARITY = "stationarity"
    PROJECTED_GRADIENT = "projected_gradient"
    BRUTE_FORCE = "brute_force"


class MinimizationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    minimizer: LeafMeasure
    min_value: float = Field(ge=0)
    iterations: int = Field(ge=0)
    kkt_residual: float = Field(ge=0)
    active_bound_count: int = Field(ge=0)
    stage: SolveStage


class EquidistributionReport(BaseModel):
    passed: bool
    tol: float
    worst_generation: int | None = None
    worst_pair: tuple[int, int] | None = None
    worst_ratio: float = 1.0


class NondegeneracyReport(BaseModel):
    passed: bool
    tol: float
    min_mass: float
    # position in leaf order, not a node id
    min_leaf_index: int


class ExchangeStabilityReport(BaseModel):
    passed: bool
    tol: float
    pairs_checked: int
    max_delta: float
    worst_pair: tuple[int, int] | None = None
