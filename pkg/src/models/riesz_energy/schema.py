from pydantic import BaseModel, ConfigDict, Field


class EnergyEstimate(BaseModel):
    """Monte-Carlo estimate of the Riesz 1-energy, split into same-leaf and cross-leaf parts."""
    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0)
    standard_error: float = Field(ge=0)
    samples: int
    seed: int
    diagonal: float = Field(ge=0)
    off_diagonal: float = Field(ge=0)


class EnergyLowerBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0)
    constant: float = Field(gt=0)
    repulsion: float = Field(ge=0)
    C: float
    eps: float
