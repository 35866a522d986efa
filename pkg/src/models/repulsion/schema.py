from pydantic import BaseModel, Field


class GenerationMassSquares(BaseModel):
    """T[l] = sum over generation-l nodes P of mu(P)^2."""
    T: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.T) - 1


class RepulsionEvaluation(BaseModel):
    naive: float | None = Field(default=None, ge=0)
    hierarchical: float = Field(ge=0)
    relative_gap: float | None = None
    leaf_count: int
    n: int


class TransferDelta(BaseModel):
    """Closed-form repulsion drop of the zero-mass transfer and its lower bound."""
    delta: float
    lower_bound: float
    k: int
