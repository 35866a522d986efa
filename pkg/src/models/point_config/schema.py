from functools import cached_property
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from core.exceptions import SeparationException

SEPARATION_RTOL = 1e-12


class PointConfiguration(BaseModel):
    """Centers z_1..z_N of disjoint balls of radius r, pairwise at least 2r apart."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    r: float = Field(gt=0)
    points: np.ndarray

    @field_validator("points", mode="before")
    @classmethod
    def _as_planar_points(cls, value: Any) -> np.ndarray:
        points = np.array(value, dtype=np.float64, copy=True)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] == 0:
            raise ValueError(f"points must be a non-empty list of [x, y] pairs, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise ValueError("points must be finite")
        points.flags.writeable = False
        return points

    @model_validator(mode="after")
    def _check_separation(self) -> "PointConfiguration":
        if self.N < 2:
            return self
        distances, neighbours = cKDTree(self.points).query(self.points, k=2)
        closest = int(np.argmin(distances[:, 1]))
        distance = float(distances[closest, 1])
        if distance < 2.0 * self.r * (1.0 - SEPARATION_RTOL):
            pair = sorted((closest, int(neighbours[closest, 1])))
            raise SeparationException(
                f"Points {pair[0]} and {pair[1]} are {distance!r} apart, closer than 2r = {2.0 * self.r!r}",
                data={"pair": pair, "distance": distance, "r": self.r},
            )
        return self

    @field_serializer("points")
    def _serialize_points(self, points: np.ndarray) -> list[list[float]]:
        return points.tolist()

    @property
    def N(self) -> int:
        return int(self.points.shape[0])


class RepulsionMatrix(BaseModel):
    """
    A_ij = 1 / (r + |z_i - z_j|) for a separated configuration.

    Entries are materialized only up to `dense_limit` points; larger matrices
    are applied block by block.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: PointConfiguration
    dense_limit: int
    block_rows: int
    dense: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.config.N

    @property
    def diagonal(self) -> float:
        return 1.0 / self.config.r

    @property
    def is_dense(self) -> bool:
        return self.dense is not None

    def rows(self, start: int, stop: int) -> np.ndarray:
        points = self.config.points
        return 1.0 / (self.config.r + cdist(points[start:stop], points))

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.dense is not None:
            return self.dense @ x
        out = np.empty(self.N)
        for start in range(0, self.N, self.block_rows):
            stop = min(start + self.block_rows, self.N)
            out[start:stop] = self.rows(start, stop) @ x
        return out

    @cached_property
    def row_sums(self) -> np.ndarray:
        sums = self.matvec(np.ones(self.N))
        sums.flags.writeable = False
        return sums


class EquilibriumSolution(BaseModel):
    """x* = lambda A^-1 1, the minimizer of x^T A x on the hyperplane x^T 1 = 1."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    x_star: np.ndarray
    lambda_: float = Field(alias="lambda", gt=0)
    nonneg: bool
    residual: float = Field(ge=0)
    min_weight: float
    flagged: bool
    method: str
    iterations: int = Field(ge=0)

    @field_serializer("x_star")
    def _serialize_weights(self, x_star: np.ndarray) -> list[float]:
        return x_star.tolist()


class RowSumReport(BaseModel):
    N: int
    min: float
    max: float
    mean: float
    spread_ratio: float
    predicted_lambda: float
    solved_lambda: float | None = None
    agrees: bool | None = None


class RandomInstance(BaseModel):
    """A seeded random separated configuration, sampled when a sweep reaches it."""
    model_config = ConfigDict(frozen=True)

    N: int = Field(ge=1)
    r: float = Field(gt=0)
    box: float = Field(gt=0)
    seed: int = Field(ge=0)


class SweepRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    instance_id: int
    N: int
    r: float
    lambda_: float | None = Field(default=None, alias="lambda")
    capacity_stat: float | None = None
    min_weight: float | None = None
    nonneg: bool | None = None
    rowsum_min: float | None = None
    rowsum_max: float | None = None
    residual: float | None = None
    flagged: bool = False
    error: str | None = None


class ConjectureReport(BaseModel):
    rows: list[SweepRow]
    instances: int
    flags: int
    failures: int
    flagged_instances: list[PointConfiguration] = []
