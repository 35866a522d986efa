from typing import Sequence

import numpy as np
import scipy.linalg
from loguru import logger
from scipy.sparse.linalg import LinearOperator, cg

from core.exceptions import DomainException, NumericalException, SamplingException
from core.settings import settings
from models.filtration_model import build_cantor
from shared.base_exceptions import BaseRepulsionException
from shared.utils_parallel import chunk_bounds, map_ordered
from .schema import (
    ConjectureReport,
    EquilibriumSolution,
    PointConfiguration,
    RandomInstance,
    RepulsionMatrix,
    RowSumReport,
    SweepRow,
)

MAX_CANTOR_CONFIGURATION = 7
SAMPLER_DENSITY = 0.5
ROW_SUM_RTOL = 1e-12


def build_repulsion_matrix(config: PointConfiguration, threads: int | None = None) -> RepulsionMatrix:
    dense_limit = settings.MATRIX.DENSE_LIMIT
    block_rows = settings.MATRIX.BLOCK_ROWS
    matrix = RepulsionMatrix(config=config, dense_limit=dense_limit, block_rows=block_rows)
    if config.N > dense_limit:
        logger.debug(f"Repulsion matrix with {config.N} points kept implicit")
        return matrix

    blocks = map_ordered(lambda bounds: matrix.rows(*bounds), chunk_bounds(config.N, block_rows),
                         threads or settings.COMPUTE.THREADS)
    entries = np.vstack(blocks)
    if not np.array_equal(entries, entries.T):
        raise NumericalException("Repulsion matrix is not symmetric", data={"N": config.N})
    if not np.all(np.diag(entries) == 1.0 / config.r):
        raise NumericalException("Repulsion matrix diagonal differs from 1/r", data={"N": config.N, "r": config.r})
    entries.flags.writeable = False
    return matrix.model_copy(update={"dense": entries})


def cantor_configuration(n: int) -> PointConfiguration:
    """Leaf-square centers of K_n with r equal to the leaf halfwidth."""
    if not isinstance(n, int) or not 1 <= n <= MAX_CANTOR_CONFIGURATION:
        raise DomainException(f"Cantor configurations need 1 <= n <= {MAX_CANTOR_CONFIGURATION}, got {n}")
    leaves = build_cantor(n).boxes[-4 ** n:]
    return PointConfiguration(r=4.0 ** -n / 2.0, points=leaves[:, :2])


def check_sampler_fits(N: int, r: float, box: float) -> None:
    if N < 1 or r <= 0 or box <= 0:
        raise DomainException(f"Need N >= 1, r > 0 and box > 0, got N={N}, r={r}, box={box}")
    if N * (2.0 * r) ** 2 > SAMPLER_DENSITY * box ** 2:
        raise SamplingException(
            f"{N} points with separation {2.0 * r} do not fit in a box of side {box}",
            data={"N": N, "r": r, "box": box},
        )


def random_separated_configuration(N: int, r: float, box: float, seed: int) -> PointConfiguration:
    """Dart throwing in [0, box]^2 with minimum distance 2r."""
    check_sampler_fits(N, r, box)

    rng = np.random.default_rng(seed)
    points = np.empty((N, 2))
    placed, attempts = 0, 0
    limit = settings.MATRIX.SAMPLER_MAX_ATTEMPTS
    min_square = (2.0 * r) ** 2
    while placed < N:
        if attempts >= limit:
            raise SamplingException(
                f"Placed {placed} of {N} points before the {limit}-attempt cap",
                data={"N": N, "r": r, "box": box, "seed": seed, "placed": placed},
            )
        attempts += 1
        candidate = rng.uniform(0.0, box, size=2)
        if placed and np.min(np.sum((points[:placed] - candidate) ** 2, axis=1)) < min_square:
            continue
        points[placed] = candidate
        placed += 1
    logger.debug(f"Placed {N} separated points in {attempts} attempts")
    return PointConfiguration(r=r, points=points)


def _solve_dense(matrix: RepulsionMatrix) -> tuple[np.ndarray, str, int]:
    try:
        factor = scipy.linalg.cho_factor(matrix.dense)
    except np.linalg.LinAlgError as exc:
        raise NumericalException(
            f"Cholesky factorization failed for a {matrix.N}x{matrix.N} repulsion matrix",
            data={"N": matrix.N, "r": matrix.config.r, "condition": float(np.linalg.cond(matrix.dense))},
        ) from exc
    return scipy.linalg.cho_solve(factor, np.ones(matrix.N)), "cholesky", 1


def _solve_iterative(matrix: RepulsionMatrix) -> tuple[np.ndarray, str, int]:
    iterations = 0

    def count_iteration(_):
        nonlocal iterations
        iterations += 1

    operator = LinearOperator((matrix.N, matrix.N), matvec=matrix.matvec, dtype=np.float64)
    jacobi = LinearOperator((matrix.N, matrix.N), matvec=lambda v: v / matrix.diagonal, dtype=np.float64)
    solution, info = cg(operator, np.ones(matrix.N), rtol=settings.MATRIX.CG_RTOL,
                        maxiter=settings.MATRIX.CG_MAX_ITERATIONS, M=jacobi, callback=count_iteration)
    if info != 0:
        raise NumericalException(
            f"Preconditioned CG stopped with info={info} on {matrix.N} points",
            data={"N": matrix.N, "r": matrix.config.r, "iterations": iterations},
        )
    return solution, "jacobi_cg", iterations


def solve_equilibrium(matrix: RepulsionMatrix) -> EquilibriumSolution:
    if matrix.is_dense:
        y, method, iterations = _solve_dense(matrix)
    else:
        logger.info(f"Solving {matrix.N}-point equilibrium with preconditioned CG")
        y, method, iterations = _solve_iterative(matrix)

    total = float(np.sum(y))
    if not total > 0:
        raise NumericalException(f"1^T A^-1 1 = {total} is not positive", data={"N": matrix.N})
    lam = 1.0 / total
    x_star = lam * y
    residual = float(np.max(np.abs(matrix.matvec(x_star) - lam)))
    min_weight = float(np.min(x_star))
    flagged = bool(np.min(y) < -settings.MATRIX.NEGATIVE_TOLERANCE * float(np.max(np.abs(y))))
    x_star.flags.writeable = False
    return EquilibriumSolution(
        x_star=x_star,
        lambda_=lam,
        nonneg=min_weight >= -settings.MATRIX.NONNEG_ATOL,
        residual=residual,
        min_weight=min_weight,
        flagged=flagged,
        method=method,
        iterations=iterations,
    )


def capacity_lower_bound(solution: EquilibriumSolution) -> float:
    return 1.0 / solution.lambda_


def row_sum_report(matrix: RepulsionMatrix, solution: EquilibriumSolution | None = None) -> RowSumReport:
    """
    Row sums against the solved lambda. When x* >= 0, lambda N = sum_j x*_j rowsum_j,
    so lambda and mean/N both lie between min/N and max/N.
    """
    sums = matrix.row_sums
    low, high, mean = float(np.min(sums)), float(np.max(sums)), float(np.mean(sums))
    spread = high / low
    predicted = mean / matrix.N
    report = RowSumReport(N=matrix.N, min=low, max=high, mean=mean, spread_ratio=spread, predicted_lambda=predicted)
    if solution is None:
        return report
    ratio = predicted / solution.lambda_
    agrees = (1.0 - ROW_SUM_RTOL) / spread <= ratio <= spread * (1.0 + ROW_SUM_RTOL)
    return report.model_copy(update={"solved_lambda": solution.lambda_, "agrees": agrees})


def quadratic_form(matrix: RepulsionMatrix, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (matrix.N,):
        raise DomainException(f"Vector of shape {x.shape} does not match {matrix.N} points")
    return float(x @ matrix.matvec(x))


def scale_configuration(config: PointConfiguration, t: float) -> PointConfiguration:
    if not t > 0:
        raise DomainException(f"Scale factor must be positive, got {t}")
    return PointConfiguration(r=config.r * t, points=config.points * t)


def realize_instance(instance: PointConfiguration | RandomInstance) -> PointConfiguration:
    if isinstance(instance, RandomInstance):
        return random_separated_configuration(instance.N, instance.r, instance.box, instance.seed)
    return instance


def _sweep_row(instance_id: int,
               instance: PointConfiguration | RandomInstance) -> tuple[SweepRow, PointConfiguration | None]:
    try:
        config = realize_instance(instance)
        matrix = build_repulsion_matrix(config, threads=1)
        solution = solve_equilibrium(matrix)
    except BaseRepulsionException as exc:
        return SweepRow(instance_id=instance_id, N=instance.N, r=instance.r, error=str(exc)), None
    return SweepRow(
        instance_id=instance_id,
        N=config.N,
        r=config.r,
        lambda_=solution.lambda_,
        capacity_stat=capacity_lower_bound(solution),
        min_weight=solution.min_weight,
        nonneg=solution.nonneg,
        rowsum_min=float(np.min(matrix.row_sums)),
        rowsum_max=float(np.max(matrix.row_sums)),
        residual=solution.residual,
        flagged=solution.flagged,
    ), config


def conjecture_sweep(instances: Sequence[PointConfiguration | RandomInstance],
                     threads: int | None = None) -> ConjectureReport:
    """Solve every instance; a failed sample or solve is recorded in its row and the sweep moves on."""
    results = map_ordered(lambda item: _sweep_row(*item), list(enumerate(instances)),
                          threads or settings.COMPUTE.THREADS)
    rows = [row for row, _ in results]
    flagged = [config for row, config in results if row.flagged]
    failures = sum(1 for _, config in results if config is None)
    for row in rows:
        if row.flagged:
            logger.warning(f"Instance {row.instance_id} has a negative equilibrium weight {row.min_weight}")
    return ConjectureReport(rows=rows, instances=len(rows), flags=len(flagged), failures=failures,
                            flagged_instances=flagged)
