import itertools
import math

import numpy as np
import scipy.linalg
from loguru import logger
from scipy.optimize import Bounds, LinearConstraint, minimize
from scipy.sparse.linalg import LinearOperator, cg

from core.exceptions import ConvergenceException, DomainException, NumericalException
from core.settings import settings
from models.filtration_model import GenerationalSet, LeafMeasure, RepulsionSchedule, is_socialist
from models.repulsion import apply_gram, delta_q_exchange, gram_matrix, node_masses, repulsion_hierarchical
from .schema import (
    EquidistributionReport,
    ExchangeStabilityReport,
    MinimizationResult,
    NondegeneracyReport,
    SolveStage,
)

BRUTE_FORCE_MAX_LEAVES = 6
BRUTE_FORCE_BATCH = 200_000


def project_to_simplex(values: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1} by sorting."""
    ordered = np.sort(values)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    steps = np.arange(1, values.size + 1)
    rho = np.flatnonzero(ordered - cumulative / steps > 0)[-1]
    theta = cumulative[rho] / (rho + 1)
    return np.maximum(values - theta, 0.0)


def kkt_residual(generational_set: GenerationalSet, schedule: RepulsionSchedule, masses: np.ndarray) -> float:
    """
    Deviation of the potential from its mass-weighted mean on the support, plus
    the amount by which any zero-mass leaf sits below that mean.
    """
    field = apply_gram(generational_set, schedule, masses)
    mean = float(np.dot(masses, field))
    support = masses > 0
    spread = float(np.max(np.abs(field[support] - mean))) if np.any(support) else 0.0
    below = float(np.max(mean - field[~support], initial=0.0))
    return spread + max(below, 0.0)


def _result(generational_set: GenerationalSet,
            schedule: RepulsionSchedule,
            masses: np.ndarray,
            iterations: int,
            stage: SolveStage) -> MinimizationResult:
    measure = LeafMeasure(masses=masses)
    return MinimizationResult(
        minimizer=measure,
        min_value=repulsion_hierarchical(generational_set, schedule, measure),
        iterations=iterations,
        kkt_residual=kkt_residual(generational_set, schedule, measure.masses),
        active_bound_count=int(np.count_nonzero(measure.masses == 0.0)),
        stage=stage,
    )


def _solve_stationarity(generational_set: GenerationalSet, schedule: RepulsionSchedule) -> tuple[np.ndarray, int]:
    """Solve G y = 1; the affine minimizer is y / sum(y)."""
    count = generational_set.leaf_count
    ones = np.ones(count)
    if count <= settings.SOLVER.DENSE_GRAM_LIMIT:
        gram = gram_matrix(generational_set, schedule)
        try:
            factor = scipy.linalg.cho_factor(gram)
        except np.linalg.LinAlgError as exc:
            raise NumericalException(f"Cholesky factorization of the {count}x{count} Gram matrix failed",
                                     data={"leaf_count": count}) from exc
        logger.debug(f"Stationarity solved densely for {count} leaves")
        return scipy.linalg.cho_solve(factor, ones), 1

    iterations = 0

    def count_iteration(_):
        nonlocal iterations
        iterations += 1

    operator = LinearOperator((count, count),
                              matvec=lambda v: apply_gram(generational_set, schedule, v),
                              dtype=np.float64)
    solution, info = cg(operator, ones, rtol=settings.SOLVER.CG_RTOL,
                        maxiter=settings.SOLVER.MAX_ITERATIONS, callback=count_iteration)
    if info != 0:
        raise NumericalException(f"Matrix-free CG on the Gram system stopped with info={info}",
                                 data={"leaf_count": count, "iterations": iterations})
    logger.debug(f"Stationarity solved matrix-free for {count} leaves in {iterations} CG iterations")
    return solution, iterations


def projected_gradient(generational_set: GenerationalSet,
                       schedule: RepulsionSchedule,
                       start: np.ndarray,
                       tol: float | None = None,
                       max_iterations: int | None = None) -> MinimizationResult:
    tol = tol if tol is not None else settings.SOLVER.KKT_TOLERANCE
    max_iterations = max_iterations if max_iterations is not None else settings.SOLVER.MAX_ITERATIONS
    # entries are positive, so the largest row sum bounds the spectrum
    lipschitz = 2.0 * float(np.max(apply_gram(generational_set, schedule, np.ones(generational_set.leaf_count))))
    step = 1.0 / lipschitz

    masses = project_to_simplex(np.asarray(start, dtype=np.float64))
    best, best_residual = masses, kkt_residual(generational_set, schedule, masses)
    for iteration in range(1, max_iterations + 1):
        gradient = 2.0 * apply_gram(generational_set, schedule, masses)
        masses = project_to_simplex(masses - step * gradient)
        residual = kkt_residual(generational_set, schedule, masses)
        if residual < best_residual:
            best, best_residual = masses, residual
        if residual <= tol:
            logger.debug(f"Projected gradient converged in {iteration} iterations (residual {residual:.3e})")
            return _result(generational_set, schedule, masses, iteration, SolveStage.PROJECTED_GRADIENT)

    raise ConvergenceException(
        f"Projected gradient did not reach KKT residual {tol} in {max_iterations} iterations",
        data={"best": best.tolist(), "kkt_residual": best_residual, "iterations": max_iterations},
    )


def minimize_repulsion(generational_set: GenerationalSet, schedule: RepulsionSchedule) -> MinimizationResult:
    schedule.require_fits(generational_set)
    solution, iterations = _solve_stationarity(generational_set, schedule)
    total = float(np.sum(solution))
    if total <= 0 or not math.isfinite(total):
        raise NumericalException(f"Stationarity solve produced a non-normalizable vector (sum {total})")
    masses = solution / total

    if np.all(masses >= 0):
        result = _result(generational_set, schedule, masses, iterations, SolveStage.STATIONARITY)
        if result.kkt_residual <= settings.SOLVER.KKT_TOLERANCE:
            return result
        logger.info(f"Stationarity solution has KKT residual {result.kkt_residual:.3e}, refining")
    else:
        logger.info(f"Stationarity solution has {int(np.count_nonzero(masses < 0))} negative masses, "
                    f"falling back to projected gradient")
    return projected_gradient(generational_set, schedule, masses)


def _compositions(total: int, parts: int):
    """Batches of all nonnegative integer vectors of length `parts` summing to `total`."""
    combinations = itertools.combinations(range(total + parts - 1), parts - 1)
    while True:
        batch = np.array(list(itertools.islice(combinations, BRUTE_FORCE_BATCH)), dtype=np.int64)
        if batch.size == 0:
            return
        batch = batch.reshape(-1, parts - 1)
        bars = np.hstack([np.full((batch.shape[0], 1), -1), batch, np.full((batch.shape[0], 1), total + parts - 1)])
        yield np.diff(bars, axis=1) - 1


def brute_force_minimize(generational_set: GenerationalSet,
                         schedule: RepulsionSchedule,
                         grid: int) -> MinimizationResult:
    """Exhaustive grid search over the simplex, refined by a constrained local solve."""
    schedule.require_fits(generational_set)
    count = generational_set.leaf_count
    if count > BRUTE_FORCE_MAX_LEAVES:
        raise DomainException(f"Brute force is limited to {BRUTE_FORCE_MAX_LEAVES} leaves, got {count}")
    if grid < 1:
        raise DomainException(f"grid must be >= 1, got {grid}")
    gram = gram_matrix(generational_set, schedule)

    if count == 1:
        return _result(generational_set, schedule, np.ones(1), 1, SolveStage.BRUTE_FORCE)

    best_value, best_point, evaluated = math.inf, None, 0
    for batch in _compositions(grid, count):
        points = batch / grid
        values = np.einsum("ij,jk,ik->i", points, gram, points)
        at = int(np.argmin(values))
        evaluated += points.shape[0]
        if values[at] < best_value:
            best_value, best_point = float(values[at]), points[at]

    refined = minimize(
        lambda x: float(x @ gram @ x),
        best_point,
        jac=lambda x: 2.0 * gram @ x,
        method="trust-constr",
        constraints=[LinearConstraint(np.ones((1, count)), 1.0, 1.0)],
        bounds=Bounds(np.zeros(count), np.ones(count)),
    )
    candidate = np.clip(refined.x, 0.0, None)
    candidate = candidate / np.sum(candidate)
    if float(candidate @ gram @ candidate) > best_value:
        candidate = best_point
    logger.debug(f"Brute force evaluated {evaluated} grid points, refined in {refined.nit} iterations")
    return _result(generational_set, schedule, candidate, evaluated + int(refined.nit), SolveStage.BRUTE_FORCE)


def verify_equidistribution(result: MinimizationResult,
                            generational_set: GenerationalSet,
                            tol: float) -> EquidistributionReport:
    if is_socialist(generational_set) is None:
        raise DomainException("Equidistribution is only guaranteed on socialist sets")
    masses = node_masses(generational_set, result.minimizer)
    report = EquidistributionReport(passed=True, tol=tol)
    for generation in range(1, generational_set.n + 1):
        start, stop = generational_set.generation_offsets[generation:generation + 2]
        level = masses[start:stop]
        heavy, light = int(np.argmax(level)), int(np.argmin(level))
        ratio = math.inf if level[light] <= 0 else float(level[heavy] / level[light])
        if ratio > report.worst_ratio:
            report = EquidistributionReport(
                passed=ratio <= 1.0 + tol,
                tol=tol,
                worst_generation=generation,
                worst_pair=(int(start) + heavy, int(start) + light),
                worst_ratio=ratio,
            )
    return report


def verify_nondegeneracy(result: MinimizationResult, tol: float) -> NondegeneracyReport:
    masses = result.minimizer.masses
    lightest = int(np.argmin(masses))
    return NondegeneracyReport(
        passed=bool(masses[lightest] >= tol),
        tol=tol,
        min_mass=float(masses[lightest]),
        min_leaf_index=lightest,
    )


def verify_exchange_stability(result: MinimizationResult,
                              generational_set: GenerationalSet,
                              schedule: RepulsionSchedule,
                              tol: float = 1e-9) -> ExchangeStabilityReport:
    """Largest repulsion drop available to a single sibling exchange; ~0 at a minimizer."""
    masses = node_masses(generational_set, result.minimizer)
    max_delta, worst, checked = -math.inf, None, 0
    for node in generational_set.nodes:
        for first, second in itertools.combinations(node.children, 2):
            if masses[first] <= 0 or masses[second] <= 0:
                continue
            delta = delta_q_exchange(generational_set, schedule, result.minimizer, first, second)
            checked += 1
            if delta > max_delta:
                max_delta, worst = delta, (first, second)
    max_delta = max_delta if checked else 0.0
    return ExchangeStabilityReport(passed=max_delta <= tol, tol=tol, pairs_checked=checked,
                                   max_delta=max_delta, worst_pair=worst)
