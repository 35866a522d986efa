import math

import numpy as np
from loguru import logger

from core.exceptions import DomainException
from core.settings import settings
from models.filtration_model import GenerationalSet, LeafMeasure, RepulsionSchedule, validate_even_distribution
from models.repulsion import repulsion_hierarchical
from shared.utils_parallel import chunk_bounds, map_ordered
from .schema import EnergyEstimate, EnergyLowerBound

SAMPLE_BATCH = 8192
KEY_DECIMALS = 12


def _leaf_boxes(generational_set: GenerationalSet) -> np.ndarray:
    if not generational_set.has_geometry:
        raise DomainException("Riesz energy needs box geometry on the set")
    return generational_set.boxes[generational_set.leaf_offset:]


def _pair_keys(boxes: np.ndarray, masses: np.ndarray, rows: slice) -> tuple[np.ndarray, np.ndarray]:
    """
    Distinct (|dx|, |dy|, hw_Q, hw_R) keys of the cross-leaf pairs in a row block,
    with the total mass product of each. |dx| and |dy| are sorted since the
    uniform square law is symmetric under reflections and the diagonal swap.
    """
    block = boxes[rows]
    dx = np.abs(block[:, None, 0] - boxes[None, :, 0])
    dy = np.abs(block[:, None, 1] - boxes[None, :, 1])
    hw_q = np.broadcast_to(block[:, None, 2], dx.shape)
    hw_r = np.broadcast_to(boxes[None, :, 2], dx.shape)
    weights = masses[rows, None] * masses[None, :]

    off = np.ones(dx.shape, dtype=bool)
    off[np.arange(dx.shape[0]), np.arange(rows.start, rows.stop)] = False
    off &= weights > 0
    keys = np.stack([np.maximum(dx, dy)[off], np.minimum(dx, dy)[off], hw_q[off], hw_r[off]], axis=1)
    return np.round(keys, KEY_DECIMALS), weights[off]


def _merge_keys(keys: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if keys.shape[0] == 0:
        return keys, weights
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    return unique, np.bincount(inverse.reshape(-1), weights=weights, minlength=unique.shape[0])


def _off_diagonal_keys(boxes: np.ndarray, masses: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    parts = [_pair_keys(boxes, masses, slice(start, stop))
             for start, stop in chunk_bounds(boxes.shape[0], settings.COMPUTE.NAIVE_CHUNK)]
    keys = np.concatenate([part[0] for part in parts]) if parts else np.empty((0, 4))
    weights = np.concatenate([part[1] for part in parts]) if parts else np.empty(0)
    return _merge_keys(keys, weights)


def _same_square_kernel(theta: np.ndarray, fraction: np.ndarray) -> np.ndarray:
    """
    Unbiased bounded estimator of E[1/|u - v|] for u, v uniform on [-1, 1]^2.

    The difference w = u - v has the tent density (2-|w1|)(2-|w2|)/16 on
    [-2, 2]^2. In polar coordinates the 1/|w| singularity cancels the Jacobian,
    so sampling the angle uniformly and the radius uniformly up to the square's
    edge gives 2 pi rho_max p(w), which is bounded.
    """
    cos, sin = np.cos(theta), np.sin(theta)
    rho_max = 2.0 / np.maximum(np.abs(cos), np.abs(sin))
    rho = fraction * rho_max
    density = (2.0 - np.abs(rho * cos)) * (2.0 - np.abs(rho * sin)) / 16.0
    return 2.0 * math.pi * rho_max * density


def _cross_kernel(keys: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(keys, samples) values of 1/|x - y| for x = c_Q + hw_Q u, y = c_R + hw_R v."""
    gap_x = keys[:, 0, None] + keys[:, 2, None] * u[None, :, 0] - keys[:, 3, None] * v[None, :, 0]
    gap_y = keys[:, 1, None] + keys[:, 2, None] * u[None, :, 1] - keys[:, 3, None] * v[None, :, 1]
    return 1.0 / np.hypot(gap_x, gap_y)


def energy_mc(generational_set: GenerationalSet,
              mu: LeafMeasure,
              samples: int,
              seed: int,
              threads: int | None = None) -> EnergyEstimate:
    """
    Stratified estimate of the Riesz 1-energy of mu, uniform inside each leaf square.

    Every leaf-pair block shares one stream of standardized samples, so the
    estimate is a mean of per-sample totals and its standard error accounts for
    the correlation between blocks.
    """
    boxes = _leaf_boxes(generational_set)
    mu.require_fits(generational_set)
    if samples < settings.ENERGY.MIN_SAMPLES:
        raise DomainException(f"energy_mc needs at least {settings.ENERGY.MIN_SAMPLES} samples, got {samples}")
    if seed < 0:
        raise DomainException(f"seed must be nonnegative, got {seed}")

    cross_stream, same_stream = (np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(2))
    u = cross_stream.uniform(-1.0, 1.0, size=(samples, 2))
    v = cross_stream.uniform(-1.0, 1.0, size=(samples, 2))
    theta = same_stream.uniform(0.0, 2.0 * math.pi, size=samples)
    fraction = same_stream.uniform(0.0, 1.0, size=samples)

    masses = mu.masses
    same_weight = float(np.sum(masses * masses / boxes[:, 2]))
    diagonal_samples = same_weight * _same_square_kernel(theta, fraction)

    keys, weights = _off_diagonal_keys(boxes, masses)
    logger.debug(f"Energy estimate over {keys.shape[0]} distinct cross-leaf blocks, {samples} samples")

    def block(bounds: tuple[int, int]) -> np.ndarray:
        chunk = slice(*bounds)
        totals = np.empty(samples)
        for start, stop in chunk_bounds(samples, SAMPLE_BATCH):
            totals[start:stop] = weights[chunk] @ _cross_kernel(keys[chunk], u[start:stop], v[start:stop])
        return totals

    partials = map_ordered(block, chunk_bounds(keys.shape[0], settings.ENERGY.KEY_CHUNK),
                           threads or settings.COMPUTE.THREADS)
    cross_samples = np.zeros(samples)
    for partial in partials:
        cross_samples += partial

    totals = diagonal_samples + cross_samples
    return EnergyEstimate(
        value=float(np.mean(totals)),
        standard_error=float(np.std(totals, ddof=1) / math.sqrt(samples)),
        samples=samples,
        seed=seed,
        diagonal=float(np.mean(diagonal_samples)),
        off_diagonal=float(np.mean(cross_samples)),
    )


def comparison_constant(generational_set: GenerationalSet, schedule: RepulsionSchedule) -> float:
    """min over nodes P of 1 / (diam(P) r_gen(P)); pairs meeting last in P have 1/|x-y| >= this times r."""
    if not generational_set.has_geometry:
        raise DomainException("The comparison constant needs box geometry on the set")
    schedule.require_fits(generational_set)
    diam = 2.0 * generational_set.boxes[:, 2] * math.sqrt(2.0)
    r = schedule.array[generational_set.generations]
    return float(np.min(1.0 / (diam * r)))


def energy_lower_bound_via_repulsion(generational_set: GenerationalSet,
                                     schedule: RepulsionSchedule,
                                     mu: LeafMeasure,
                                     C: float = 2.0,
                                     eps: float = 1.0) -> EnergyLowerBound:
    report = validate_even_distribution(generational_set, schedule, C, eps)
    if not report.passed:
        raise DomainException(
            f"Set is not evenly distributed for C={C}, eps={eps}",
            data=report.model_dump(mode="json"),
        )
    constant = comparison_constant(generational_set, schedule)
    repulsion = repulsion_hierarchical(generational_set, schedule, mu)
    return EnergyLowerBound(value=constant * repulsion, constant=constant, repulsion=repulsion, C=C, eps=eps)
