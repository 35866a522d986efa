import numpy as np
from loguru import logger

from core.exceptions import DomainException
from core.internal_codes import InternalCodesRepulsion
from core.settings import settings
from models.filtration_model import GenerationalSet, LeafMeasure, RepulsionSchedule, is_socialist
from shared.utils_parallel import chunk_bounds, map_ordered
from .schema import GenerationMassSquares, TransferDelta


def _require_inputs(generational_set: GenerationalSet, schedule: RepulsionSchedule, mu: LeafMeasure) -> None:
    schedule.require_fits(generational_set)
    mu.require_fits(generational_set)


def _generation_sums(generational_set: GenerationalSet, values: np.ndarray, generation: int) -> np.ndarray:
    """Per-node sums of a leaf vector over the descendants at one generation."""
    offset = generational_set.generation_offsets[generation]
    return np.bincount(generational_set.ancestors[generation] - offset,
                       weights=values,
                       minlength=generational_set.generation_size(generation))


def node_masses(generational_set: GenerationalSet, mu: LeafMeasure) -> np.ndarray:
    mu.require_fits(generational_set)
    masses = np.empty(generational_set.total)
    for generation in range(generational_set.n + 1):
        start, stop = generational_set.generation_offsets[generation:generation + 2]
        masses[start:stop] = _generation_sums(generational_set, mu.masses, generation)
    return masses


def generation_mass_squares(generational_set: GenerationalSet, mu: LeafMeasure) -> GenerationMassSquares:
    mu.require_fits(generational_set)
    squares = []
    for generation in range(generational_set.n + 1):
        level = _generation_sums(generational_set, mu.masses, generation)
        squares.append(float(np.sum(level * level)))
    return GenerationMassSquares(T=tuple(squares))


def repulsion_hierarchical(generational_set: GenerationalSet,
                           schedule: RepulsionSchedule,
                           mu: LeafMeasure) -> float:
    """Q(mu) = r_0 T_0 + sum_l (r_l - r_{l-1}) T_l, from grouping pairs by last common generation."""
    _require_inputs(generational_set, schedule, mu)
    squares = np.asarray(generation_mass_squares(generational_set, mu).T)
    return float(np.sum(schedule.increments * squares))


def _shared_generations(generational_set: GenerationalSet, rows: slice) -> np.ndarray:
    ancestors = generational_set.ancestors
    shared = np.zeros((rows.stop - rows.start, generational_set.leaf_count), dtype=np.int64)
    for generation in range(1, generational_set.n + 1):
        shared += ancestors[generation, rows, None] == ancestors[generation, None, :]
    return shared


def repulsion_naive(generational_set: GenerationalSet,
                    schedule: RepulsionSchedule,
                    mu: LeafMeasure,
                    threads: int | None = None) -> float:
    """Exact double sum over ordered leaf pairs, including the diagonal r(Q, Q) = r_n."""
    _require_inputs(generational_set, schedule, mu)
    masses = mu.masses
    r = schedule.array

    def block(bounds: tuple[int, int]) -> float:
        rows = slice(*bounds)
        kernel = r[_shared_generations(generational_set, rows)]
        return float(masses[rows] @ (kernel @ masses))

    bounds = chunk_bounds(generational_set.leaf_count, settings.COMPUTE.NAIVE_CHUNK)
    partials = map_ordered(block, bounds, threads or settings.COMPUTE.THREADS)
    return float(np.sum(partials))


def gram_matrix(generational_set: GenerationalSet, schedule: RepulsionSchedule) -> np.ndarray:
    """Dense leaf-pair matrix r(Q, R)."""
    schedule.require_fits(generational_set)
    return schedule.array[_shared_generations(generational_set, slice(0, generational_set.leaf_count))]


def apply_gram(generational_set: GenerationalSet, schedule: RepulsionSchedule, values: np.ndarray) -> np.ndarray:
    """Matrix-free product with the Gram matrix: aggregate up the tree, distribute weighted sums down."""
    schedule.require_fits(generational_set)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (generational_set.leaf_count,):
        raise DomainException(f"Vector of shape {values.shape} does not match {generational_set.leaf_count} leaves")
    result = np.full(generational_set.leaf_count, schedule.increments[0] * np.sum(values))
    for generation in range(1, generational_set.n + 1):
        offset = generational_set.generation_offsets[generation]
        level = _generation_sums(generational_set, values, generation)
        result += schedule.increments[generation] * level[generational_set.ancestors[generation] - offset]
    return result


def potentials(generational_set: GenerationalSet, schedule: RepulsionSchedule, mu: LeafMeasure) -> np.ndarray:
    mu.require_fits(generational_set)
    return apply_gram(generational_set, schedule, mu.masses)


def potential(generational_set: GenerationalSet, schedule: RepulsionSchedule, mu: LeafMeasure, leaf: int) -> float:
    _require_inputs(generational_set, schedule, mu)
    i = generational_set.leaf_index(leaf)
    total = schedule.increments[0] * np.sum(mu.masses)
    for generation in range(1, generational_set.n + 1):
        under = generational_set.ancestors[generation] == generational_set.ancestors[generation, i]
        total += schedule.increments[generation] * np.sum(mu.masses[under])
    return float(total)


# Mass exchange between siblings
# ----------------------------------------------------------------

def _require_siblings(generational_set: GenerationalSet, node_a: int, node_b: int) -> None:
    a = generational_set.require_node(node_a)
    b = generational_set.require_node(node_b)
    if a.id == b.id:
        raise DomainException(f"Mass exchange needs two distinct nodes, got {a.id} twice")
    if a.parent is None or a.parent != b.parent:
        raise DomainException(f"Nodes {a.id} and {b.id} are not siblings", data={"pair": [a.id, b.id]})


def _exchange_factors(generational_set: GenerationalSet, mu: LeafMeasure, node_a: int, node_b: int):
    mask_a = generational_set.leaf_mask_under(node_a)
    mask_b = generational_set.leaf_mask_under(node_b)
    mass_a = float(np.sum(mu.masses[mask_a]))
    mass_b = float(np.sum(mu.masses[mask_b]))
    if mass_a <= 0 or mass_b <= 0:
        raise DomainException(
            f"Mass exchange needs positive masses, got mu({node_a})={mass_a}, mu({node_b})={mass_b}",
            error_code=InternalCodesRepulsion.MEASURE_ERROR,
        )
    mean = 0.5 * (mass_a + mass_b)
    return mask_a, mask_b, mass_a, mass_b, mean / mass_a, mean / mass_b


def mass_exchange(mu: LeafMeasure, generational_set: GenerationalSet, node_a: int, node_b: int) -> LeafMeasure:
    mu.require_fits(generational_set)
    _require_siblings(generational_set, node_a, node_b)
    mask_a, mask_b, _, _, scale_a, scale_b = _exchange_factors(generational_set, mu, node_a, node_b)
    masses = mu.masses.copy()
    masses[mask_a] *= scale_a
    masses[mask_b] *= scale_b
    return LeafMeasure(masses=masses)


def _descendant_squares(generational_set: GenerationalSet,
                        masses: np.ndarray,
                        mask: np.ndarray,
                        generation: int) -> float:
    """sum of mu(P)^2 over generation-`generation` nodes P below the leaves in mask."""
    offset = generational_set.generation_offsets[generation]
    level = masses[offset:offset + generational_set.generation_size(generation)]
    below = generational_set.ancestors[generation][mask] - offset
    # descendants of one node are a contiguous block
    block = level[below.min():below.max() + 1]
    return float(np.sum(block * block))


def delta_q_exchange(generational_set: GenerationalSet,
                     schedule: RepulsionSchedule,
                     mu: LeafMeasure,
                     node_a: int,
                     node_b: int) -> float:
    """Q(mu) - Q(exchanged mu), from the per-generation closed form."""
    _require_inputs(generational_set, schedule, mu)
    _require_siblings(generational_set, node_a, node_b)
    mask_a, mask_b, _, _, scale_a, scale_b = _exchange_factors(generational_set, mu, node_a, node_b)
    masses = node_masses(generational_set, mu)
    start = generational_set.nodes[node_a].gen
    delta = 0.0
    for generation in range(start, generational_set.n + 1):
        inside_a = _descendant_squares(generational_set, masses, mask_a, generation)
        inside_b = _descendant_squares(generational_set, masses, mask_b, generation)
        delta += schedule.increments[generation] * ((1.0 - scale_a ** 2) * inside_a + (1.0 - scale_b ** 2) * inside_b)
    return float(delta)


def delta_q_socialist(generational_set: GenerationalSet,
                      schedule: RepulsionSchedule,
                      mu: LeafMeasure,
                      node_a: int,
                      node_b: int) -> float:
    """
    Exchange drop on a socialist tree when mu is equidistributed below A and B:
    1/2 (mu(A) - mu(B))^2 * sum_{l <= j <= n} (r_j - r_{j-1}) / M_j.
    """
    _require_inputs(generational_set, schedule, mu)
    _require_siblings(generational_set, node_a, node_b)
    profile = is_socialist(generational_set)
    if profile is None:
        raise DomainException("The socialist exchange formula needs a socialist set")
    _, _, mass_a, mass_b, _, _ = _exchange_factors(generational_set, mu, node_a, node_b)
    level = generational_set.nodes[node_a].gen
    total = 0.0
    descendants = 1
    for generation in range(level, generational_set.n + 1):
        total += schedule.increments[generation] / descendants
        if generation < generational_set.n:
            descendants *= profile.counts[generation]
    return 0.5 * (mass_a - mass_b) ** 2 * total


# Transfer onto a zero-mass leaf
# ----------------------------------------------------------------

def _transfer_setup(generational_set: GenerationalSet, mu: LeafMeasure, leaf_a: int, leaf_b: int):
    i = generational_set.leaf_index(leaf_a)
    j = generational_set.leaf_index(leaf_b)
    if mu.masses[i] != 0.0:
        raise DomainException(f"Transfer target {leaf_a} must carry zero mass",
                              error_code=InternalCodesRepulsion.MEASURE_ERROR)
    if mu.masses[j] <= 0.0:
        raise DomainException(f"Transfer source {leaf_b} must carry positive mass",
                              error_code=InternalCodesRepulsion.MEASURE_ERROR)
    masses = node_masses(generational_set, mu)
    chain_a = generational_set.ancestors[:, i]
    positive = np.flatnonzero(masses[chain_a] > 0.0)
    k = int(positive.max())
    if generational_set.ancestors[k, j] != chain_a[k]:
        raise DomainException(
            f"Leaf {leaf_b} is not inside node {int(chain_a[k])}, the last ancestor of {leaf_a} with positive mass",
            data={"pair": [leaf_a, leaf_b], "k": k},
        )
    return i, j, k, masses


def mass_transfer(mu: LeafMeasure, generational_set: GenerationalSet, leaf_a: int, leaf_b: int) -> LeafMeasure:
    """Split the mass of B evenly between B and the zero-mass leaf A."""
    mu.require_fits(generational_set)
    i, j, _, _ = _transfer_setup(generational_set, mu, leaf_a, leaf_b)
    masses = mu.masses.copy()
    masses[i] = masses[j] = 0.5 * mu.masses[j]
    return LeafMeasure(masses=masses)


def delta_q_transfer(generational_set: GenerationalSet,
                     schedule: RepulsionSchedule,
                     mu: LeafMeasure,
                     leaf_a: int,
                     leaf_b: int) -> TransferDelta:
    _require_inputs(generational_set, schedule, mu)
    _, j, k, masses = _transfer_setup(generational_set, mu, leaf_a, leaf_b)
    r = schedule.array
    n = generational_set.n
    chain_b = masses[generational_set.ancestors[:, j]]
    b = chain_b[n]
    rest = chain_b[k + 1] - b
    nearby = float(np.sum(r[k + 1:n] * (chain_b[k + 1:n] - chain_b[k + 2:n + 1])))
    delta = 0.5 * r[n] * b * b - r[k] * b * (0.5 * b + rest) + b * nearby
    lower_bound = 0.5 * (r[n] - r[k]) * b * b + (r[k + 1] - r[k]) * b * rest
    logger.debug(f"Transfer {leaf_b} -> {leaf_a}: k={k}, delta={delta}, lower bound={lower_bound}")
    return TransferDelta(delta=float(delta), lower_bound=float(lower_bound), k=k)
