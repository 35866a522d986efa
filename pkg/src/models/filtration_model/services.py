import math
from typing import Callable

import numpy as np
from loguru import logger

from core.exceptions import DomainException
from .schema import (
    UNIT_SQUARE,
    BranchingProfile,
    Box,
    ClauseOffender,
    EvenDistributionReport,
    GenerationalSet,
    LeafMeasure,
    Node,
    Placer,
    RepulsionSchedule,
)

MAX_CANTOR_GENERATION = 10
CANTOR_BRANCHING = 4


def corner_placer(parent: Box, index: int, count: int, generation: int) -> Box:
    """Four-corner rule: children of sidelength 1/4 of the parent's, at its corners."""
    if count != CANTOR_BRANCHING:
        raise DomainException(f"The corner placer needs exactly 4 children, got {count}")
    hw = parent.hw / 4.0
    offset = parent.hw - hw
    sx = -1.0 if index % 2 == 0 else 1.0
    sy = -1.0 if index < 2 else 1.0
    return Box(cx=parent.cx + sx * offset, cy=parent.cy + sy * offset, hw=hw)


def _build_tree(n: int,
                child_count: Callable[[int, int], int],
                placer: Placer | None,
                root_box: Box) -> GenerationalSet:
    """
    Breadth-first construction. child_count(node_id, generation) gives the number
    of children of a node; the numbering is the canonical layout.
    """
    gens: list[int] = [0]
    parents: list[int | None] = [None]
    boxes: list[Box | None] = [root_box if placer is not None else None]
    children: list[tuple[int, ...]] = []

    frontier = [0]
    for generation in range(n):
        next_frontier: list[int] = []
        for node_id in frontier:
            count = child_count(node_id, generation)
            first = len(gens)
            for index in range(count):
                gens.append(generation + 1)
                parents.append(node_id)
                boxes.append(placer(boxes[node_id], index, count, generation + 1) if placer is not None else None)
            next_frontier.extend(range(first, first + count))
            children.append(tuple(range(first, first + count)))
        frontier = next_frontier
    children.extend(() for _ in frontier)

    nodes = tuple(
        Node(id=node_id, gen=gens[node_id], parent=parents[node_id], children=children[node_id], box=boxes[node_id])
        for node_id in range(len(gens))
    )
    return GenerationalSet(n=n, nodes=nodes)


def build_cantor(n: int) -> GenerationalSet:
    if not isinstance(n, int) or not 0 <= n <= MAX_CANTOR_GENERATION:
        raise DomainException(f"Cantor generation must be in [0, {MAX_CANTOR_GENERATION}], got {n}")
    logger.debug(f"Building four-corner Cantor generation K_{n}")
    return _build_tree(n, lambda node_id, generation: CANTOR_BRANCHING, corner_placer, UNIT_SQUARE)


def build_socialist(profile: BranchingProfile,
                    placer: Placer | None = None,
                    root_box: Box = UNIT_SQUARE) -> GenerationalSet:
    if profile.n == 0:
        raise DomainException("A socialist branching profile must not be empty")
    counts = profile.counts
    logger.debug(f"Building socialist tree with profile {counts}")
    return _build_tree(profile.n, lambda node_id, generation: counts[generation], placer, root_box)


def build_random_filtration(n: int, max_children: int, seed: int) -> GenerationalSet:
    if n < 1:
        raise DomainException(f"Random filtrations need n >= 1, got {n}")
    if max_children < 1:
        raise DomainException(f"max_children must be >= 1, got {max_children}")
    rng = np.random.default_rng(seed)
    # drawn in breadth-first order, one draw per internal node
    return _build_tree(n, lambda node_id, generation: int(rng.integers(1, max_children + 1)), None, UNIT_SQUARE)


def cantor_schedule(n: int) -> RepulsionSchedule:
    return RepulsionSchedule(values=tuple(float(4 ** generation) for generation in range(n + 1)))


def explicit_schedule(text: str) -> RepulsionSchedule:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise DomainException(f"Cannot parse schedule '{text}'") from exc
    return RepulsionSchedule(values=values)


def equidistributed_measure(generational_set: GenerationalSet) -> LeafMeasure:
    count = generational_set.leaf_count
    return LeafMeasure(masses=np.full(count, 1.0 / count))


def point_mass(generational_set: GenerationalSet, leaf: int) -> LeafMeasure:
    masses = np.zeros(generational_set.leaf_count)
    masses[generational_set.leaf_index(leaf)] = 1.0
    return LeafMeasure(masses=masses)


def is_socialist(generational_set: GenerationalSet) -> BranchingProfile | None:
    counts = np.bincount(generational_set.parents[1:], minlength=generational_set.total)
    profile = []
    for generation in range(generational_set.n):
        start, stop = generational_set.generation_offsets[generation:generation + 2]
        level = counts[start:stop]
        if level.min() != level.max():
            return None
        profile.append(int(level[0]))
    return BranchingProfile(counts=tuple(profile))


def last_common_generation(generational_set: GenerationalSet, leaf_a: int, leaf_b: int) -> int:
    i = generational_set.leaf_index(leaf_a)
    j = generational_set.leaf_index(leaf_b)
    ancestors = generational_set.ancestors
    # equality of ancestors is monotone: once they differ they differ deeper
    return int(np.count_nonzero(ancestors[:, i] == ancestors[:, j])) - 1


def last_common_generation_histogram(generational_set: GenerationalSet, leaf: int) -> list[int]:
    """counts[l] = number of leaves R whose last common generation with `leaf` is l."""
    i = generational_set.leaf_index(leaf)
    ancestors = generational_set.ancestors
    shared = np.count_nonzero(ancestors == ancestors[:, i:i + 1], axis=0) - 1
    return np.bincount(shared, minlength=generational_set.n + 1).tolist()


def validate_even_distribution(generational_set: GenerationalSet,
                               schedule: RepulsionSchedule,
                               C: float,
                               eps: float) -> EvenDistributionReport:
    if not generational_set.has_geometry:
        raise DomainException("Even distribution needs box geometry on the set")
    schedule.require_fits(generational_set)
    if C <= 0 or eps <= 0:
        raise DomainException(f"C and eps must be positive, got C={C}, eps={eps}")

    boxes = generational_set.boxes
    gens = generational_set.generations
    r = schedule.array[gens]

    # clause (a): C^-1 r_k <= diam(A)^-1 <= C r_k, measured as the worst log-ratio
    inverse_diam = 1.0 / (2.0 * boxes[:, 2] * math.sqrt(2.0))
    too_small = inverse_diam < r / C
    too_large = inverse_diam > C * r
    ratio = inverse_diam / r
    deviation = np.abs(np.log(ratio))
    worst = int(np.argmax(deviation))
    diameter_ok = not bool(np.any(too_small | too_large))
    worst_diameter = ClauseOffender(
        nodes=(worst,),
        generation=int(gens[worst]),
        value=float(inverse_diam[worst]),
        bound=float(r[worst] / C if ratio[worst] < 1 else C * r[worst]),
    )

    # clause (b): dist(A, B) >= eps / r_k for distinct siblings of generation k
    separation_ok = True
    worst_separation: ClauseOffender | None = None
    worst_slack = math.inf
    for node in generational_set.nodes:
        children = node.children
        for a in range(len(children)):
            for b in range(a + 1, len(children)):
                first = generational_set.nodes[children[a]]
                second = generational_set.nodes[children[b]]
                required = eps / schedule.values[first.gen]
                distance = first.box.distance(second.box)
                slack = distance / required
                if slack < worst_slack:
                    worst_slack = slack
                    worst_separation = ClauseOffender(nodes=(first.id, second.id), generation=first.gen,
                                                      value=distance, bound=required)
                if distance < required:
                    separation_ok = False

    report = EvenDistributionReport(
        passed=diameter_ok and separation_ok,
        diameter_clause_passed=diameter_ok,
        separation_clause_passed=separation_ok,
        C=C,
        eps=eps,
        worst_diameter=worst_diameter,
        worst_separation=worst_separation,
    )
    logger.debug(f"Even distribution check: diameter={diameter_ok}, separation={separation_ok}")
    return report
