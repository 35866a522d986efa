import math
from functools import cached_property
from typing import Any, Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from core.exceptions import DomainException, GeometryException
from core.internal_codes import InternalCodesRepulsion

MEASURE_SUM_ATOL = 1e-12


class Box(BaseModel):
    """Axis-aligned closed square, described by its center and halfwidth."""
    model_config = ConfigDict(frozen=True)

    cx: float
    cy: float
    hw: float = Field(gt=0)

    @property
    def side(self) -> float:
        return 2.0 * self.hw

    @property
    def diam(self) -> float:
        return self.side * math.sqrt(2.0)

    def contains(self, other: "Box") -> bool:
        return (
            other.cx - other.hw >= self.cx - self.hw
            and other.cx + other.hw <= self.cx + self.hw
            and other.cy - other.hw >= self.cy - self.hw
            and other.cy + other.hw <= self.cy + self.hw
        )

    def overlaps(self, other: "Box") -> bool:
        # interiors intersect; boxes sharing only a boundary do not overlap
        reach = self.hw + other.hw
        return abs(self.cx - other.cx) < reach and abs(self.cy - other.cy) < reach

    def distance(self, other: "Box") -> float:
        reach = self.hw + other.hw
        gap_x = max(abs(self.cx - other.cx) - reach, 0.0)
        gap_y = max(abs(self.cy - other.cy) - reach, 0.0)
        return math.hypot(gap_x, gap_y)


UNIT_SQUARE = Box(cx=0.5, cy=0.5, hw=0.5)

# (parent box, child index, child count, child generation) -> child box
Placer = Callable[[Box, int, int, int], Box]


class Node(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    gen: int = Field(ge=0)
    parent: int | None = None
    children: tuple[int, ...] = ()
    box: Box | None = None


class GenerationalSet(BaseModel):
    """
    A set with the filtration property through generation n, stored as a tree.

    Nodes are numbered breadth-first by generation and then by parent order, so
    every generation, and the descendants of any node within a generation, form
    a contiguous id block. The leaves are the last block.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    nodes: tuple[Node, ...]

    @model_validator(mode="after")
    def _check_structure(self) -> "GenerationalSet":
        nodes = self.nodes
        total = len(nodes)
        if total == 0:
            raise DomainException("A generational set needs at least a root node")

        ids = np.fromiter((node.id for node in nodes), dtype=np.int64, count=total)
        if not np.array_equal(ids, np.arange(total)):
            raise DomainException("Node ids must be contiguous 0..total-1 in list order")

        gens = np.fromiter((node.gen for node in nodes), dtype=np.int64, count=total)
        if gens.max() > self.n:
            bad = int(np.argmax(gens > self.n))
            raise DomainException(f"Node {bad} has generation {int(gens[bad])} beyond n={self.n}",
                                  data={"node": bad})
        if gens[0] != 0 or np.count_nonzero(gens == 0) != 1:
            raise DomainException("Exactly one node, id 0, must have generation 0")
        if np.any(np.diff(gens) < 0):
            raise DomainException("Nodes must be ordered by generation (breadth-first layout)")

        parents = np.fromiter((-1 if node.parent is None else node.parent for node in nodes),
                              dtype=np.int64, count=total)
        if parents[0] != -1:
            raise DomainException("The root must not have a parent")
        rest = parents[1:]
        if np.any(rest < 0) or np.any(rest >= total):
            bad = int(np.argmax((rest < 0) | (rest >= total))) + 1
            raise DomainException(f"Node {bad} has a dangling parent id", data={"node": bad})
        if np.any(gens[rest] != gens[1:] - 1):
            bad = int(np.argmax(gens[rest] != gens[1:] - 1)) + 1
            raise DomainException(f"Node {bad} has a parent outside the previous generation",
                                  data={"node": bad, "parent": int(parents[bad])})
        if np.any(np.diff(rest) < 0):
            raise DomainException("Children of consecutive parents must be numbered consecutively")

        child_counts = np.bincount(rest, minlength=total)
        child_starts = np.searchsorted(rest, np.arange(total)) + 1
        for node in nodes:
            count = int(child_counts[node.id])
            start = int(child_starts[node.id])
            if node.children != tuple(range(start, start + count)):
                raise DomainException(f"Node {node.id} lists children {list(node.children)} but the nodes "
                                      f"naming it as parent are {list(range(start, start + count))}",
                                      data={"node": node.id})
        internal = gens < self.n
        if np.any(child_counts[internal] == 0):
            bad = int(np.flatnonzero(internal & (child_counts == 0))[0])
            raise DomainException(f"Node {bad} of generation {int(gens[bad])} has no children; "
                                  f"leaves must be exactly the generation-{self.n} nodes",
                                  data={"node": bad})
        if np.any(child_counts[~internal] != 0):
            raise DomainException(f"Generation-{self.n} nodes must be leaves")

        with_box = sum(node.box is not None for node in nodes)
        if with_box not in (0, total):
            raise DomainException("Geometry must be present on every node or on none")
        if with_box:
            self._check_geometry()
        return self

    def _check_geometry(self) -> None:
        boxes = self.boxes
        parents = self.parents
        if self.total == 1:
            return
        child = np.arange(1, self.total)
        parent = parents[child]
        lo_ok = boxes[child, :2] - boxes[child, 2:] >= boxes[parent, :2] - boxes[parent, 2:]
        hi_ok = boxes[child, :2] + boxes[child, 2:] <= boxes[parent, :2] + boxes[parent, 2:]
        contained = np.all(lo_ok & hi_ok, axis=1)
        if not np.all(contained):
            bad = int(child[np.argmin(contained)])
            raise GeometryException(
                f"Box of node {bad} is not contained in its parent {int(parents[bad])}",
                data={"pair": [int(parents[bad]), bad]},
            )

        # siblings are contiguous, so every sibling pair is at id distance < max child count
        widest = int(np.bincount(parents[1:]).max())
        for shift in range(1, widest):
            first, second = child[:-shift], child[shift:]
            siblings = parents[first] == parents[second]
            reach = boxes[first, 2] + boxes[second, 2]
            overlap = (siblings
                       & (np.abs(boxes[first, 0] - boxes[second, 0]) < reach)
                       & (np.abs(boxes[first, 1] - boxes[second, 1]) < reach))
            if np.any(overlap):
                at = int(np.argmax(overlap))
                pair = [int(first[at]), int(second[at])]
                raise GeometryException(f"Sibling boxes of nodes {pair[0]} and {pair[1]} overlap",
                                        data={"pair": pair})

    # Derived arrays, computed once; the model is immutable
    # ----------------------------------------------------------------

    @cached_property
    def parents(self) -> np.ndarray:
        parents = np.fromiter((-1 if node.parent is None else node.parent for node in self.nodes),
                              dtype=np.int64, count=len(self.nodes))
        parents.flags.writeable = False
        return parents

    @cached_property
    def generations(self) -> np.ndarray:
        gens = np.fromiter((node.gen for node in self.nodes), dtype=np.int64, count=len(self.nodes))
        gens.flags.writeable = False
        return gens

    @cached_property
    def generation_offsets(self) -> np.ndarray:
        """offsets[l] is the first id of generation l; offsets[n + 1] is the node count."""
        offsets = np.searchsorted(self.generations, np.arange(self.n + 2))
        offsets.flags.writeable = False
        return offsets

    @property
    def total(self) -> int:
        return len(self.nodes)

    @property
    def leaf_offset(self) -> int:
        return int(self.generation_offsets[self.n])

    @property
    def leaf_count(self) -> int:
        return self.total - self.leaf_offset

    def generation_size(self, generation: int) -> int:
        return int(self.generation_offsets[generation + 1] - self.generation_offsets[generation])

    @cached_property
    def ancestors(self) -> np.ndarray:
        """ancestors[l, i] is the generation-l ancestor id of leaf index i."""
        table = np.empty((self.n + 1, self.leaf_count), dtype=np.int64)
        table[self.n] = np.arange(self.leaf_offset, self.total)
        for generation in range(self.n, 0, -1):
            table[generation - 1] = self.parents[table[generation]]
        table.flags.writeable = False
        return table

    @cached_property
    def boxes(self) -> np.ndarray | None:
        """(total, 3) array of (cx, cy, hw), or None for combinatorial sets."""
        if self.nodes[0].box is None:
            return None
        boxes = np.array([(node.box.cx, node.box.cy, node.box.hw) for node in self.nodes], dtype=np.float64)
        boxes.flags.writeable = False
        return boxes

    @property
    def has_geometry(self) -> bool:
        return self.nodes[0].box is not None

    def is_leaf(self, node_id: int) -> bool:
        return self.leaf_offset <= node_id < self.total

    def leaf_index(self, node_id: int) -> int:
        if not isinstance(node_id, (int, np.integer)) or not self.is_leaf(int(node_id)):
            raise DomainException(f"Node {node_id} is not a leaf of this set", data={"node": node_id})
        return int(node_id) - self.leaf_offset

    def require_node(self, node_id: int) -> Node:
        if not isinstance(node_id, (int, np.integer)) or not 0 <= node_id < self.total:
            raise DomainException(f"Node {node_id} does not exist", data={"node": node_id})
        return self.nodes[int(node_id)]

    def leaf_mask_under(self, node_id: int) -> np.ndarray:
        node = self.require_node(node_id)
        return self.ancestors[node.gen] == node.id


class BranchingProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    counts: tuple[int, ...]

    @field_validator("counts")
    @classmethod
    def _positive_counts(cls, counts: tuple[int, ...]) -> tuple[int, ...]:
        if any(count < 1 for count in counts):
            raise ValueError("branching counts must be positive; shorten the profile to terminate")
        return counts

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def leaf_count(self) -> int:
        return math.prod(self.counts)

    @classmethod
    def parse(cls, text: str) -> "BranchingProfile":
        try:
            counts = tuple(int(part) for part in text.split(",") if part.strip())
        except ValueError as exc:
            raise DomainException(f"Cannot parse branching profile '{text}'") from exc
        return cls(counts=counts)


class RepulsionSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...]

    @field_validator("values")
    @classmethod
    def _strictly_increasing(cls, values: tuple[float, ...]) -> tuple[float, ...]:
        if not values:
            raise ValueError("a repulsion schedule needs at least r_0")
        if values[0] <= 0 or not all(math.isfinite(value) for value in values):
            raise ValueError("repulsion values must be positive and finite")
        if any(later <= earlier for earlier, later in zip(values, values[1:])):
            raise ValueError("repulsion values must be strictly increasing")
        return values

    @property
    def n(self) -> int:
        return len(self.values) - 1

    @cached_property
    def array(self) -> np.ndarray:
        values = np.asarray(self.values, dtype=np.float64)
        values.flags.writeable = False
        return values

    @cached_property
    def increments(self) -> np.ndarray:
        """(r_0, r_1 - r_0, ..., r_n - r_{n-1})."""
        increments = np.diff(self.array, prepend=0.0)
        increments.flags.writeable = False
        return increments

    def require_fits(self, generational_set: GenerationalSet) -> None:
        if self.n != generational_set.n:
            raise DomainException(
                f"Schedule has {len(self.values)} values but the set needs n+1 = {generational_set.n + 1}",
                error_code=InternalCodesRepulsion.SCHEDULE_ERROR,
            )


class LeafMeasure(BaseModel):
    """Probability masses indexed by leaf index (leaf id minus the leaf offset)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    masses: np.ndarray

    @field_validator("masses", mode="before")
    @classmethod
    def _as_probability_vector(cls, value: Any) -> np.ndarray:
        masses = np.array(value, dtype=np.float64, copy=True).reshape(-1)
        if masses.size == 0:
            raise ValueError("a leaf measure needs at least one leaf")
        if not np.all(np.isfinite(masses)) or np.any(masses < 0):
            raise ValueError("leaf masses must be finite and nonnegative")
        if abs(float(np.sum(masses)) - 1.0) > MEASURE_SUM_ATOL:
            raise ValueError(f"leaf masses must sum to 1 (got {float(np.sum(masses))!r})")
        masses.flags.writeable = False
        return masses

    @field_serializer("masses")
    def _serialize_masses(self, masses: np.ndarray) -> list[float]:
        return masses.tolist()

    def __len__(self) -> int:
        return int(self.masses.size)

    def require_fits(self, generational_set: GenerationalSet) -> None:
        if len(self) != generational_set.leaf_count:
            raise DomainException(
                f"Measure has {len(self)} masses but the set has {generational_set.leaf_count} leaves",
                error_code=InternalCodesRepulsion.MEASURE_ERROR,
            )


class ClauseOffender(BaseModel):
    nodes: tuple[int, ...]
    generation: int
    value: float
    bound: float


class EvenDistributionReport(BaseModel):
    passed: bool
    diameter_clause_passed: bool
    separation_clause_passed: bool
    C: float
    eps: float
    worst_diameter: ClauseOffender | None = None
    worst_separation: ClauseOffender | None = None
