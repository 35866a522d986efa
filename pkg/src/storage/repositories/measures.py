import csv
from pathlib import Path

from core.exceptions import ParseException
from models.filtration_model import GenerationalSet, LeafMeasure
from storage.connection import get_read_context, get_write_context
from .base import validate_document

MEASURE_HEADER = ["leaf_id", "mass"]


class LeafMeasureRepository:
    """Leaf masses as CSV rows `leaf_id,mass`, one per leaf in leaf order."""

    def __init__(self, path: Path | None):
        self.path = path

    def save(self, generational_set: GenerationalSet, mu: LeafMeasure) -> None:
        with get_write_context(self.path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(MEASURE_HEADER)
            for index, mass in enumerate(mu.masses.tolist()):
                writer.writerow([generational_set.leaf_offset + index, repr(mass)])

    def load(self, generational_set: GenerationalSet) -> LeafMeasure:
        masses: list[float] = []
        with get_read_context(self.path) as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != MEASURE_HEADER:
                raise ParseException(f"{self.path}: line 1: expected header {','.join(MEASURE_HEADER)}")
            for row in reader:
                expected = generational_set.leaf_offset + len(masses)
                try:
                    leaf_id, mass = int(row[0]), float(row[1])
                except (IndexError, ValueError) as exc:
                    raise ParseException(f"{self.path}: line {reader.line_num}: cannot read {row!r}",
                                         data={"line": reader.line_num}) from exc
                if leaf_id != expected:
                    raise ParseException(f"{self.path}: line {reader.line_num}: expected leaf {expected}, got {leaf_id}",
                                         data={"line": reader.line_num})
                masses.append(mass)
        mu = validate_document(LeafMeasure, {"masses": masses}, self.path)
        mu.require_fits(generational_set)
        return mu
