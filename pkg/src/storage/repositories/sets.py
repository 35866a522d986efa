from pathlib import Path

from models.filtration_model import GenerationalSet
from .base import dump_json, load_json, validate_document


class GenerationalSetRepository:
    """GenerationalSet files: { "n": int, "nodes": [ {id, gen, parent, children, box}, ... ] }."""

    def __init__(self, path: Path | None):
        self.path = path

    def save(self, generational_set: GenerationalSet) -> None:
        dump_json(self.path, generational_set.model_dump(mode="json"))

    def load(self) -> GenerationalSet:
        return validate_document(GenerationalSet, load_json(self.path), self.path)
