from pathlib import Path

from core.exceptions import ParseException
from models.point_config import PointConfiguration
from .base import dump_json, load_json, validate_document


class PointConfigurationRepository:
    """Configuration files hold one { "r": f64, "points": [[x, y], ...] } object or a list of them."""

    def __init__(self, path: Path | None):
        self.path = path

    def save(self, config: PointConfiguration) -> None:
        dump_json(self.path, config.model_dump(mode="json"))

    def save_all(self, configs: list[PointConfiguration]) -> None:
        dump_json(self.path, [config.model_dump(mode="json") for config in configs])

    def load_all(self) -> list[PointConfiguration]:
        document = load_json(self.path)
        if isinstance(document, dict):
            return [validate_document(PointConfiguration, document, self.path)]
        if not isinstance(document, list):
            raise ParseException(f"{self.path}: expected a configuration object or a list of them")
        return [validate_document(PointConfiguration, item, self.path, where=f" [instance {index}]")
                for index, item in enumerate(document)]
