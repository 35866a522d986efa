import csv
from pathlib import Path
from typing import Any, Iterable

from shared.base_reports import EnvelopeReport
from storage.connection import get_write_context
from .base import dump_json


def manifest_path(path: Path) -> Path:
    return path.with_name(f"{path.name}.manifest.json")


class ReportRepository:
    """JSON envelopes, CSV tables and their manifest sidecars."""

    def __init__(self, path: Path | None):
        self.path = path

    def save_envelope(self, envelope: EnvelopeReport) -> None:
        dump_json(self.path, envelope.model_dump(mode="json"))

    def save_table(self, header: list[str], rows: Iterable[list[Any]]) -> None:
        with get_write_context(self.path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    def save_manifest(self, manifest: Any) -> None:
        """Sidecar next to the output; skipped for stdout."""
        if self.path is None:
            return
        dump_json(manifest_path(Path(self.path)), manifest.model_dump(mode="json"))
