import argparse
import re
from dataclasses import dataclass, field
from pathlib import Path

from loguru import logger

from cli.schema import RunManifest
from core.exceptions import DomainException
from models.filtration_model import (
    GenerationalSet,
    LeafMeasure,
    RepulsionSchedule,
    cantor_schedule,
    equidistributed_measure,
    explicit_schedule,
)
from shared.base_reports import create_report
from storage.repositories import GenerationalSetRepository, LeafMeasureRepository, ReportRepository

RANGE_PATTERN = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


class OutputFormat:
    JSON = "json"
    CSV = "csv"


@dataclass
class CommandContext:
    """Per-run state shared between the router and a subcommand."""
    args: argparse.Namespace
    manifest: RunManifest
    # files written without an embedded manifest; the router adds sidecars
    bare_outputs: list[Path] = field(default_factory=list)

    @property
    def out(self) -> Path | None:
        return self.args.out

    def output_format(self, default: str, allowed: tuple[str, ...] = (OutputFormat.JSON, OutputFormat.CSV)) -> str:
        chosen = self.args.format or default
        if chosen not in allowed:
            raise DomainException(f"'{self.manifest.command}' does not write {chosen} output")
        return chosen

    def write_envelope(self, data, message: str, path: Path | None = None) -> None:
        ReportRepository(path if path is not None else self.out).save_envelope(create_report(data=data, message=message))

    def write_table(self, header: list[str], rows: list[list], path: Path | None = None) -> None:
        target = path if path is not None else self.out
        ReportRepository(target).save_table(header, rows)
        if target is not None:
            self.bare_outputs.append(Path(target))


def usage_error(args: argparse.Namespace, message: str) -> None:
    args.parser.error(message)


def load_set(path: Path) -> GenerationalSet:
    generational_set = GenerationalSetRepository(path).load()
    logger.debug(f"Loaded set with n={generational_set.n} and {generational_set.leaf_count} leaves from {path}")
    return generational_set


def resolve_schedule(text: str, generational_set: GenerationalSet) -> RepulsionSchedule:
    """`cantor` gives r_l = 4^l; anything else is an explicit comma-separated list."""
    if text.strip().lower() == "cantor":
        return cantor_schedule(generational_set.n)
    schedule = explicit_schedule(text)
    schedule.require_fits(generational_set)
    return schedule


def resolve_measure(text: str, generational_set: GenerationalSet) -> LeafMeasure:
    if text == "equidistributed":
        return equidistributed_measure(generational_set)
    return LeafMeasureRepository(Path(text)).load(generational_set)


def parse_range(text: str) -> range:
    """Inclusive `a..b`; b < a gives an empty range."""
    match = RANGE_PATTERN.match(text)
    if match is None:
        raise DomainException(f"Cannot parse range '{text}', expected a..b")
    start, stop = int(match.group(1)), int(match.group(2))
    return range(start, stop + 1)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
