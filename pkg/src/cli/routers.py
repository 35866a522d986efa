import argparse
import time
from pathlib import Path
from typing import Sequence

from loguru import logger

from core.settings import settings
from shared.base_contextvars import ctx_run_manifest
from shared.utils_dates import get_app_current_time
from shared.middlewares import CatcherExceptions, CatcherExceptionsPydantic
from storage.repositories import ReportRepository
from .commands import COMMANDS
from .commands.common import CommandContext, OutputFormat
from .schema import RunManifest

# arguments that describe how a run is executed rather than what it computes
RUNTIME_ARGUMENTS = {"command", "handler", "parser", "out", "threads", "format", "seed"}


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Master seed for every random stream (default 0)")
    common.add_argument("--threads", type=positive_int, default=settings.COMPUTE.THREADS,
                        help="Worker threads; results do not depend on it")
    common.add_argument("--out", type=Path, default=None, help="Output file (default stdout)")
    common.add_argument("--format", choices=[OutputFormat.JSON, OutputFormat.CSV], default=None,
                        help="Output writer where both are meaningful")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.PROJECT.CODE,
        description=settings.PROJECT.DESCRIPTION,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.PROJECT.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_arguments()
    for command in COMMANDS:
        command.register(subparsers, common)
    return parser


def _manifest(args: argparse.Namespace) -> RunManifest:
    parameters = {
        key: (str(value) if isinstance(value, Path) else value)
        for key, value in sorted(vars(args).items())
        if key not in RUNTIME_ARGUMENTS
    }
    return RunManifest(
        command=args.command,
        parameters=parameters,
        seed=args.seed,
        tool_version=settings.PROJECT.VERSION,
        started_at=get_app_current_time(),
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, execute one subcommand and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    context = CommandContext(args=args, manifest=_manifest(args))
    token = ctx_run_manifest.set(context.manifest)
    started = time.perf_counter()

    def execute() -> None:
        args.handler(context)
        context.manifest.wall_time = time.perf_counter() - started
        for path in context.bare_outputs:
            ReportRepository(path).save_manifest(context.manifest)

    catcher = CatcherExceptions()
    CatcherExceptionsPydantic(catcher)
    try:
        try:
            exit_code = catcher.dispatch(execute)
        except SystemExit as exc:
            exit_code = int(exc.code or 0)
    finally:
        ctx_run_manifest.reset(token)

    if exit_code == 0:
        logger.success(f"{args.command} finished in {context.manifest.wall_time:.3f}s")
    return exit_code
