from pathlib import Path

from loguru import logger

from models.point_config import conjecture_sweep
from storage.repositories import PointConfigurationRepository
from .common import CommandContext, OutputFormat, format_value
from .sources import add_source_arguments, load_instances

SWEEP_HEADER = ["instance_id", "N", "r", "lambda", "capacity_stat", "min_weight", "nonneg",
                "rowsum_min", "rowsum_max", "residual", "error"]


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("conjecture", parents=[common],
                                   help="Check that A^-1 1 is nonnegative over a sweep of configurations")
    add_source_arguments(parser)
    parser.add_argument("--summary", type=Path, default=None,
                        help="Summary JSON for csv output (default <out>.summary.json)")
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    output_format = context.output_format(OutputFormat.CSV)
    instances = [instance for _, instance in load_instances(args)]
    report = conjecture_sweep(instances, threads=args.threads)
    summary = {"instances": report.instances, "flags": report.flags, "failures": report.failures}
    context.manifest.summary = summary
    message = f"{report.instances} instances, {report.flags} flags, {report.failures} failures"

    if output_format == OutputFormat.JSON:
        context.write_envelope(report, message=message)
    else:
        rows = []
        for row in report.rows:
            values = row.model_dump(by_alias=True)
            rows.append([format_value(values[column]) for column in SWEEP_HEADER])
        context.write_table(SWEEP_HEADER, rows)
        summary_path = args.summary
        if context.out is not None:
            summary_path = summary_path or context.out.with_name(f"{context.out.name}.summary.json")
            if report.flagged_instances:
                flagged_path = context.out.with_name(f"{context.out.name}.flagged.json")
                PointConfigurationRepository(flagged_path).save_all(report.flagged_instances)
                context.bare_outputs.append(flagged_path)
        if summary_path is not None:
            context.write_envelope(summary, message=message, path=summary_path)

    logger.info(f"Conjecture sweep: {message}")
