from models.point_config import build_repulsion_matrix, capacity_lower_bound, solve_equilibrium
from .common import CommandContext, OutputFormat, format_value
from .sources import add_source_arguments, load_instances

CAPACITY_HEADER = ["instance_id", "n", "N", "r", "capacity_stat", "n_capacity_stat"]


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("capacity", parents=[common],
                                   help="Capacity lower-bound statistic 1^T A^-1 1 per configuration")
    add_source_arguments(parser, random_source=False)
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    output_format = context.output_format(OutputFormat.CSV)
    rows = []
    for instance_id, (n, config) in enumerate(load_instances(args)):
        statistic = capacity_lower_bound(solve_equilibrium(build_repulsion_matrix(config, threads=args.threads)))
        rows.append({
            "instance_id": instance_id,
            "n": n,
            "N": config.N,
            "r": config.r,
            "capacity_stat": statistic,
            "n_capacity_stat": None if n is None else n * statistic,
        })

    if output_format == OutputFormat.JSON:
        context.write_envelope(rows, message=f"{len(rows)} capacity statistics")
    else:
        context.write_table(CAPACITY_HEADER, [[format_value(row[column]) for column in CAPACITY_HEADER]
                                              for row in rows])
