from models.point_config import (
    build_repulsion_matrix,
    capacity_lower_bound,
    realize_instance,
    row_sum_report,
    solve_equilibrium,
)
from .common import CommandContext, OutputFormat
from .sources import add_source_arguments, load_instances


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("matrix", parents=[common], help="Repulsion matrix summary per configuration")
    add_source_arguments(parser)
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    context.output_format(OutputFormat.JSON, allowed=(OutputFormat.JSON,))
    summaries = []
    for instance_id, (n, instance) in enumerate(load_instances(args)):
        config = realize_instance(instance)
        matrix = build_repulsion_matrix(config, threads=args.threads)
        solution = solve_equilibrium(matrix)
        summaries.append({
            "instance_id": instance_id,
            "n": n,
            "N": matrix.N,
            "r": config.r,
            "diagonal": matrix.diagonal,
            "dense": matrix.is_dense,
            "lambda": solution.lambda_,
            "capacity_stat": capacity_lower_bound(solution),
            "nonneg": solution.nonneg,
            "min_weight": solution.min_weight,
            "residual": solution.residual,
            "method": solution.method,
            "row_sums": row_sum_report(matrix, solution),
        })
    context.write_envelope(summaries, message=f"{len(summaries)} repulsion matrices summarized")
