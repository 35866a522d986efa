from pathlib import Path

from models.filtration_model import is_socialist
from models.minimizer import minimize_repulsion, verify_equidistribution, verify_nondegeneracy
from storage.repositories import LeafMeasureRepository
from .common import CommandContext, OutputFormat, load_set, resolve_schedule

NONDEGENERACY_TOL = 1e-12


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("minimize", parents=[common], help="Minimize the repulsion over leaf measures")
    parser.add_argument("--set", dest="set_path", type=Path, required=True, help="GenerationalSet JSON")
    parser.add_argument("--schedule", default="cantor", help="'cantor' or an explicit list such as 1,4,16")
    parser.add_argument("--tol", type=float, default=1e-6, help="Equidistribution tolerance")
    parser.add_argument("--summary", type=Path, default=None,
                        help="Summary JSON for csv output (default <out>.summary.json)")
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    output_format = context.output_format(OutputFormat.CSV)
    generational_set = load_set(args.set_path)
    schedule = resolve_schedule(args.schedule, generational_set)

    result = minimize_repulsion(generational_set, schedule)
    summary = {
        "min_value": result.min_value,
        "kkt_residual": result.kkt_residual,
        "iterations": result.iterations,
        "active_bound_count": result.active_bound_count,
        "stage": result.stage,
        "nondegeneracy": verify_nondegeneracy(result, NONDEGENERACY_TOL),
        "equidistribution": (verify_equidistribution(result, generational_set, args.tol)
                             if is_socialist(generational_set) is not None else None),
    }

    if output_format == OutputFormat.JSON:
        context.write_envelope({**summary, "minimizer": result.minimizer}, message="Repulsion minimized")
        return

    LeafMeasureRepository(context.out).save(generational_set, result.minimizer)
    if context.out is None:
        summary_path = args.summary
    else:
        context.bare_outputs.append(context.out)
        summary_path = args.summary or context.out.with_name(f"{context.out.name}.summary.json")
    if summary_path is not None:
        context.write_envelope(summary, message="Repulsion minimized", path=summary_path)
