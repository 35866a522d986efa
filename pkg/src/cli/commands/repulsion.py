from pathlib import Path

from models.repulsion import RepulsionEvaluation, repulsion_hierarchical, repulsion_naive
from .common import CommandContext, OutputFormat, load_set, resolve_measure, resolve_schedule

NAIVE_LEAF_LIMIT = 4 ** 6


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("repulsion", parents=[common], help="Evaluate the repulsion of a measure")
    parser.add_argument("--set", dest="set_path", type=Path, required=True, help="GenerationalSet JSON")
    parser.add_argument("--schedule", default="cantor", help="'cantor' or an explicit list such as 1,4,16")
    parser.add_argument("--measure", default="equidistributed", help="'equidistributed' or a leaf_id,mass CSV")
    parser.add_argument("--skip-naive", action="store_true", help="Only run the hierarchical evaluator")
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    context.output_format(OutputFormat.JSON, allowed=(OutputFormat.JSON,))
    generational_set = load_set(args.set_path)
    schedule = resolve_schedule(args.schedule, generational_set)
    mu = resolve_measure(args.measure, generational_set)

    hierarchical = repulsion_hierarchical(generational_set, schedule, mu)
    naive = None
    if not args.skip_naive and generational_set.leaf_count <= NAIVE_LEAF_LIMIT:
        naive = repulsion_naive(generational_set, schedule, mu, threads=args.threads)
    evaluation = RepulsionEvaluation(
        naive=naive,
        hierarchical=hierarchical,
        relative_gap=None if naive is None else abs(naive - hierarchical) / max(abs(naive), 1e-300),
        leaf_count=generational_set.leaf_count,
        n=generational_set.n,
    )
    context.write_envelope(evaluation, message="Repulsion evaluated")
