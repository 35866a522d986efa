from pathlib import Path

from models.riesz_energy import energy_lower_bound_via_repulsion, energy_mc
from .common import CommandContext, OutputFormat, load_set, resolve_measure, resolve_schedule


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("energy", parents=[common], help="Monte-Carlo Riesz 1-energy of a measure")
    parser.add_argument("--set", dest="set_path", type=Path, required=True, help="GenerationalSet JSON with boxes")
    parser.add_argument("--measure", default="equidistributed", help="'equidistributed' or a leaf_id,mass CSV")
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--schedule", default=None, help="Adds the repulsion lower bound for this schedule")
    parser.add_argument("--C", dest="C", type=float, default=2.0, help="Even-distribution diameter constant")
    parser.add_argument("--eps", type=float, default=1.0, help="Even-distribution separation constant")
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    context.output_format(OutputFormat.JSON, allowed=(OutputFormat.JSON,))
    generational_set = load_set(args.set_path)
    mu = resolve_measure(args.measure, generational_set)

    estimate = energy_mc(generational_set, mu, args.samples, args.seed, threads=args.threads)
    data = {"estimate": estimate, "lower_bound": None}
    if args.schedule is not None:
        schedule = resolve_schedule(args.schedule, generational_set)
        data["lower_bound"] = energy_lower_bound_via_repulsion(generational_set, schedule, mu, C=args.C, eps=args.eps)
    context.write_envelope(data, message="Riesz 1-energy estimated")
