from loguru import logger

from models.filtration_model import BranchingProfile, build_cantor, build_random_filtration, build_socialist
from storage.repositories import GenerationalSetRepository
from .common import CommandContext, OutputFormat, usage_error

KINDS = ("cantor", "socialist", "random")


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("generate", parents=[common], help="Write a generational set as JSON")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--n", type=int, default=None, help="Last generation (cantor, random)")
    parser.add_argument("--profile", default=None, help="Children per generation, e.g. 2,3 (socialist)")
    parser.add_argument("--max-children", type=int, default=4, help="Upper bound on children per node (random)")
    parser.set_defaults(handler=handle, parser=parser)


def handle(context: CommandContext) -> None:
    args = context.args
    context.output_format(OutputFormat.JSON, allowed=(OutputFormat.JSON,))
    if args.kind == "cantor":
        if args.n is None:
            usage_error(args, "generate cantor requires --n")
        generational_set = build_cantor(args.n)
    elif args.kind == "socialist":
        if args.profile is None:
            usage_error(args, "generate socialist requires --profile")
        generational_set = build_socialist(BranchingProfile.parse(args.profile))
    else:
        if args.n is None:
            usage_error(args, "generate random requires --n")
        generational_set = build_random_filtration(args.n, args.max_children, args.seed)

    GenerationalSetRepository(context.out).save(generational_set)
    if context.out is not None:
        context.bare_outputs.append(context.out)
    logger.info(f"Generated {args.kind} set with {generational_set.total} nodes")
