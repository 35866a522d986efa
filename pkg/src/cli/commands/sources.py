"""Point-configuration sources shared by the matrix, conjecture and capacity subcommands."""
from pathlib import Path

import numpy as np

from core.exceptions import DomainException
from models.point_config import PointConfiguration, RandomInstance, cantor_configuration, check_sampler_fits
from storage.repositories import PointConfigurationRepository
from .common import parse_range


def add_source_arguments(parser, random_source: bool = True) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--cantor", default=None, help="Cantor generations, a..b or a single n")
    source.add_argument("--config", type=Path, default=None, help="Configuration JSON (object or list)")
    if random_source:
        source.add_argument("--random", action="store_true", help="Seeded random separated configurations")
        parser.add_argument("--count", type=int, default=1, help="Random instances")
        parser.add_argument("--n", dest="points", type=int, default=100, help="Points per random instance")
        parser.add_argument("--r", type=float, default=0.01, help="Radius of random instances")
        parser.add_argument("--box", type=float, default=1.0, help="Side of the sampling box")


def cantor_generations(text: str) -> range:
    if text.strip().isdigit():
        n = int(text)
        return range(n, n + 1)
    return parse_range(text)


def random_instances(count: int, points: int, r: float, box: float, seed: int) -> list[RandomInstance]:
    """Instance i uses the i-th child of the master seed sequence; sampling happens in the sweep."""
    if count < 0:
        raise DomainException(f"--count must be nonnegative, got {count}")
    check_sampler_fits(points, r, box)
    children = np.random.SeedSequence(seed).spawn(count)
    return [RandomInstance(N=points, r=r, box=box, seed=int(child.generate_state(1)[0])) for child in children]


def load_instances(args) -> list[tuple[int | None, PointConfiguration | RandomInstance]]:
    """(Cantor generation or None, configuration) pairs in source order."""
    if args.cantor is not None:
        return [(n, cantor_configuration(n)) for n in cantor_generations(args.cantor)]
    if args.config is not None:
        return [(None, config) for config in PointConfigurationRepository(args.config).load_all()]
    return [(None, config) for config in random_instances(args.count, args.points, args.r, args.box, args.seed)]
