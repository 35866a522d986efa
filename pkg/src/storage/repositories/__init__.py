from .configurations import PointConfigurationRepository
from .measures import LeafMeasureRepository
from .reports import ReportRepository
from .sets import GenerationalSetRepository

__all__ = [
    "GenerationalSetRepository",
    "LeafMeasureRepository",
    "PointConfigurationRepository",
    "ReportRepository",
]
