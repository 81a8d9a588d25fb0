from abc import ABC, abstractmethod
from itertools import chain
from typing import Any, Generator, Iterable

from snowtrack.utils._import_utils import check_required_dependencies
from snowtrack.utils.stats import Stats


TrialPipeline = Generator[Any, None, None] | Iterable[Any] | None


class PipelineStep(ABC):
    """Base block of an experiment pipeline: checks its optional dependencies and keeps per-step statistics.

    Args:
        name: Name of the step
        type: Type of the step, a high-level category such as "Sampler", "Runner" or "Writer"
    """

    name: str = None
    type: str = None

    def __new__(cls, *args, **kwargs):
        required_dependencies = chain.from_iterable(getattr(t, "_requires_dependencies", []) for t in cls.mro())
        if required_dependencies:
            check_required_dependencies(cls.__name__, required_dependencies)
        return super().__new__(cls)

    def __init__(self):
        super().__init__()
        self.stats = Stats(str(self))

    def stat_update(self, *labels, value: int = 1, unit: str = None):
        """
        Adds `value` to every metric in `labels`. `stat_update("snow")` counts one more SNOW trial,
        `stat_update("moves", value=120, unit="tower")` also records 120 as a sample of the mean, min and max of
        "moves", displayed per tower.
        """
        for label in labels:
            self.stats[label].update(value, unit)

    def track_time(self, unit: str = None):
        """Context manager adding the time spent inside it to the timing stats of the step, per `unit`."""
        if unit:
            self.stats.time_stats.unit = unit
        return self.stats.time_stats

    def __repr__(self):
        return f"{self.type}: {self.name}"

    @abstractmethod
    def run(self, data: TrialPipeline, rank: int = 0, world_size: int = 1) -> TrialPipeline:
        """
        Main entrypoint of a step: consumes what the previous step yields and yields its own items.

        Args:
          data: items of the previous step, None for the first step
          rank: the task this pipeline runs for, used to pick its share of the trials
          world_size: the number of tasks
        """
        if data:
            yield from data

    def __call__(self, data: TrialPipeline = None, rank: int = 0, world_size: int = 1) -> TrialPipeline:
        return self.run(data, rank, world_size)
