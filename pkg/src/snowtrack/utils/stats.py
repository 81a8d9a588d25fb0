import itertools
import json
import math
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Callable

import humanize


INDENT = " " * 4


@dataclass
class MetricStats:
    """
    Running summary (count, total, mean, spread, range) of one metric, mergeable across tasks
    """

    total: float = 0
    n: int = 0
    mean: float = 0.0
    min: float = float("inf")
    max: float = float("-inf")
    _running_variance: float = 0.0
    unit: str = "trial"

    def update(self, x: float, unit: str = None):
        if unit:
            self.unit = unit
        self.total += x
        self.n += 1
        self.min = min(self.min, x)
        self.max = max(self.max, x)
        # Welford
        delta = x - self.mean
        self.mean += delta / self.n
        if self.n > 1:
            self._running_variance += delta * (x - self.mean)

    @property
    def variance(self):
        return self._running_variance / (self.n - 1) if self.n > 1 else 0.0

    @property
    def standard_deviation(self):
        return math.sqrt(self.variance)

    def __add__(self, other):
        if not isinstance(other, MetricStats):
            other = MetricStats.from_dict(other)
        n = self.n + other.n
        mean, running_variance = 0.0, 0.0
        if n > 0:
            mean = (self.n * self.mean + other.n * other.mean) / n
            delta = self.mean - other.mean
            running_variance = self._running_variance + other._running_variance + delta * delta * self.n * other.n / n
        return type(self)(
            total=self.total + other.total,
            n=n,
            mean=mean,
            min=min(self.min, other.min),
            max=max(self.max, other.max),
            _running_variance=running_variance,
            unit=self.unit if self.unit != "trial" else other.unit,
        )

    def to_dict(self):
        if self.n <= 1 or self.min == self.max:
            return {"total": self.total, "n": self.n, "unit": self.unit}
        return {
            "total": self.total,
            "n": self.n,
            "mean": self.mean,
            "std_dev": self.standard_deviation,
            "min": self.min,
            "max": self.max,
            "unit": self.unit,
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            return cls(total=data, n=1, mean=data, min=data, max=data)
        n, total = data.get("n", 1), data["total"]
        mean = data.get("mean", total / n if n else 0.0)
        return cls(
            total=total,
            n=n,
            mean=mean,
            min=data.get("min", mean),
            max=data.get("max", mean),
            _running_variance=data.get("std_dev", 0.0) ** 2 * max(n - 1, 0),
            unit=data.get("unit", "trial"),
        )

    def __repr__(self):
        if self.n > 1 and self.min != self.max:
            spread = f"{self.mean:.2f}±{self.standard_deviation:.0f}/{self.unit}"
            return f"{self.total} [min={self.min}, max={self.max}, {spread}]"
        return str(self.total)


class MetricStatsDict(defaultdict):
    def __init__(self, *_, init=None, **kwargs):
        super().__init__(MetricStats, **kwargs)
        if init:
            self.update(init)

    def __add__(self, other):
        result = MetricStatsDict()
        for key, item in itertools.chain(self.items(), other.items()):
            result[key] += item
        return result

    def __repr__(self):
        return ", ".join(f"{key}: {stats}" for key, stats in sorted(self.items()))

    def to_dict(self):
        return {key: stats.to_dict() for key, stats in sorted(self.items())}

    @classmethod
    def from_dict(cls, data):
        return MetricStatsDict(init={key: MetricStats.from_dict(value) for key, value in data.items()})


@dataclass
class TimingStats(MetricStats):
    """Wall-clock timing of a step. Used as a context manager around each timed block."""

    unit: str = "s"

    def __enter__(self):
        self._entry_time = time.perf_counter()

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.update(time.perf_counter() - self._entry_time)

    def get_repr(self, total_time: float = 0.0):
        share = f" ({self.total / total_time:.2%})" if total_time > 0 else ""
        return f"{humanize.precisedelta(self.total, minimum_unit='milliseconds')}{share}"


class Stats:
    """
    Counters and timings of one pipeline step

    Args:
        name: The name of the step
    """

    def __init__(self, name: str):
        self.name = name
        self.time_stats = TimingStats()
        self.stats = MetricStatsDict()

    def __getitem__(self, item: str) -> MetricStats:
        return self.stats[item]

    def __add__(self, stat):
        if self.name != stat.name:
            raise ValueError(f"Can not merge stats from different steps {self.name} != {stat.name}")
        result = Stats(self.name)
        result.time_stats = self.time_stats + stat.time_stats
        result.stats = self.stats + stat.stats
        return result

    def __repr__(self, total_time: float = 0.0):
        lines = [self.name]
        if self.time_stats.total > 0:
            lines.append(f"Runtime: {self.time_stats.get_repr(total_time)}")
        if self.stats:
            lines.append(f"Stats: {{{self.stats}}}")
        return f"\n{INDENT}".join(lines)

    def to_dict(self):
        return {"name": self.name, "time_stats": self.time_stats.to_dict(), "stats": self.stats.to_dict()}

    @classmethod
    def from_dict(cls, data):
        stats = cls(data["name"])
        timing = MetricStats.from_dict(data["time_stats"])
        stats.time_stats = TimingStats(**{**timing.__dict__, "unit": "s"})
        stats.stats = MetricStatsDict.from_dict(data["stats"])
        return stats


class PipelineStats:
    """Stats of every step of a pipeline, in order. Summing two PipelineStats merges them step by step."""

    def __init__(self, stats: list[Stats | Callable] = None):
        self.stats: list[Stats] = stats if stats else []
        if self.stats and not isinstance(self.stats[0], Stats):
            self.stats = [step.stats for step in self.stats if hasattr(step, "stats")]

    def __add__(self, pipestat):
        if not self.stats:
            return PipelineStats(pipestat.stats)
        return PipelineStats([x + y for x, y in zip(self.stats, pipestat.stats)])

    @property
    def total_time(self):
        return sum(stat.time_stats.total for stat in self.stats)

    def get_repr(self, text=None):
        total_time = self.total_time
        header = f"\n\n{'📊' * 3} Stats{': ' + text if text else ''} {'📊' * 3}\n\n"
        header += f"Total Runtime: {humanize.precisedelta(total_time, minimum_unit='milliseconds')}\n\n"
        return header + "\n".join(stat.__repr__(total_time) for stat in self.stats)

    def __repr__(self):
        return self.get_repr()

    def to_json(self):
        return json.dumps([stat.to_dict() for stat in self.stats], indent=4)

    @classmethod
    def from_json(cls, data):
        return PipelineStats([Stats.from_dict(stat) for stat in data])

    def save_to_disk(self, file: IO):
        file.write(self.to_json())
