from dataclasses import dataclass
from typing import Iterator

from snowtrack.io import DataFolderLike, dump_document, get_datafolder
from snowtrack.lab.config import ExperimentConfig
from snowtrack.lab.trials import TrialRecord, run_trial, sample_pair
from snowtrack.pipeline.base import PipelineStep, TrialPipeline
from snowtrack.utils.logging import logger


@dataclass(frozen=True)
class TrialTask:
    length: int
    index: int


class TrialSampler(PipelineStep):
    """Yields the trials of one task: every (length, index) pair of the experiment, dealt round-robin over the tasks.

    Args:
        config: the experiment
    """

    name = "🎲 Trial sampler"
    type = "Sampler"

    def __init__(self, config: ExperimentConfig):
        super().__init__()
        self.config = config

    def run(self, data: TrialPipeline = None, rank: int = 0, world_size: int = 1) -> Iterator[TrialTask]:
        if data:
            yield from data
        position = 0
        for length in self.config.word_lengths:
            for index in range(self.config.trials):
                if position % world_size == rank:
                    self.stat_update("trials")
                    yield TrialTask(length, index)
                position += 1


class TrialRunner(PipelineStep):
    """Samples the pair of every trial, runs it and saves the certificates it produces.

    Args:
        config: the experiment
        output_folder: certificates go to certificates/L{length}_{index}.json inside it
    """

    name = "🧮 Trial runner"
    type = "Runner"

    def __init__(self, config: ExperimentConfig, output_folder: DataFolderLike):
        super().__init__()
        self.config = config
        self.output_folder = get_datafolder(output_folder)

    def run(self, data: TrialPipeline, rank: int = 0, world_size: int = 1) -> Iterator[TrialRecord]:
        for task in data:
            with self.track_time("trial"):
                pair = sample_pair(self.config, task.length, task.index)
                record, certificate = run_trial(pair, self.config, task.length, task.index)
            self.stat_update(record.outcome)
            if record.snow:
                self.stat_update("snow")
            if record.calm_pair_snow is not None:
                self.stat_update("calm_pairs")
                if record.calm_pair_snow:
                    self.stat_update("calm_pairs_snow")
            if certificate is not None:
                record.certificate = f"certificates/L{task.length}_{task.index:06d}.json"
                with self.output_folder.open(record.certificate, "wb") as f:
                    f.write(dump_document(certificate.to_dict()))
            logger.debug(f"Trial L={task.length} #{task.index}: {record.outcome}")
            yield record


class TrialWriter(PipelineStep):
    """Writes the records of a task as JSON lines to trials/{rank:05d}.jsonl.

    Args:
        output_folder: a str, tuple or DataFolder where the trials are saved
    """

    name = "🐿 Trial writer"
    type = "Writer"
    _requires_dependencies = ["orjson"]

    def __init__(self, output_folder: DataFolderLike):
        super().__init__()
        self.output_folder = get_datafolder(output_folder)

    def run(self, data: TrialPipeline, rank: int = 0, world_size: int = 1) -> TrialPipeline:
        import orjson

        with self.output_folder.open(f"trials/{rank:05d}.jsonl", "wb") as f:
            for record in data:
                f.write(orjson.dumps(record.to_dict(), option=orjson.OPT_APPEND_NEWLINE))
                self.stat_update("written")
                yield record
