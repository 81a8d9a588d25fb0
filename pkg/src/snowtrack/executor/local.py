from copy import deepcopy
from functools import partial
from typing import Callable

import multiprocess

from snowtrack.executor.base import PipelineExecutor
from snowtrack.io import DataFolderLike
from snowtrack.pipeline.base import PipelineStep
from snowtrack.utils.logging import logger
from snowtrack.utils.stats import PipelineStats


class LocalPipelineExecutor(PipelineExecutor):
    """Runs the tasks of an experiment on this machine, in a pool of worker processes.

    Args:
        pipeline: PipelineSteps and/or functions called as (data, rank, world_size)
        tasks: number of tasks the trials are split over (default: 1)
        workers: tasks run at the same time, -1 for one worker per task
        logging_dir: folder (any fsspec path) for logs, stats and completion markers
        skip_completed: do not rerun tasks completed by a previous run
        start_method: how the worker pool starts its processes (default: "forkserver")
    """

    def __init__(
        self,
        pipeline: list[PipelineStep | Callable],
        tasks: int = 1,
        workers: int = -1,
        logging_dir: DataFolderLike = None,
        skip_completed: bool = True,
        start_method: str = "forkserver",
    ):
        super().__init__(pipeline, logging_dir, skip_completed)
        if tasks < 1:
            raise ValueError(f"At least one task is needed, got {tasks=}")
        self.tasks = tasks
        self.workers = workers if workers != -1 else tasks
        self.start_method = start_method

    def _launch_run_for_rank(self, rank: int, ranks_q, completed=None, completed_lock=None) -> PipelineStats:
        """Runs one task with a local rank borrowed from `ranks_q` and counts it as completed."""
        local_rank = ranks_q.get()
        try:
            return self._run_for_rank(rank, local_rank)
        finally:
            if completed and completed_lock:
                with completed_lock:
                    completed.value += 1
                    logger.info(f"{completed.value}/{self.world_size} tasks completed.")
            ranks_q.put(local_rank)

    def run(self) -> PipelineStats | None:
        """
        Runs every incomplete task, in a multiprocess pool unless there is a single worker, and saves the merged
        stats to stats.json.
        """
        if all(map(self.is_rank_completed, range(self.tasks))):
            logger.info(f"Not doing anything as all {self.tasks} tasks have already been completed.")
            return None

        self.save_executor_as_json()
        mg = multiprocess.Manager()
        ranks_q = mg.Queue()
        for i in range(self.workers):
            ranks_q.put(i)

        ranks_to_run = self.get_incomplete_ranks()
        if (skipped := self.tasks - len(ranks_to_run)) > 0:
            logger.info(f"Skipping {skipped} already completed tasks")

        if self.workers == 1:
            pipeline = self.pipeline
            stats = []
            for rank in ranks_to_run:
                # fresh steps, so that stats do not leak from one task into the next
                self.pipeline = deepcopy(pipeline)
                stats.append(self._launch_run_for_rank(rank, ranks_q))
            self.pipeline = pipeline
        else:
            completed_counter = mg.Value("i", skipped)
            completed_lock = mg.Lock()
            ctx = multiprocess.get_context(self.start_method)
            with ctx.Pool(self.workers) as pool:
                stats = list(
                    pool.imap_unordered(
                        partial(
                            self._launch_run_for_rank,
                            ranks_q=ranks_q,
                            completed=completed_counter,
                            completed_lock=completed_lock,
                        ),
                        ranks_to_run,
                    )
                )
        stats = sum(stats, start=PipelineStats())
        with self.logging_dir.open("stats.json", "wt") as statsfile:
            stats.save_to_disk(statsfile)
        logger.success(stats.get_repr(f"All {self.tasks} tasks"))
        return stats

    @property
    def world_size(self) -> int:
        return self.tasks
