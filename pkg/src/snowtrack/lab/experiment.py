from snowtrack.executor import LocalPipelineExecutor
from snowtrack.io import get_datafolder
from snowtrack.lab.config import ExperimentConfig
from snowtrack.lab.report import Report, build_report, read_trials, report_render, verify_certificates
from snowtrack.lab.steps import TrialRunner, TrialSampler, TrialWriter
from snowtrack.utils.logging import logger


def run_experiment(
    config: ExperimentConfig,
    tasks: int = 1,
    workers: int = 1,
    logging_dir: str | None = None,
    skip_completed: bool = True,
    start_method: str = "forkserver",
) -> Report:
    """
    Runs every trial of `config` over `tasks` tasks, replays the saved certificates and writes report.csv and
    report.json next to the trials.

    Args:
        config: the experiment, `config.out` is required
        tasks: number of tasks the trials are dealt over
        workers: tasks running at the same time
        logging_dir: defaults to logs/ inside the output folder
        skip_completed: keep the trials of tasks completed by a previous run
        start_method: start method of the worker pool
    """
    if not config.out:
        raise ValueError("The experiment needs an output folder")
    output_folder = get_datafolder(config.out)
    executor = LocalPipelineExecutor(
        pipeline=[TrialSampler(config), TrialRunner(config, output_folder), TrialWriter(output_folder)],
        tasks=tasks,
        workers=workers,
        logging_dir=logging_dir or f"{config.out.rstrip('/')}/logs",
        skip_completed=skip_completed,
        start_method=start_method,
    )
    executor.run()
    records = read_trials(output_folder)
    if failures := verify_certificates(output_folder, records):
        logger.warning(f"{failures} certificates did not replay and are not counted")
    report = build_report(config, records)
    report_render(report, output_folder)
    for row in report.rows:
        logger.success(
            f"L={row.L}: {row.snow_count}/{row.trials} SNOW, {row.certified_count} certified "
            f"({row.fraction:.1%}, 95% CI {row.ci_low:.2f}-{row.ci_high:.2f}), "
            f"{row.budget_exceeded_count} out of budget"
        )
    return report
