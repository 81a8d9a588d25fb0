from .config import ExperimentConfig
from .experiment import run_experiment
from .report import Report, ReportRow, build_report, read_trials, report_csv, report_render, wilson_interval
from .steps import TrialRunner, TrialSampler, TrialTask, TrialWriter
from .trials import TrialRecord, place_pair, run_trial, sample_pair, trial_stream
