import csv
import hashlib
import io
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version

from snowtrack.certify import replay_certificate
from snowtrack.io import SCHEMA_VERSION, DataFolderLike, dump_document, get_datafolder, read_document
from snowtrack.lab.config import ExperimentConfig
from snowtrack.lab.trials import TrialRecord
from snowtrack.mcg import GENERATOR_SET_VERSION
from snowtrack.utils.logging import logger


SAMPLING_SCHEME = "reduced-twist-word/v1"
CSV_COLUMNS = (
    "genus",
    "L",
    "trials",
    "snow_count",
    "certified_count",
    "fraction",
    "ci_low",
    "ci_high",
    "budget_exceeded_count",
)
# two-sided 95%
Z_95 = 1.959963984540054


def code_version() -> str:
    try:
        return version("snowtrack")
    except PackageNotFoundError:
        return "unknown"


def wilson_interval(successes: int, total: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval of a binomial proportion, (0, 1) when nothing was observed"""
    if total == 0:
        return 0.0, 1.0
    p = successes / total
    denominator = 1 + z * z / total
    center = (p + z * z / (2 * total)) / denominator
    half = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denominator
    # the bounds touch 0 and 1 exactly at the extreme proportions
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == total else min(1.0, center + half)
    return low, high


@dataclass
class ReportRow:
    genus: int
    L: int
    trials: int = 0
    snow_count: int = 0
    certified_count: int = 0
    fraction: float = 0.0
    ci_low: float = 0.0
    ci_high: float = 1.0
    budget_exceeded_count: int = 0
    uncertified_count: int = 0
    calm_pairs: int = 0
    calm_pairs_snow: int = 0


@dataclass
class Report:
    """
    Certified fraction among SNOW pairs, per word length. Uncertified and out-of-budget trials are reported on their
    own and never count against the fraction.
    """

    rows: list[ReportRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    timestamp: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "rows": [asdict(row) for row in self.rows],
            "metadata": self.metadata,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls([ReportRow(**row) for row in data["rows"]], dict(data["metadata"]), data.get("timestamp"))

    def digest(self) -> str:
        """Hash of the report without its timestamp: reruns of the same configuration give the same digest."""
        return hashlib.sha256(dump_document({**self.to_dict(), "timestamp": None})).hexdigest()


def read_trials(folder: DataFolderLike) -> list[TrialRecord]:
    """Every record written by the tasks of an experiment, in (length, index) order whatever the scheduling."""
    import orjson

    folder = get_datafolder(folder)
    records = []
    for path in folder.list_files("trials", glob_pattern="*.jsonl"):
        with folder.open(path, "rb") as f:
            records.extend(TrialRecord.from_dict(orjson.loads(line)) for line in f if line.strip())
    return sorted(records, key=lambda record: (record.length, record.index))


def verify_certificates(folder: DataFolderLike, records: list[TrialRecord]) -> int:
    """Replays the saved certificate of every certified record, demoting the ones that fail. Returns the failures."""
    folder = get_datafolder(folder)
    failures = 0
    for record in records:
        if record.outcome != "certified":
            continue
        if record.certificate is None or not replay_certificate(read_document(folder.open(record.certificate, "rb"))):
            logger.warning(f"Certificate of trial L={record.length} #{record.index} does not replay")
            record.outcome, record.bound, record.failed_hypothesis = "uncertified", None, "replay"
            failures += 1
    return failures


def build_report(config: ExperimentConfig, records: list[TrialRecord]) -> Report:
    rows = {length: ReportRow(config.genus, length) for length in config.word_lengths}
    for record in records:
        row = rows[record.length]
        row.trials += 1
        row.snow_count += record.snow
        row.certified_count += record.certified
        row.budget_exceeded_count += record.outcome == "budget_exceeded"
        row.uncertified_count += record.outcome == "uncertified"
        if record.calm_pair_snow is not None:
            row.calm_pairs += 1
            row.calm_pairs_snow += record.calm_pair_snow
    for row in rows.values():
        row.fraction = row.certified_count / row.snow_count if row.snow_count else 0.0
        row.ci_low, row.ci_high = wilson_interval(row.certified_count, row.snow_count)
    metadata = {
        "label": "exploratory",
        "sampling_scheme": SAMPLING_SCHEME,
        "generator_set_version": GENERATOR_SET_VERSION,
        "code_version": code_version(),
        "config": config.to_dict(),
        "certified_bound": config.n - 1,
    }
    return Report(list(rows.values()), metadata, datetime.now(timezone.utc).isoformat())


def report_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        values = asdict(row)
        writer.writerow([f"{values[c]:.6f}" if isinstance(values[c], float) else values[c] for c in CSV_COLUMNS])
    return buffer.getvalue()


def report_render(report: Report, output_folder: DataFolderLike | None = None) -> tuple[str, dict]:
    """The CSV table and JSON document of `report`, also saved as report.csv and report.json in `output_folder`"""
    table, document = report_csv(report), report.to_dict()
    if output_folder is not None:
        folder = get_datafolder(output_folder)
        with folder.open("report.csv", "wt") as f:
            f.write(table)
        with folder.open("report.json", "wb") as f:
            f.write(dump_document(document))
    return table, document
