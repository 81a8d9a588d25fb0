"""Sampling and running single trials of a genericity experiment.

A trial draws a random reduced twist word w of the given length, giving the pair (w(E), E) for the frame E, and
checks SNOW. A pair whose word fixes the frame is at distance 0 and is recorded as trivial. Any other SNOW pair is
placed on the two standard tracks: a second random word and twists along the frame move both systems at once
(distance is invariant under this placement) until the second system sits calm in the dual model and the first one
calm in the tight model. Towers of height n and 2 grown along both systems then feed the Heegaard distance
certificate, which is only counted once it replays.
"""

import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from loguru import logger

from snowtrack.certify import (
    CarriedSystem,
    DistanceCertificate,
    cert_heegaard_distance_lb,
    common_twists,
    gregarious_guide,
    is_calm,
    overlay_pair,
    random_word,
    replay_certificate,
    retwist,
)
from snowtrack.errors import BudgetExceeded, CertificateError, GuideError, TrackError
from snowtrack.mcg import frame_curves, image_of_frame, pair_frames, word_from_json, word_to_json
from snowtrack.lab.config import ExperimentConfig
from snowtrack.tracks import TransversePair, build_tower, dual_pair
from snowtrack.waves import CdsPair, snow_check


Outcome = Literal["no_snow", "trivial", "certified", "uncertified", "budget_exceeded"]

SAMPLING = 0
PLACEMENT = 1


def trial_stream(seed: int, length: int, index: int, purpose: int = SAMPLING) -> np.random.Generator:
    """The random stream of one trial: keyed by the master seed and the word length, one counter block per index."""
    return np.random.Generator(np.random.Philox(key=[seed, length], counter=[0, index, purpose, 0]))


@dataclass
class TrialRecord:
    """
    Args:
        length: length of the sampled word
        index: trial index among the trials of this length
        word: the sampled word, the pair is (word(E), E)
        snow: SNOW verdict of the pair
        outcome: what the certification pipeline ended with
        bound: certified lower bound on the distance of the splitting, only for replayed certificates
        certificate: path of the certificate in the output folder
        failed_hypothesis: first hypothesis refused by the certificate
        placement: word placing the pair on the standard tracks
        calm_pair_snow: SNOW verdict of the placed calm pair, recomputed from the systems themselves
        timings: seconds spent in each phase
    """

    length: int
    index: int
    word: tuple
    snow: bool
    outcome: Outcome
    bound: int | None = None
    certificate: str | None = None
    failed_hypothesis: str | None = None
    placement: tuple = ()
    calm_pair_snow: bool | None = None
    timings: dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def certified(self) -> bool:
        return self.outcome in ("certified", "trivial")

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "index": self.index,
            "word": word_to_json(self.word),
            "snow": self.snow,
            "outcome": self.outcome,
            "bound": self.bound,
            "certificate": self.certificate,
            "failed_hypothesis": self.failed_hypothesis,
            "placement": word_to_json(self.placement),
            "calm_pair_snow": self.calm_pair_snow,
            "timings": self.timings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrialRecord":
        return cls(
            length=data["length"],
            index=data["index"],
            word=word_from_json(data["word"]),
            snow=data["snow"],
            outcome=data["outcome"],
            bound=data.get("bound"),
            certificate=data.get("certificate"),
            failed_hypothesis=data.get("failed_hypothesis"),
            placement=word_from_json(data.get("placement", [])),
            calm_pair_snow=data.get("calm_pair_snow"),
            timings=data.get("timings", {}),
        )


def sample_pair(config: ExperimentConfig, length: int, index: int) -> CdsPair:
    """The pair of trial `index` among the trials with words of `length`, the same on every run."""
    pd = config.pd
    return pair_frames(pd, random_word(pd, trial_stream(config.seed, length, index), length))


def place_pair(pair: CdsPair, models: TransversePair, rng: np.random.Generator,
               budget: int, max_length: int = 4) -> tuple[CarriedSystem, CarriedSystem]:
    """
    Moves the pair (D, E) = (w(F), F) by a common mapping class so that E is calm on the dual model and D is calm on
    the tight one. A random word moves both systems, then common twists along the frame push D into the tight chart
    and E into the dual one. Raises BudgetExceeded after `budget` candidate placements.
    """
    pd = pair.frame
    for _ in range(budget):
        candidate = random_word(pd, rng, int(rng.integers(0, max_length + 1)))
        d_word = pair.word + candidate
        d = CarriedSystem(pd, d_word, image_of_frame(pd, d_word), {})
        e = CarriedSystem(pd, candidate, image_of_frame(pd, candidate), {})
        powers = common_twists(d.union, e.union)
        if powers is None:
            continue
        d, e = retwist(d, models.track, powers), retwist(e, models.dual, powers)
        if d is None or e is None or not is_calm(d, models.track) or not is_calm(e, models.dual):
            continue
        return d, e
    raise BudgetExceeded(f"No calm placement of the pair among {budget} candidates")


def run_trial(pair: CdsPair, config: ExperimentConfig, length: int = 0, index: int = 0) -> tuple[
        TrialRecord, DistanceCertificate | None]:
    """
    Checks SNOW on `pair` and, when it holds, tries to certify that the splitting it defines has distance at least
    n - 1. Running out of budget and refused hypotheses are outcomes of the record, never errors.

    Returns: the record and the replayed certificate, if any
    """
    timings = {}
    start = time.perf_counter()
    snow, _ = snow_check(pair)
    timings["snow"] = time.perf_counter() - start
    record = TrialRecord(length, index, pair.word, snow, "no_snow", timings=timings)
    if not snow:
        return record, None
    if config.n == 1 or tuple(pair.d_in_e) == frame_curves(pair.frame):
        # a bound of 0 holds for every pair, and is the distance of a pair fixing the frame
        record.outcome, record.bound = "trivial", 0
        return record, None

    models = dual_pair(pair.frame)
    rng = trial_stream(config.seed, length, index, PLACEMENT)
    start = time.perf_counter()
    try:
        d, e = place_pair(pair, models, rng, config.split_budget_factor * models.track.n_branches,
                          config.max_placement_length)
    except BudgetExceeded as err:
        logger.debug(f"Trial {length}/{index}: {err}")
        record.outcome = "budget_exceeded"
        return record, None
    finally:
        timings["placement"] = time.perf_counter() - start
    record.placement = e.word
    record.calm_pair_snow = snow_check(overlay_pair(d, e))[0]

    start = time.perf_counter()
    try:
        d_tower = build_tower(models.track, gregarious_guide(d.weights, models.track, rng), config.n)
        e_tower = build_tower(models.dual, gregarious_guide(e.weights, models.dual, rng), 2)
        certificate = cert_heegaard_distance_lb(d, d_tower, e, e_tower, models)
    except CertificateError as err:
        record.outcome, record.failed_hypothesis = "uncertified", err.hypothesis
        return record, None
    except (GuideError, TrackError) as err:
        logger.warning(f"Trial {length}/{index}: tower construction failed: {err}")
        record.outcome, record.failed_hypothesis = "uncertified", "towers"
        return record, None
    finally:
        timings["certificate"] = time.perf_counter() - start
    if not replay_certificate(certificate):
        record.outcome, record.failed_hypothesis = "uncertified", "replay"
        return record, None
    record.outcome, record.bound = "certified", certificate.bound
    return record, certificate
