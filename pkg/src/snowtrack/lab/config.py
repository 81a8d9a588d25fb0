from dataclasses import dataclass, field

from snowtrack.geometry import PantsDecomposition, standard_decomposition


@dataclass
class ExperimentConfig:
    """
    One genericity experiment: `trials` random pairs per word length, each checked for SNOW and, when it holds,
    put through the certification pipeline with a tower of height `n`.

    Args:
        genus: genus of the surface
        word_lengths: lengths of the random twist words, one row of the report per length
        trials: pairs sampled per word length
        n: height of the tower of the first system, the certified bound is n - 1
        seed: master seed, every trial draws from its own stream keyed by (seed, length) at its index
        split_budget_factor: candidate placements tried per branch of the standard track
        max_placement_length: longest random word drawn to place a pair on the standard tracks
        decomposition: name of the standard frame, "chain" works in every genus
        out: output folder of the trials, certificates and report
    """

    genus: int = 2
    word_lengths: tuple[int, ...] = (5,)
    trials: int = 10
    n: int = 3
    seed: int = 0
    split_budget_factor: int = 16
    max_placement_length: int = 4
    decomposition: str = "chain"
    out: str | None = field(default=None, compare=False)

    def __post_init__(self):
        self.word_lengths = tuple(int(length) for length in self.word_lengths)
        if self.genus < 2:
            raise ValueError(f"Experiments need genus >= 2, got {self.genus}")
        if not self.word_lengths or min(self.word_lengths) < 0:
            raise ValueError(f"Word lengths must be non-negative, got {self.word_lengths}")
        if len(set(self.word_lengths)) != len(self.word_lengths):
            raise ValueError(f"Repeated word length in {self.word_lengths}")
        if self.trials < 1:
            raise ValueError(f"At least one trial per word length is needed, got {self.trials}")
        if self.n < 1:
            raise ValueError(f"Tower height must be at least 1, got {self.n}")
        if self.split_budget_factor < 1 or self.max_placement_length < 0:
            raise ValueError("Budgets must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"Seeds are unsigned 64-bit integers, got {self.seed}")
        # raises GluingError on an unknown or unavailable frame
        self.pd

    @property
    def pd(self) -> PantsDecomposition:
        return standard_decomposition(self.genus, self.decomposition)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "word_lengths": list(self.word_lengths),
            "trials": self.trials,
            "n": self.n,
            "seed": self.seed,
            "split_budget_factor": self.split_budget_factor,
            "max_placement_length": self.max_placement_length,
            "decomposition": self.decomposition,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return cls(**{k: v for k, v in data.items() if k != "schema_version"})
