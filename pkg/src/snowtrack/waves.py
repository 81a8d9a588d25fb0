"""Waves, seams and the symmetric no-wave (SNOW) condition."""

from dataclasses import dataclass, field
from typing import Literal

from snowtrack.errors import CoordinateError
from snowtrack.geometry import (
    DTCoordinates,
    PantsDecomposition,
    arc_type_counts,
    boundary_values,
    check_admissible,
    sum_coordinates,
)


Direction = Literal["D_in_E", "E_in_D"]


@dataclass(frozen=True)
class WaveWitness:
    pants: int
    slot: int
    loops: int
    direction: Direction | None = None

    def to_dict(self) -> dict:
        return {"pants": self.pants, "slot": self.slot, "loops": self.loops, "direction": self.direction}


@dataclass(frozen=True)
class CdsPair:
    """
    Two complete decomposing systems on the same surface. `d_in_e` lists the curves of 𝒟 in the coordinates of the
    frame ℰ (the base decomposition), `e_in_d` lists the curves of ℰ in the coordinates of 𝒟, where curve j of 𝒟
    plays the role of base curve j.

    Args:
        frame: the base decomposition
        d_in_e: one coordinate vector per curve of 𝒟
        e_in_d: one coordinate vector per curve of ℰ
        word: provenance of 𝒟, a twist word with 𝒟 = word(ℰ)
        placement: twist word placing ℰ relative to the standard train tracks
    """

    frame: PantsDecomposition
    d_in_e: tuple[DTCoordinates, ...]
    e_in_d: tuple[DTCoordinates, ...]
    word: tuple = ()
    placement: tuple = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def swapped(self) -> "CdsPair":
        return CdsPair(self.frame, self.e_in_d, self.d_in_e, word=(), placement=(), metadata=self.metadata)

    def check_consistency(self):
        """
        Both expressions must be complete systems of admissible coordinates and agree on intersection numbers:
        the j-th coordinate of E_i in the 𝒟 frame counts the same points as the i-th coordinate of D_j.
        """
        n = self.frame.n_curves
        if len(self.d_in_e) != n or len(self.e_in_d) != n:
            raise CoordinateError(f"Both systems need {n} curves, got {len(self.d_in_e)} and {len(self.e_in_d)}")
        for coords in (*self.d_in_e, *self.e_in_d):
            check_admissible(coords, self.frame)
        for i in range(n):
            for j in range(n):
                if self.d_in_e[j].m[i] != self.e_in_d[i].m[j]:
                    raise CoordinateError(
                        f"Inconsistent pair: i(D_{j}, E_{i}) is {self.d_in_e[j].m[i]} in one frame and "
                        f"{self.e_in_d[i].m[j]} in the other"
                    )


def pants_has_wave(m1: int, m2: int, m3: int) -> int | None:
    """Index of the boundary violating the triangle inequality, if any (at most one can)."""
    counts = arc_type_counts(m1, m2, m3)
    for slot, loops in enumerate(counts.loops):
        if loops > 0:
            return slot
    return None


def curve_has_wave(curve: DTCoordinates, frame: PantsDecomposition) -> list[WaveWitness]:
    """One witness per pants of `frame` where the tight arc system of `curve` contains a wave."""
    check_admissible(curve, frame)
    witnesses = []
    for pants in range(frame.n_pants):
        values = boundary_values(curve, frame, pants)
        slot = pants_has_wave(*values)
        if slot is not None:
            witnesses.append(WaveWitness(pants, slot, arc_type_counts(*values).loops[slot]))
    return witnesses


def system_has_wave(system: tuple[DTCoordinates, ...], frame: PantsDecomposition) -> list[WaveWitness]:
    """Waves of a multicurve given by its disjoint components."""
    return curve_has_wave(sum_coordinates(system, frame.n_curves), frame)


def snow_check(pair: CdsPair) -> tuple[bool, WaveWitness | None]:
    """
    SNOW holds iff 𝒟 has no wave with respect to ℰ and ℰ has no wave with respect to 𝒟.

    Returns: (verdict, first witness found tagged with the failing direction)
    """
    pair.check_consistency()
    for direction, system in (("D_in_E", pair.d_in_e), ("E_in_D", pair.e_in_d)):
        witnesses = system_has_wave(system, pair.frame)
        if witnesses:
            w = witnesses[0]
            return False, WaveWitness(w.pants, w.slot, w.loops, direction)
    return True, None


def meridian_necessary_condition(curve: DTCoordinates, cds: PantsDecomposition) -> bool:
    """
    A curve bounding a disk in the handlebody of `cds` is one of its curves or has a wave with respect to it.
    This is only necessary: a True answer does not make the curve a meridian.
    """
    check_admissible(curve, cds)
    if not any(curve.m) and sum(curve.t) == 1:
        return True
    return bool(curve_has_wave(curve, cds))
