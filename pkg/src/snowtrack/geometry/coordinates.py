from dataclasses import dataclass
from typing import Iterable

from snowtrack.errors import CoordinateError
from snowtrack.geometry.pants import PantsDecomposition


@dataclass(frozen=True)
class DTCoordinates:
    """
    Dehn-Thurston coordinates of a multicurve: per decomposition curve, the intersection number `m` and the twist `t`.
    When `m[i] == 0`, `t[i] >= 0` counts the parallel copies of curve `i`.
    """

    m: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != len(self.t):
            raise CoordinateError(f"m and t must have the same length ({len(self.m)} != {len(self.t)})")
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))

    def __add__(self, other: "DTCoordinates") -> "DTCoordinates":
        return DTCoordinates(
            tuple(a + b for a, b in zip(self.m, other.m)), tuple(a + b for a, b in zip(self.t, other.t))
        )

    @property
    def is_empty(self) -> bool:
        return not any(self.m) and not any(self.t)

    @classmethod
    def zero(cls, n_curves: int) -> "DTCoordinates":
        return cls((0,) * n_curves, (0,) * n_curves)

    @classmethod
    def pants_curve(cls, n_curves: int, curve: int, copies: int = 1) -> "DTCoordinates":
        return cls((0,) * n_curves, tuple(copies if i == curve else 0 for i in range(n_curves)))

    def to_dict(self, pd_ref: str | None = None) -> dict:
        return {"pd_ref": pd_ref, "m": list(self.m), "t": list(self.t)}

    @classmethod
    def from_dict(cls, data: dict) -> "DTCoordinates":
        return cls(tuple(data["m"]), tuple(data["t"]))


def sum_coordinates(parts: Iterable[DTCoordinates], n_curves: int) -> DTCoordinates:
    total = DTCoordinates.zero(n_curves)
    for part in parts:
        total = total + part
    return total


@dataclass(frozen=True)
class ArcTypeCounts:
    """
    Normal arcs of a multicurve inside one pants. `loops[i]` is x_ii (arcs with both ends on boundary i) and
    `seams[i]` is x_jk, the arcs joining the two boundaries other than i.
    """

    loops: tuple[int, int, int]
    seams: tuple[int, int, int]

    def count(self, i: int, j: int) -> int:
        """x_ij for boundaries i, j in {0, 1, 2}"""
        if i == j:
            return self.loops[i]
        return self.seams[3 - i - j]

    def endpoints(self, i: int) -> int:
        """m_i = 2 x_ii + x_ij + x_ik"""
        return 2 * self.loops[i] + sum(self.count(i, j) for j in range(3) if j != i)


def arc_type_counts(m1: int, m2: int, m3: int) -> ArcTypeCounts:
    """
    The tight arc system with m1, m2, m3 endpoints on the three boundaries of a pants. Same-boundary arcs only
    appear on a boundary violating the triangle inequality, and then no seam avoids it.
    """
    ms = (m1, m2, m3)
    if any(m < 0 for m in ms):
        raise CoordinateError(f"Intersection numbers must be non-negative, got {ms}")
    if sum(ms) % 2:
        raise CoordinateError(f"Odd number of arc endpoints {ms}")
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        if ms[i] > ms[j] + ms[k]:
            loops = [0, 0, 0]
            loops[i] = (ms[i] - ms[j] - ms[k]) // 2
            seams = [0, 0, 0]
            # x_ik lies opposite j, x_ij opposite k
            seams[j], seams[k] = ms[k], ms[j]
            return ArcTypeCounts(tuple(loops), tuple(seams))
    return ArcTypeCounts((0, 0, 0), tuple((ms[(i + 1) % 3] + ms[(i + 2) % 3] - ms[i]) // 2 for i in range(3)))


def boundary_values(coords: DTCoordinates, pd: PantsDecomposition, pants: int) -> tuple[int, int, int]:
    return tuple(coords.m[curve] for curve in pd.pants[pants])


def is_admissible_dt(coords: DTCoordinates, pd: PantsDecomposition) -> bool:
    """Parity of every pants and the non-negative twist convention on curves with m == 0."""
    if len(coords.m) != pd.n_curves:
        return False
    if any(m < 0 for m in coords.m):
        return False
    if any(m == 0 and t < 0 for m, t in zip(coords.m, coords.t)):
        return False
    return all(sum(boundary_values(coords, pd, p)) % 2 == 0 for p in range(pd.n_pants))


def check_admissible(coords: DTCoordinates, pd: PantsDecomposition):
    if not is_admissible_dt(coords, pd):
        raise CoordinateError(f"Inadmissible Dehn-Thurston coordinates {coords} on a genus {pd.genus} decomposition")
