"""Pairs of transverse train tracks and their overlay.

Two tracks in transverse position meet in small rectangles, one per crossing of a branch of the first track with a
branch of the second. The overlay lists these crossings: the branch of each track, the position of the crossing
along it (counted from the first end of the branch) and the sign of the crossing. Together they describe the union
of both tracks as a ribbon graph whose regions are checked to be polygons with at least three corners.
"""

from collections import defaultdict
from dataclasses import dataclass, field

from snowtrack.errors import TrackError
from snowtrack.geometry import PantsDecomposition
from snowtrack.io import SCHEMA_VERSION
from snowtrack.tracks.standard import loop, seam, slot_tail, standard_track, tails
from snowtrack.tracks.track import SMALL_L, TrainTrack


# slots around a crossing, counter-clockwise: "E"/"W" continue the branch of the first track towards its second/first
# end, "dE"/"dW" do the same for the second track
_ROTATION = {1: ("E", "dE", "W", "dW"), -1: ("E", "dW", "W", "dE")}


@dataclass(frozen=True)
class Crossing:
    branch: int
    position: int
    dual_branch: int
    dual_position: int
    sign: int

    def to_dict(self) -> dict:
        return {"branch": self.branch, "position": self.position, "dual_branch": self.dual_branch,
                "dual_position": self.dual_position, "sign": self.sign}


@dataclass
class Overlay:
    """
    Args:
        crossings: every rectangle where a branch of the first track crosses a branch of the second
        overlaps: pairs of branches running along each other, which never happens in transverse position
    """

    crossings: list[Crossing] = field(default_factory=list)
    overlaps: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class TransversePair:
    track: TrainTrack
    dual: TrainTrack
    overlay: Overlay

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "track": self.track.to_dict(),
            "dual": self.dual.to_dict(),
            "crossings": [crossing.to_dict() for crossing in self.overlay.crossings],
            "overlaps": [list(pair) for pair in self.overlay.overlaps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransversePair":
        if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise TrackError(f"Unsupported overlay schema version {data['schema_version']}")
        overlay = Overlay(
            [Crossing(**crossing) for crossing in data["crossings"]],
            [tuple(pair) for pair in data.get("overlaps", [])],
        )
        return cls(TrainTrack.from_dict(data["track"]), TrainTrack.from_dict(data["dual"]), overlay)


def dual_pair(pd: PantsDecomposition) -> TransversePair:
    """
    The two standard models on `pd` in transverse position. Inside every pants each tail of the tight model crosses
    the previous seam of the dual one, and around every curve the first tight tail crosses the dual loop while the
    second dual tail crosses the tight loop.
    """
    crossings = []
    for pants in range(pd.n_pants):
        for k in range(3):
            crossings.append(Crossing(slot_tail(pd, pants, k), 0, seam(pd, pants, k - 1), 0, -1))
    for curve in pd.curves:
        tail_a, tail_b = tails(curve)
        _, e2 = loop(curve)
        crossings.append(Crossing(tail_a, 1, e2, 0, -1))
        crossings.append(Crossing(e2, 0, tail_b, 0, 1))
    return TransversePair(standard_track(pd, "tight"), standard_track(pd, "tight-dual"), Overlay(crossings))


def self_overlay(track: TrainTrack) -> TransversePair:
    """A track laid over itself: every branch runs along its own copy."""
    return TransversePair(track, track, Overlay(overlaps=[(b, b) for b in track.branches]))


def _branch_crossings(pair: TransversePair) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Crossing indices along every branch of either track, ordered by position."""
    along: tuple[dict, dict] = (defaultdict(list), defaultdict(list))
    for index, crossing in enumerate(pair.overlay.crossings):
        if crossing.branch not in pair.track.ends or crossing.dual_branch not in pair.dual.ends:
            raise TrackError(f"Crossing {crossing} names a branch missing from its track")
        if crossing.sign not in _ROTATION:
            raise TrackError(f"Crossing {crossing} has sign {crossing.sign}")
        along[0][crossing.branch].append((crossing.position, index))
        along[1][crossing.dual_branch].append((crossing.dual_position, index))
    out = []
    for side in along:
        ordered = {}
        for branch, items in side.items():
            items.sort()
            if [position for position, _ in items] != list(range(len(items))):
                raise TrackError(f"Crossing positions along branch {branch} are not 0..{len(items) - 1}")
            ordered[branch] = [index for _, index in items]
        out.append(ordered)
    return out[0], out[1]


def _union_graph(pair: TransversePair):
    """Rotation sizes per vertex and the partner of every half-edge of the union ribbon graph."""
    along, dual_along = _branch_crossings(pair)
    sizes = {}
    for tag, track in (("a", pair.track), ("b", pair.dual)):
        sizes.update({(tag, s): 3 for s in track.ports})
    crossings = pair.overlay.crossings
    sizes.update({("z", i): 4 for i in range(len(crossings))})
    partner = {}
    for tag, track, ordered, west, east in (("a", pair.track, along, "W", "E"),
                                            ("b", pair.dual, dual_along, "dW", "dE")):
        for branch, ((s0, p0), (s1, p1)) in track.ends.items():
            previous = ((tag, s0), p0)
            for index in ordered.get(branch, []):
                rotation = _ROTATION[crossings[index].sign]
                here = (("z", index), rotation.index(west))
                partner[previous], partner[here] = here, previous
                previous = (("z", index), rotation.index(east))
            last = ((tag, s1), p1)
            partner[previous], partner[last] = last, previous
    return sizes, partner


def overlay_regions(pair: TransversePair) -> list[int]:
    """Number of corners of every region of the union: cusps of either track and turns at crossings."""
    sizes, partner = _union_graph(pair)
    seen = set()
    regions = []
    for start in partner:
        if start in seen:
            continue
        corners, current = 0, start
        while current not in seen:
            seen.add(current)
            vertex, slot = current
            if vertex[0] == "z" or slot == SMALL_L:
                corners += 1
            current = partner[(vertex, (slot + 1) % sizes[vertex])]
        regions.append(corners)
    return regions


def check_transverse(pair: TransversePair) -> bool:
    """
    True when the two tracks meet in rectangles only and every region of their union is a polygon with at least
    three corners on a surface of the right genus.
    """
    if pair.overlay.overlaps:
        return False
    if pair.track.genus != pair.dual.genus:
        raise TrackError(f"Tracks live on surfaces of genus {pair.track.genus} and {pair.dual.genus}")
    regions = overlay_regions(pair)
    n_crossings = len(pair.overlay.crossings)
    vertices = pair.track.n_switches + pair.dual.n_switches + n_crossings
    edges = pair.track.n_branches + pair.dual.n_branches + 2 * n_crossings
    if vertices - edges + len(regions) != 2 - 2 * pair.track.genus:
        return False
    return all(corners >= 3 for corners in regions)
