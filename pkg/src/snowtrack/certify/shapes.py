"""Shapes of the pants cut out of a train track neighbourhood by a carried decomposing system.

A system carried with positive weights lays `w(b)` parallel strands along every branch `b`. Between the strands of
the two small branches of a switch sits its cusp, and the strip starting at the cusp follows the track until it ends
at another cusp: a connector. Each complementary pants of the system holds two triangles of the track joined by three
connectors. The pants is theta-shaped when all three connectors run between the two triangles and eyeglass-shaped when
only one of them does.

Strands are counted on every branch end from the left-hand side of an observer at the switch looking along the
branch, so that on the large end of a switch the strands of the ``l`` branch come first and the cusp sits at gap
``w(l)``.
"""

from dataclasses import dataclass
from typing import Literal, Mapping

from snowtrack.errors import TrackError
from snowtrack.geometry import DTCoordinates, PantsDecomposition, sum_coordinates
from snowtrack.mcg import TwistWord, image_of_frame, word_from_json, word_to_json
from snowtrack.tracks import TrainTrack, check_switch_conditions, complementary_regions, is_carried
from snowtrack.tracks.track import L, SMALL_L, SMALL_R


Shape = Literal["theta", "eyeglass"]


@dataclass(frozen=True)
class CarriedSystem:
    """
    A complete decomposing system carried by a track.

    Args:
        pd: the frame its curves are written in
        word: the system is the image of the frame curves under this twist word, None for systems built on the track
        curves: the curves of the system in the frame
        weights: the weights of their union on the track
    """

    pd: PantsDecomposition
    word: TwistWord | None
    curves: tuple[DTCoordinates, ...]
    weights: dict[int, int]

    @property
    def union(self) -> DTCoordinates:
        return sum_coordinates(self.curves, self.pd.n_curves)

    @classmethod
    def from_word(cls, pd: PantsDecomposition, word: TwistWord, track: TrainTrack) -> "CarriedSystem | None":
        """The image of the frame under `word` with its weights on `track`, or None when it is not carried."""
        curves = image_of_frame(pd, word)
        weights = is_carried(sum_coordinates(curves, pd.n_curves), track)
        if weights is None:
            return None
        return cls(pd, tuple(word), curves, weights)

    def to_dict(self) -> dict:
        return {
            "word": None if self.word is None else word_to_json(self.word),
            "curves": [curve.to_dict() for curve in self.curves],
            "weights": [[b, w] for b, w in sorted(self.weights.items())],
        }

    @classmethod
    def from_dict(cls, data: dict, pd: PantsDecomposition) -> "CarriedSystem":
        return cls(
            pd,
            None if data.get("word") is None else word_from_json(data["word"]),
            tuple(DTCoordinates.from_dict(curve) for curve in data["curves"]),
            {int(b): int(w) for b, w in data["weights"]},
        )


@dataclass(frozen=True)
class Connector:
    """A cusp strip: from the cusp of `start` to the cusp of `end`, along `branches`"""

    start: int
    end: int
    branches: tuple[int, ...]


@dataclass(frozen=True)
class PantsShape:
    pants: int
    shape: Shape
    triangles: tuple[int, int]
    connectors: tuple[Connector, ...]


def trace_connector(track: TrainTrack, weights: Mapping[int, int], switch: int) -> Connector:
    """Follows the strip leaving the cusp of `switch` until it reaches another cusp."""
    s, port = switch, L
    gap = weights[track.ports[switch][SMALL_L]]
    branches = []
    for _ in range(4 * sum(weights.values()) + 4):
        branch = track.ports[s][port]
        branches.append(branch)
        s, port = track.other_end(branch, (s, port))
        gap = weights[branch] - gap
        large, left, _ = (weights[b] for b in track.ports[s])
        if port == SMALL_L:
            port, gap = L, left - gap
        elif port == SMALL_R:
            port, gap = L, large - gap
        elif gap == left:
            return Connector(switch, s, tuple(branches))
        elif gap < left:
            port, gap = SMALL_L, left - gap
        else:
            port, gap = SMALL_R, large - gap
    raise TrackError(f"The strip leaving the cusp of switch {switch} never reaches a cusp")


def trace_connectors(track: TrainTrack, weights: Mapping[int, int]) -> list[Connector]:
    seen: set[int] = set()
    connectors = []
    for switch in track.switches:
        if switch in seen:
            continue
        connector = trace_connector(track, weights, switch)
        seen.update({connector.start, connector.end})
        connectors.append(connector)
    return connectors


def shapes_from_connectors(triangle_of: Mapping[int, int], connectors: list[Connector]) -> list[PantsShape]:
    """
    Groups triangles into pants through the connectors joining their cusps and names the shape of every pants.

    Args:
        triangle_of: the triangle holding the cusp of every switch
        connectors: every connector, once
    """
    parent = {t: t for t in set(triangle_of.values())}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for connector in connectors:
        parent[find(triangle_of[connector.start])] = find(triangle_of[connector.end])
    groups: dict[int, list[int]] = {}
    for t in sorted(parent):
        groups.setdefault(find(t), []).append(t)

    shapes = []
    for index, triangles in enumerate(sorted(groups.values())):
        inside = tuple(c for c in connectors if triangle_of[c.start] in triangles)
        if len(triangles) != 2 or len(inside) != 3:
            raise TrackError(f"A complementary piece holds {len(triangles)} triangles and {len(inside)} connectors, "
                             f"the system is not complete")
        across = sum(1 for c in inside if triangle_of[c.start] != triangle_of[c.end])
        if across not in (1, 3):
            raise TrackError(f"Pants with triangles {triangles} has {across} connectors between them")
        shapes.append(PantsShape(index, "theta" if across == 3 else "eyeglass", tuple(triangles), inside))
    return shapes


def classify_pants_shapes(system: CarriedSystem | Mapping[int, int], track: TrainTrack) -> list[PantsShape]:
    """The shape of every complementary pants of a system carried by the maximal track `track`."""
    weights = system.weights if isinstance(system, CarriedSystem) else system
    if not check_switch_conditions(track, weights):
        raise TrackError("The system is not carried by the track")
    if any(weights[b] <= 0 for b in track.ends):
        raise TrackError("Shapes are only traced for systems with positive weight on every branch")
    triangle_of = {}
    for index, region in enumerate(complementary_regions(track)):
        if not region.is_triangle:
            raise TrackError(f"Complementary region {index} is not a triangle, the track is not maximal")
        for switch, port in region.corners:
            if port == SMALL_L:
                triangle_of[switch] = index
    shapes = shapes_from_connectors(triangle_of, trace_connectors(track, weights))
    if len(shapes) != 2 * track.genus - 2:
        raise TrackError(f"{len(shapes)} complementary pants found, expected {2 * track.genus - 2}")
    return shapes


def is_calm(system: CarriedSystem | Mapping[int, int], track: TrainTrack) -> bool:
    return all(shape.shape == "theta" for shape in classify_pants_shapes(system, track))
