"""Tightness of a track, checked on a tie record.

The record follows a transverse system of closed curves as cyclic routes of items:

- ``["fiber", branch]``: the route crosses `branch` transversally, as a fiber
- ``["segment", switch, port, enters, exits, through_cusp]``: between two fibers the route runs through the
  complementary region around the cusp at the corner `(switch, port)`, entering from branch `enters` and leaving
  into `exits`. `through_cusp` marks the segment passing closest to the cusp.
- ``["run", branch]``: the route runs along `branch` instead of crossing it

A track is tight when every route is a union of fibers and segments, every segment enters and leaves its region
through distinct sides, and every cusp of every region is passed through by some segment.

Standard tracks record the system made of `FIBERS_PER_BRANCH` parallel fibers of every branch, joined inside every
triangle by the unique non-crossing matching of the fiber ends that never returns to the side it left.
"""

from dataclasses import dataclass
from typing import Union

from snowtrack.errors import TrackError
from snowtrack.geometry import PantsDecomposition
from snowtrack.tracks.track import End, SMALL_L, TrainTrack, trace_faces


FIBERS_PER_BRANCH = 2


@dataclass(frozen=True)
class Fiber:
    branch: int


@dataclass(frozen=True)
class Segment:
    switch: int
    port: int
    enters: int
    exits: int
    through_cusp: bool


@dataclass(frozen=True)
class Run:
    branch: int


RouteItem = Union[Fiber, Segment, Run]


def _parse_item(item: list) -> RouteItem:
    kind, *args = item
    if kind == "fiber":
        return Fiber(*args)
    if kind == "segment":
        return Segment(*args)
    if kind == "run":
        return Run(*args)
    raise TrackError(f"Unknown embedding item {item}")


@dataclass(frozen=True)
class EmbeddingRecord:
    routes: dict[int, tuple[RouteItem, ...]]

    @classmethod
    def of(cls, track: TrainTrack) -> "EmbeddingRecord":
        embedding = track.layout.get("embedding")
        if not embedding:
            raise TrackError("Track carries no embedding record")
        return cls({int(key): tuple(_parse_item(item) for item in route) for key, route in embedding.items()})


def _face_sides(face: list[End]) -> list[list[End]]:
    """Splits a face boundary into sides, each ending with the arrival at its cusp."""
    cusps = [i for i, (_, port) in enumerate(face) if port == SMALL_L]
    if not cusps:
        return [face]
    start = cusps[-1] + 1
    rotated = face[start:] + face[:start]
    sides, current = [], []
    for arrival in rotated:
        current.append(arrival)
        if arrival[1] == SMALL_L:
            sides.append(current)
            current = []
    return sides


def _cusp_sides(track: TrainTrack) -> dict[End, tuple[set[int], set[int]]]:
    """Per cusp corner, the branches on the side ending at it and on the side starting after it."""
    out = {}
    for face in trace_faces(track):
        if not any(port == SMALL_L for _, port in face):
            continue
        sides = _face_sides(face)
        for i, side in enumerate(sides):
            after = sides[(i + 1) % len(sides)]
            out[side[-1]] = ({track.branch_at(*a) for a in side}, {track.branch_at(*a) for a in after})
    return out


def tie_system(track: TrainTrack) -> dict[int, list]:
    """
    Routes of the transverse system made of `FIBERS_PER_BRANCH` fibers of every branch. Fails unless every
    complementary region is a triangle.
    """
    # fiber end (branch, copy, direction of the traversal) -> (partner end, segment item seen from this end)
    partner: dict[tuple, tuple] = {}
    for face in trace_faces(track):
        sides = _face_sides(face)
        if len(sides) != 3:
            raise TrackError(f"Region with corners {face} has {len(sides)} cusps, ties need triangles")
        points = []
        for side in sides:
            row = []
            for arrival in side:
                branch = track.branch_at(*arrival)
                direction = 0 if tuple(arrival) == tuple(track.ends[branch][1]) else 1
                copies = range(FIBERS_PER_BRANCH) if direction == 0 else reversed(range(FIBERS_PER_BRANCH))
                row += [(branch, copy, direction) for copy in copies]
            points.append(row)
        for i in range(3):
            before, after, opposite = points[i], points[(i + 1) % 3], points[(i + 2) % 3]
            n_segments, odd = divmod(len(before) + len(after) - len(opposite), 2)
            if odd or n_segments < 1:
                raise TrackError(f"Fibers can not pass every cusp of the region with corners {face}")
            switch, port = sides[i][-1]
            for t in range(n_segments):
                x, y = before[len(before) - 1 - t], after[t]
                partner[x] = (y, ["segment", switch, port, x[0], y[0], t == 0])
                partner[y] = (x, ["segment", switch, port, y[0], x[0], t == 0])
    routes, done = {}, set()
    for branch in track.branches:
        for copy in range(FIBERS_PER_BRANCH):
            if (branch, copy) in done:
                continue
            route, current = [], (branch, copy, 0)
            while (current[0], current[1]) not in done:
                done.add((current[0], current[1]))
                route.append(["fiber", current[0]])
                leave = (current[0], current[1], 1 - current[2])
                current, segment = partner[leave]
                route.append(segment)
            routes[len(routes)] = route
    return routes


def _route_is_chain(track: TrainTrack, route: tuple[RouteItem, ...]) -> bool:
    if not route or any(isinstance(item, Run) for item in route):
        return False
    for i, item in enumerate(route):
        after = route[(i + 1) % len(route)]
        if isinstance(item, Fiber):
            if item.branch not in track.ends or not isinstance(after, Segment) or after.enters != item.branch:
                return False
        elif not isinstance(after, Fiber) or after.branch != item.exits:
            return False
    return True


def _segment_crosses_sides(corners: dict[End, tuple[set[int], set[int]]], segment: Segment) -> bool:
    sides = corners.get((segment.switch, segment.port))
    if sides is None:
        return False
    before, after = sides
    # segments are unoriented, the route may pass the corner either way
    return (segment.enters in before and segment.exits in after) or \
        (segment.exits in before and segment.enters in after)


def is_tight(track: TrainTrack, pd: PantsDecomposition) -> bool:
    """Checks the three tightness conditions on the tie record of `track`, a track on the surface of `pd`."""
    if track.genus != pd.genus:
        raise TrackError(f"Track of genus {track.genus} checked against a genus {pd.genus} decomposition")
    record = EmbeddingRecord.of(track)
    if not all(_route_is_chain(track, route) for route in record.routes.values()):
        return False
    corners = _cusp_sides(track)
    segments = [item for route in record.routes.values() for item in route if isinstance(item, Segment)]
    if not all(_segment_crosses_sides(corners, segment) for segment in segments):
        return False
    passed = {(s.switch, s.port) for s in segments if s.through_cusp}
    return set(corners) <= passed
