"""Combinatorial train tracks.

A switch has three ports in counter-clockwise order: the large port ``L`` and the two small ports ``l`` and ``r``,
with the cusp between ``l`` and ``r``. A branch joins two ports. The complementary regions are traced on the ribbon
graph: arriving at a port, the boundary of a region leaves through the next port counter-clockwise, so every arrival
at ``l`` turns around the cusp.

Branches of a track carry a column: the train path, in some reference track, onto which the branch is carried. A
standard track is its own reference; splitting a track updates the columns so that the split track stays carried by
the track it was derived from.
"""

import copy
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from snowtrack.errors import TrackError
from snowtrack.io import SCHEMA_VERSION


L, SMALL_L, SMALL_R = 0, 1, 2
PORT_NAMES = ("L", "l", "r")

End = tuple[int, int]
Weights = dict[int, int]
Column = dict[int, int]


def ccw_next(port: int) -> int:
    return (port + 1) % 3


@dataclass(frozen=True)
class ComplementaryRegion:
    """
    A complementary region traced on the ribbon graph.

    Args:
        cusps: number of cusps met along the boundary
        genus: handles of the surface inside this region (0 for a disk)
        corners: the arrivals `(switch, port)` along the boundary, in order
    """

    cusps: int
    genus: int
    corners: tuple[End, ...]

    @property
    def is_triangle(self) -> bool:
        return self.cusps == 3 and self.genus == 0


@dataclass
class TrainTrack:
    """
    A trivalent train track on a closed surface of genus `genus`.

    Args:
        genus: genus of the surface holding the track
        ports: per switch, the branches at its ports `[L, l, r]`
        ends: per branch, its two ends `[(switch, port), (switch, port)]`
        columns: per branch, the carrying column into the reference track
        cusps: per switch, the identity of the cusp it holds. Splits move cusps between switches.
        circles: closed branches without switches (only central splits create them), with their columns
        model: name of the standard model when the track is one
        layout: named roles of switches and branches of a standard model
        pd: the pants decomposition a standard model is built on
        parent: the track this one was derived from
        moves: the moves turning `parent` into this track
    """

    genus: int
    ports: dict[int, list[int]]
    ends: dict[int, list[End]]
    columns: dict[int, Column] = field(default_factory=dict)
    cusps: dict[int, int] = field(default_factory=dict)
    circles: dict[int, Column] = field(default_factory=dict)
    model: str | None = None
    layout: dict = field(default_factory=dict)
    pd: object | None = None
    parent: "TrainTrack | None" = field(default=None, repr=False)
    moves: tuple = ()

    def __post_init__(self):
        if not self.columns:
            self.columns = {b: {b: 1} for b in self.ends}
        if not self.cusps:
            self.cusps = {s: s for s in self.ports}
        self.validate()

    @property
    def switches(self) -> list[int]:
        return sorted(self.ports)

    @property
    def branches(self) -> list[int]:
        return sorted(self.ends)

    @property
    def n_switches(self) -> int:
        return len(self.ports)

    @property
    def n_branches(self) -> int:
        return len(self.ends)

    @property
    def base(self) -> "TrainTrack":
        track = self
        while track.parent is not None:
            track = track.parent
        return track

    def branch_at(self, switch: int, port: int) -> int:
        return self.ports[switch][port]

    def other_end(self, branch: int, end: End) -> End:
        first, second = self.ends[branch]
        if end == first:
            return second
        if end == second:
            return first
        raise TrackError(f"{end} is not an end of branch {branch}")

    def is_large(self, branch: int) -> bool:
        """Both ends of `branch` are large ports"""
        return all(port == L for _, port in self.ends[branch])

    def is_small(self, branch: int) -> bool:
        return all(port != L for _, port in self.ends[branch])

    def validate(self):
        """Every port holds one branch end and every branch end sits at the port holding it."""
        seen: set[End] = set()
        for branch, ends in self.ends.items():
            if len(ends) != 2:
                raise TrackError(f"Branch {branch} has {len(ends)} ends")
            for switch, port in ends:
                if switch not in self.ports or port not in (L, SMALL_L, SMALL_R):
                    raise TrackError(f"Branch {branch} ends at the unknown port {(switch, port)}")
                if self.ports[switch][port] != branch:
                    raise TrackError(f"Port {(switch, PORT_NAMES[port])} holds {self.ports[switch][port]}, "
                                     f"not {branch}")
                if (switch, port) in seen:
                    raise TrackError(f"Port {(switch, PORT_NAMES[port])} holds two branch ends")
                seen.add((switch, port))
        if len(seen) != 3 * len(self.ports):
            raise TrackError(f"{3 * len(self.ports) - len(seen)} ports are empty")
        if 3 * self.n_switches != 2 * self.n_branches:
            raise TrackError(f"3 x {self.n_switches} switches != 2 x {self.n_branches} branches")

    def copy(self) -> "TrainTrack":
        """Deep copy of the combinatorics. The parent, the pants decomposition and the move history are shared."""
        memo = {id(self.parent): self.parent, id(self.pd): self.pd, id(self.moves): self.moves}
        return copy.deepcopy(self, memo=memo)

    def with_identity_columns(self) -> "TrainTrack":
        """The same track used as its own reference"""
        clone = self.copy()
        clone.columns = {b: {b: 1} for b in clone.ends}
        clone.circles = {c: {c: 1} for c in clone.circles}
        clone.parent, clone.moves = None, ()
        return clone

    def new_branch_id(self) -> int:
        return max([*self.ends, *self.circles], default=-1) + 1

    def image(self, weights: Mapping[int, int]) -> Weights:
        """Pushes a weighting of this track onto its reference track through the columns."""
        out: Weights = {}
        for branch, w in weights.items():
            column = self.columns.get(branch, self.circles.get(branch))
            if column is None:
                raise TrackError(f"Unknown branch {branch}")
            if not w:
                continue
            for target, count in column.items():
                out[target] = out.get(target, 0) + count * w
        return out

    def to_dict(self) -> dict:
        data = {
            "schema_version": SCHEMA_VERSION,
            "genus": self.genus,
            "switches": [{"id": s, "ports": list(self.ports[s]), "cusp": self.cusps[s]} for s in self.switches],
            "branches": [
                {"id": b, "ends": [list(end) for end in self.ends[b]], "column": _column_to_json(self.columns[b])}
                for b in self.branches
            ],
            "circles": [{"id": c, "column": _column_to_json(col)} for c, col in sorted(self.circles.items())],
            "model": self.model,
        }
        if self.layout:
            data["layout"] = _layout_to_json(self.layout)
        if self.pd is not None:
            data["pd"] = self.pd.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TrainTrack":
        from snowtrack.geometry import PantsDecomposition

        if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise TrackError(f"Unsupported track schema version {data['schema_version']}")
        return cls(
            genus=data["genus"],
            ports={s["id"]: list(s["ports"]) for s in data["switches"]},
            ends={b["id"]: [tuple(end) for end in b["ends"]] for b in data["branches"]},
            columns={b["id"]: _column_from_json(b["column"]) for b in data["branches"]},
            cusps={s["id"]: s["cusp"] for s in data["switches"]},
            circles={c["id"]: _column_from_json(c["column"]) for c in data.get("circles", [])},
            model=data.get("model"),
            layout=_layout_from_json(data.get("layout", {})),
            pd=PantsDecomposition.from_dict(data["pd"]) if data.get("pd") else None,
        )


def _column_to_json(column: Column) -> list[list[int]]:
    return [[target, count] for target, count in sorted(column.items())]


def _column_from_json(data: list) -> Column:
    return {int(target): int(count) for target, count in data}


def _layout_to_json(layout: dict) -> dict:
    return {key: {str(k): v for k, v in value.items()} if isinstance(value, dict) else value
            for key, value in layout.items()}


def _layout_from_json(layout: dict) -> dict:
    # json object keys are strings
    return {key: {int(k): v for k, v in value.items()} if isinstance(value, dict) else value
            for key, value in layout.items()}


def check_switch_conditions(track: TrainTrack, weights: Mapping[int, int]) -> bool:
    """True iff every weight is non-negative and weight(L) = weight(l) + weight(r) at every switch."""
    if set(weights) != set(track.ends) | set(track.circles):
        raise TrackError(f"Weights are indexed by {sorted(weights)}, the track has branches {track.branches}")
    if any(w < 0 for w in weights.values()):
        return False
    return all(
        weights[large] == weights[left] + weights[right] for large, left, right in track.ports.values()
    )


def covers(track: TrainTrack, weights: Mapping[int, int]) -> bool:
    """A carried weighting covers the track when it is positive on every branch."""
    return all(weights.get(branch, 0) > 0 for branch in track.ends)


def trace_faces(track: TrainTrack) -> list[list[End]]:
    """Boundary cycles of the ribbon graph, each as the list of arrivals `(switch, port)`."""
    seen: set[End] = set()
    faces: list[list[End]] = []
    for switch in track.switches:
        for port in (L, SMALL_L, SMALL_R):
            if (switch, port) in seen:
                continue
            face = []
            current = (switch, port)
            while current not in seen:
                seen.add(current)
                face.append(current)
                leave = (current[0], ccw_next(current[1]))
                current = track.other_end(track.branch_at(*leave), leave)
            faces.append(face)
    return faces


def _components(track: TrainTrack) -> int:
    parent = {s: s for s in track.ports}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (s1, _), (s2, _) in track.ends.values():
        parent[find(s1)] = find(s2)
    return len({find(s) for s in track.ports})


def complementary_regions(track: TrainTrack) -> list[ComplementaryRegion]:
    """
    Complementary regions with their cusp counts. When the ribbon surface of the track has fewer handles than the
    surface, the missing handles sit inside one region, which is then reported with a positive genus.
    """
    if track.circles:
        raise TrackError(f"Track has {len(track.circles)} closed branches without switches")
    faces = trace_faces(track)
    euler = track.n_switches - track.n_branches + len(faces)
    handles, odd = divmod(2 * _components(track) - euler, 2)
    if odd or handles > track.genus:
        raise TrackError(f"Ribbon surface with euler characteristic {euler} does not fit in genus {track.genus}")
    deficit = track.genus - handles
    # the missing handles are attributed to the region with the longest boundary
    holder = max(range(len(faces)), key=lambda i: len(faces[i]))
    return [
        ComplementaryRegion(
            cusps=sum(1 for _, port in face if port == SMALL_L),
            genus=deficit if i == holder else 0,
            corners=tuple(face),
        )
        for i, face in enumerate(faces)
    ]


def is_maximal(track: TrainTrack) -> bool:
    g = track.genus
    if track.n_switches != 12 * g - 12 or track.n_branches != 18 * g - 18 or track.circles:
        return False
    regions = complementary_regions(track)
    return len(regions) == 4 * g - 4 and all(region.is_triangle for region in regions)


def train_paths(track: TrainTrack, rng: np.random.Generator, start: int | None = None) -> Iterator[tuple[int, End]]:
    """
    Random smooth walk: entering a switch through a small port it leaves through ``L``, entering through ``L`` it
    leaves through a uniformly chosen small port. Yields `(branch, arrival end)` forever.
    """
    branch = track.branches[int(rng.integers(track.n_branches))] if start is None else start
    end = track.ends[branch][int(rng.integers(2))]
    while True:
        yield branch, end
        switch, port = end
        out = (switch, L) if port != L else (switch, SMALL_L + int(rng.integers(2)))
        branch = track.branch_at(*out)
        end = track.other_end(branch, out)


def random_closed_train_path(track: TrainTrack, rng: np.random.Generator, max_steps: int = 100_000) -> Weights:
    """
    Weights of a closed train path: a random smooth walk run until a (branch, direction) state repeats, keeping the
    cycle. The counts satisfy every switch condition.
    """
    visited: dict[tuple[int, End], int] = {}
    history: list[int] = []
    for step, state in enumerate(train_paths(track, rng)):
        if state in visited:
            weights = {b: 0 for b in (*track.ends, *track.circles)}
            for branch in history[visited[state]:]:
                weights[branch] += 1
            return weights
        if step >= max_steps:
            break
        visited[state] = step
        history.append(state[0])
    raise TrackError(f"No closed train path within {max_steps} steps")
