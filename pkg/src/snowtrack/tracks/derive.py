"""Derived train tracks and towers.

A derived track is obtained by unzipping every cusp of a track along a positive guide weighting, one split
at a time and cusp after cusp, until the unzipping trail of every cusp has run over every branch of the track it
started from and every measure carried by the result covers that track.
"""

from dataclasses import dataclass, field
from typing import Mapping

from loguru import logger

from snowtrack.errors import GuideError, TrackError
from snowtrack.io import SCHEMA_VERSION
from snowtrack.tracks.moves import SplitMove, apply_move, guide_direction, push_weights, split
from snowtrack.tracks.track import L, TrainTrack, Weights, check_switch_conditions


@dataclass
class Derivation:
    """
    One level of a tower.

    Args:
        track: the derived track, with `parent` set to the track it was derived from
        moves: the elementary moves, in order
        trails: per cusp, the branches of the parent its unzipping ran over
        guide: the guide weighting pushed onto the derived track
    """

    track: TrainTrack
    moves: tuple[SplitMove, ...]
    trails: dict[int, set[int]]
    guide: Weights

    def to_dict(self) -> dict:
        return {
            "moves": [move.to_dict() for move in self.moves],
            "trails": {str(cusp): sorted(trail) for cusp, trail in sorted(self.trails.items())},
        }


def structurally_covers(track: TrainTrack, base_branches) -> bool:
    """
    True when every non-zero measure carried by `track` is positive on every base branch. For each base branch, the
    branches whose column runs over it are set to zero and zeros are propagated through the switch conditions;
    covering holds when nothing survives.
    """
    for target in base_branches:
        if any(target not in column for column in track.circles.values()):
            return False
        alive = {b for b, column in track.ends.items() if target not in column}
        changed = True
        while changed and alive:
            changed = False
            for large, left, right in track.ports.values():
                if large not in alive and (left in alive or right in alive):
                    alive -= {left, right}
                    changed = True
                elif large in alive and left not in alive and right not in alive:
                    alive.discard(large)
                    changed = True
        if alive:
            return False
    return True


def _check_guide(track: TrainTrack, guide: Mapping[int, int]):
    if track.circles:
        raise GuideError("Tracks with closed branches can not be derived")
    if not check_switch_conditions(track, guide):
        raise GuideError("Guide weights violate the switch conditions")
    if any(guide[b] <= 0 for b in track.ends):
        raise GuideError("Guide does not cover the track, it has a zero weight")


def _path_to_large(track: TrainTrack, switch: int) -> list[int]:
    """
    The train path leaving `switch` through its large port and entering every next switch through a small port, up
    to and including the first large branch. Positive weights grow strictly along it, so it never closes up.
    """
    path, end = [], (switch, L)
    while True:
        branch = track.branch_at(*end)
        if branch in path:
            raise TrackError(f"Train path from switch {switch} closes up without meeting a large branch")
        path.append(branch)
        far_switch, far_port = track.other_end(branch, end)
        if far_port == L:
            return path
        end = (far_switch, L)


def derive_with_log(track: TrainTrack, guide: Mapping[int, int], max_moves: int = 200_000) -> Derivation:
    """
    Unzips every cusp of `track` along `guide` until all trails cover the track. Round after round, every cusp
    follows its train path to the first large branch, which is split the way the guide goes.

    Raises:
        GuideError: the guide is balanced at a large branch, whose central split would cut the track apart, or the
            trails do not cover the track within `max_moves` splits
    """
    _check_guide(track, guide)
    current = track.with_identity_columns()
    current.model, current.layout = None, {}
    weights = dict(guide)
    base_branches = set(track.ends)
    trails: dict[int, set[int]] = {cusp: set() for cusp in current.cusps.values()}
    moves: list[SplitMove] = []
    while not (all(trail >= base_branches for trail in trails.values())
               and structurally_covers(current, base_branches)):
        for cusp in sorted(trails):
            switch = next(s for s, c in current.cusps.items() if c == cusp)
            path = _path_to_large(current, switch)
            for branch in path:
                trails[cusp] |= set(current.columns[branch])
            branch = path[-1]
            direction = guide_direction(current, branch, weights)
            if direction == "central":
                raise GuideError(f"Guide is balanced at branch {branch}, the unzipping would disconnect it")
            for s, _ in current.ends[branch]:
                trails[current.cusps[s]] |= set(current.columns[branch])
            current, move = split(current, branch, direction)
            weights = push_weights(move, weights)
            if weights is None:
                raise TrackError(f"Guide is not carried after the {move.kind} split of branch {move.branch}")
            moves.append(move)
            if len(moves) >= max_moves:
                raise GuideError(f"Derivation did not finish within {max_moves} moves")
    current.parent = track
    logger.debug(f"Derived a track in {len(moves)} moves")
    return Derivation(track=current, moves=tuple(moves), trails=trails, guide=weights)


def derive(track: TrainTrack, guide: Mapping[int, int]) -> tuple[TrainTrack, tuple[SplitMove, ...]]:
    """
    The track derived from `track` along the positive guide weighting `guide`, with the splits producing it.

    Raises:
        GuideError: the guide has a zero weight, violates the switch conditions, or is balanced at a large branch met
            during the unzipping. A balanced guide would need a central split, which disconnects the track.
    """
    derivation = derive_with_log(track, guide)
    return derivation.track, derivation.moves


def replay(track: TrainTrack, moves) -> TrainTrack:
    """Applies recorded moves to a fresh copy of `track`"""
    current = track.with_identity_columns()
    current.model, current.layout = None, {}
    for move in moves:
        if isinstance(move, SplitMove):
            kind, branch, switches = move.kind, move.branch, move.switches
        else:
            kind, branch, switches = move["kind"], move["branch"], tuple(move["switches"])
        current, _ = apply_move(current, kind, branch, switches)
    current.parent = track
    return current


@dataclass
class Tower:
    """
    A base track and the tracks derived from it, level after level, along one guide.

    Args:
        base: the track at level 0
        levels: the derivation producing each level
    """

    base: TrainTrack
    levels: list[Derivation] = field(default_factory=list)

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def tracks(self) -> list[TrainTrack]:
        return [self.base] + [level.track for level in self.levels]

    @property
    def top(self) -> TrainTrack:
        return self.tracks[-1]

    def validate(self) -> bool:
        """Replays every level and checks that it reproduces the stored track with covering trails."""
        parent = self.base
        for level in self.levels:
            replayed = replay(parent, level.moves)
            if replayed.ports != level.track.ports or replayed.ends != level.track.ends \
                    or replayed.columns != level.track.columns:
                return False
            if not all(trail >= set(parent.ends) for trail in level.trails.values()):
                return False
            if not structurally_covers(level.track, parent.ends):
                return False
            parent = level.track
        return True

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "base": self.base.to_dict(),
            "levels": [level.to_dict() for level in self.levels],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Tower":
        """Rebuilds a tower by replaying its moves on the base track."""
        if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise TrackError(f"Unsupported tower schema version {data['schema_version']}")
        base = TrainTrack.from_dict(data["base"])
        tower, parent = cls(base), base
        for level in data["levels"]:
            track = replay(parent, level["moves"])
            trails = {int(cusp): set(trail) for cusp, trail in level["trails"].items()}
            tower.levels.append(Derivation(track=track, moves=track.moves, trails=trails, guide={}))
            parent = track
        return tower


def build_tower(track: TrainTrack, guide: Mapping[int, int], n: int) -> Tower:
    """Derives `n` levels from `track`, each along the guide pushed onto the previous level."""
    if n < 1:
        raise ValueError(f"Tower height must be at least 1, got {n}")
    tower = Tower(track)
    current, weights = track, dict(guide)
    for level in range(n):
        derivation = derive_with_log(current, weights)
        logger.info(f"Tower level {level + 1}/{n}: {len(derivation.moves)} moves")
        tower.levels.append(derivation)
        current, weights = derivation.track, derivation.guide
    return tower
