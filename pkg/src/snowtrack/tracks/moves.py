"""Elementary moves on train tracks: splits, slides and their inverses.

Splitting a large branch b between switches u and v, with small branches A = u.l, B = u.r, C = v.l and D = v.r:

- left (weight(A) > weight(D)): u becomes (L=A, l=b, r=D) and v becomes (L=C, l=b, r=B)
- right (weight(A) < weight(D)): u becomes (L=B, l=C, r=b) and v becomes (L=D, l=A, r=b)
- central (weight(A) = weight(D)): u, v and b disappear, A continues into D and B continues into C

The branch b survives a left or right split as the diagonal between u and v, and the cusps of u and v trade places.
A slide moves a switch u across a neighbouring switch v when the large branch of u arrives at a small port of v.
"""

from dataclasses import dataclass, field
from typing import Literal, Mapping

from snowtrack.errors import GuideError, TrackError
from snowtrack.tracks.track import SMALL_L, SMALL_R, L, TrainTrack, Weights, End, Column


Direction = Literal["left", "right", "central"]
MoveKind = Literal["left", "right", "central", "slide"]


@dataclass(frozen=True)
class SplitMove:
    """
    One elementary move with everything needed to replay it, push weights through it and undo it.

    Args:
        kind: left, right, central or slide
        branch: the large branch that was split, or the branch a slide crossed
        switches: (u, v)
        roles: branch ids by their role in the move (A, B, C, D for splits, A, B, E, F for slides)
        merged: for central splits, `(kept id, members)` of every spliced chain
        snapshot: ports, ends, columns, circles and cusps of everything the move touched, as they were before
    """

    kind: MoveKind
    branch: int
    switches: tuple[int, int]
    roles: dict[str, int]
    merged: tuple[tuple[int, tuple[int, ...]], ...] = ()
    snapshot: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "branch": self.branch, "switches": list(self.switches)}


def _snapshot(track: TrainTrack, switches: set[int]) -> dict:
    branches = {b for s in switches for b in track.ports[s]}
    touched = switches | {s for b in branches for s, _ in track.ends[b]}
    return {
        "ports": {s: list(track.ports[s]) for s in touched},
        "ends": {b: list(track.ends[b]) for b in branches},
        "columns": {b: dict(track.columns[b]) for b in branches},
        "circles": dict(track.circles),
        "cusps": {s: track.cusps[s] for s in touched},
    }


def _relocate(track: TrainTrack, relocation: dict[End, End], switches: tuple[int, ...]):
    """Moves branch ends between the ports of `switches` and rebuilds their port lists."""
    branches = {b for s in switches for b in track.ports[s]}
    for branch in branches:
        track.ends[branch] = [relocation.get(end, end) for end in track.ends[branch]]
    for s in switches:
        track.ports[s] = [-1, -1, -1]
    for branch in branches:
        for switch, port in track.ends[branch]:
            if switch in switches:
                track.ports[switch][port] = branch
    track.validate()


def _add_column(target: Column, extra: Column):
    for key, count in extra.items():
        target[key] = target.get(key, 0) + count


def split_roles(track: TrainTrack, branch: int) -> tuple[int, int, dict[str, int]]:
    if branch not in track.ends or not track.is_large(branch):
        raise TrackError(f"Branch {branch} is not large, it can not be split")
    (u, _), (v, _) = track.ends[branch]
    return u, v, {
        "A": track.ports[u][SMALL_L], "B": track.ports[u][SMALL_R],
        "C": track.ports[v][SMALL_L], "D": track.ports[v][SMALL_R],
    }


def guide_direction(track: TrainTrack, branch: int, guide: Mapping[int, int]) -> Direction:
    """The split of `branch` along which the guide weighting stays carried."""
    _, _, roles = split_roles(track, branch)
    a, d = guide[roles["A"]], guide[roles["D"]]
    return "left" if a > d else "right" if a < d else "central"


def split(track: TrainTrack, branch: int, direction: Direction | None = None,
          guide: Mapping[int, int] | None = None) -> tuple[TrainTrack, SplitMove]:
    """
    Splits the large branch `branch`. Without an explicit direction, the guide weighting chooses it.

    Returns: the split track, carried by `track` through its columns, and the move record
    """
    u, v, roles = split_roles(track, branch)
    if direction is None:
        if guide is None:
            raise TrackError("A split needs a direction or a guide")
        direction = guide_direction(track, branch, guide)
    elif guide is not None and direction == "central" and guide_direction(track, branch, guide) != "central":
        raise GuideError(f"Central split of {branch} requested but the guide is unbalanced there")
    if direction not in ("left", "right", "central"):
        raise TrackError(f"Unknown split direction {direction!r}")

    snapshot = _snapshot(track, {u, v})
    out = track.copy()
    if direction == "central":
        merged = _central(out, u, v, branch)
        move = SplitMove("central", branch, (u, v), roles, merged=merged, snapshot=snapshot)
        out.moves = track.moves + (move,)
        return out, move

    col_b = out.columns[branch]
    if direction == "left":
        relocation = {(u, SMALL_L): (u, L), (v, SMALL_R): (u, SMALL_R), (v, SMALL_L): (v, L),
                      (u, SMALL_R): (v, SMALL_R), (u, L): (u, SMALL_L), (v, L): (v, SMALL_L)}
        grown = (roles["D"], roles["B"])
    else:
        relocation = {(u, SMALL_R): (u, L), (v, SMALL_L): (u, SMALL_L), (u, L): (u, SMALL_R),
                      (v, L): (v, SMALL_R), (v, SMALL_R): (v, L), (u, SMALL_L): (v, SMALL_L)}
        grown = (roles["A"], roles["C"])
    _relocate(out, relocation, (u, v))
    for other in grown:
        _add_column(out.columns[other], col_b)
    out.cusps[u], out.cusps[v] = out.cusps[v], out.cusps[u]
    move = SplitMove(direction, branch, (u, v), roles, snapshot=snapshot)
    out.moves = track.moves + (move,)
    return out, move


def _central(track: TrainTrack, u: int, v: int, branch: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Splices u.l into v.r and u.r into v.l, removing u, v and the split branch."""
    glue = {(u, SMALL_L): (v, SMALL_R), (v, SMALL_R): (u, SMALL_L), (u, SMALL_R): (v, SMALL_L),
            (v, SMALL_L): (u, SMALL_R)}
    col_b = track.columns[branch]
    at = {port: track.ports[port[0]][port[1]] for port in glue}
    done: set[End] = set()
    chains = []
    # open chains start at a free end, closed ones anywhere
    starts = [end for port, b in at.items() for end in track.ends[b] if end not in glue]
    starts += [port for port in glue]
    for start in starts:
        if start in done:
            continue
        if start in glue:
            # only reached for closed chains, walk from the glued port into its branch
            entry = start
            members, passes, free = [], 0, []
            while entry not in done:
                b = at[entry]
                exit_end = track.other_end(b, entry)
                done.update({entry, exit_end})
                members.append(b)
                passes += 1
                entry = glue[exit_end]
            chains.append((members, passes, free))
            continue
        b = next(x for x in at.values() if start in track.ends[x])
        members, passes, free = [b], 0, [start]
        done.add(start)
        end = track.other_end(b, start)
        while end in glue:
            done.add(end)
            entry = glue[end]
            done.add(entry)
            passes += 1
            b = at[entry]
            members.append(b)
            end = track.other_end(b, entry)
        done.add(end)
        free.append(end)
        chains.append((members, passes, free))

    merged = []
    old_columns = {b: track.columns[b] for b in at.values()}
    for b in set(at.values()) | {branch}:
        del track.ends[b]
        del track.columns[b]
    del track.ports[u], track.ports[v]
    del track.cusps[u], track.cusps[v]
    for members, passes, free in chains:
        keep = min(members)
        column: Column = {}
        for b in members:
            _add_column(column, old_columns[b])
        for _ in range(passes):
            _add_column(column, col_b)
        if free:
            track.ends[keep] = list(free)
            track.columns[keep] = column
            for switch, port in free:
                track.ports[switch][port] = keep
        else:
            track.circles[keep] = column
        merged.append((keep, tuple(members)))
    track.validate()
    return tuple(merged)


def slide(track: TrainTrack, switch: int) -> tuple[TrainTrack, SplitMove]:
    """Slides `switch` across the switch its large branch arrives at, which must be through a small port."""
    u = switch
    b = track.ports[u][L]
    v, p = track.other_end(b, (u, L))
    if p == L or v == u:
        raise TrackError(f"The large branch {b} of switch {u} does not arrive at a small port of another switch")
    roles = {"A": track.ports[u][SMALL_L], "B": track.ports[u][SMALL_R], "E": track.ports[v][L],
             "F": track.ports[v][SMALL_R if p == SMALL_L else SMALL_L]}
    snapshot = _snapshot(track, {u, v})
    out = track.copy()
    if p == SMALL_L:
        relocation = {(u, SMALL_L): (v, SMALL_L), (v, SMALL_L): (v, SMALL_R), (u, SMALL_R): (u, SMALL_L),
                      (v, SMALL_R): (u, SMALL_R)}
    else:
        relocation = {(v, SMALL_R): (v, SMALL_L), (u, SMALL_R): (v, SMALL_R), (v, SMALL_L): (u, SMALL_L),
                      (u, SMALL_L): (u, SMALL_R)}
    _relocate(out, relocation, (u, v))
    col_b = out.columns[b]
    _add_column(out.columns[roles["A"]], col_b)
    _add_column(out.columns[roles["B"]], col_b)
    out.columns[b] = {}
    out.cusps[u], out.cusps[v] = out.cusps[v], out.cusps[u]
    move = SplitMove("slide", b, (u, v), roles, snapshot=snapshot)
    out.moves = track.moves + (move,)
    return out, move


def fold(track: TrainTrack, move: SplitMove) -> TrainTrack:
    """Undoes `move`, which must be the last move applied to `track`."""
    if not track.moves or track.moves[-1] is not move:
        raise TrackError("Only the last move of a track can be folded")
    snapshot = move.snapshot
    out = track.copy()
    u, v = move.switches
    touched = {b for s in (u, v) if s in out.ports for b in out.ports[s]}
    touched |= {keep for keep, _ in move.merged}
    for b in touched:
        out.ends.pop(b, None)
        out.columns.pop(b, None)
    out.circles = dict(snapshot["circles"])
    for s, ports in snapshot["ports"].items():
        out.ports[s] = list(ports)
    for s, cusp in snapshot["cusps"].items():
        out.cusps[s] = cusp
    for b, ends in snapshot["ends"].items():
        out.ends[b] = list(ends)
        out.columns[b] = dict(snapshot["columns"][b])
    out.validate()
    out.moves = track.moves[:-1]
    return out


def push_weights(move: SplitMove, weights: Mapping[int, int]) -> Weights | None:
    """
    Weights on the track after `move` of the measure with `weights` before it, or None when the measure is not
    carried by the moved track.
    """
    out = dict(weights)
    roles = move.roles
    if move.kind == "left":
        out[move.branch] = weights[roles["A"]] - weights[roles["D"]]
    elif move.kind == "right":
        out[move.branch] = weights[roles["B"]] - weights[roles["C"]]
    elif move.kind == "slide":
        # the crossed branch now feeds the two small ports of u
        v = move.switches[1]
        if move.snapshot["ports"][v][SMALL_L] == move.branch:
            out[move.branch] = weights[roles["B"]] + weights[roles["F"]]
        else:
            out[move.branch] = weights[roles["F"]] + weights[roles["A"]]
    else:
        if weights[roles["A"]] != weights[roles["D"]] or weights[roles["B"]] != weights[roles["C"]]:
            return None
        del out[move.branch]
        for keep, members in move.merged:
            value = weights[members[0]]
            for b in members:
                out.pop(b, None)
            out[keep] = value
    if any(w < 0 for w in out.values()):
        return None
    return out


def apply_move(
    track: TrainTrack, kind: MoveKind, branch: int, switches: tuple[int, int]
) -> tuple[TrainTrack, SplitMove]:
    """Replays a recorded move"""
    if kind == "slide":
        return slide(track, switches[0])
    if set(switches) != {s for s, _ in track.ends.get(branch, [])}:
        raise TrackError(f"Recorded split of {branch} between {switches} does not match the track")
    return split(track, branch, direction=kind)
