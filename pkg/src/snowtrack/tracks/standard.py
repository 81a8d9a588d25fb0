"""Standard train tracks built on a pants decomposition.

Every pants curve c is carried by a loop of two branches e1, e2 (ids 4c, 4c + 1) between the attaching switches a
and b (ids 2c, 2c + 1). The tails tailA, tailB (ids 4c + 2, 4c + 3) leave a and b towards the two sides of the curve
and end at the merge switch of their slot, where the seams of the pants meet: seam (p, k) has id 4n + 3p + k and
runs from the merge switch of slot (p, k) to the merge switch of slot (p, k + 1). The merge switch of slot (p, k) has
id 2n + 3p + k.

Two models share this picture and differ by the direction in which the loop flows around the curve:

- ``tight``: curves with m > 0 are carried when t <= 0
- ``tight-dual``: curves with m > 0 are carried when t >= m

Curves with m == 0 everywhere, the multicurves of pants curves, are carried by both on their loops. The two models
together form a transverse pair, see `snowtrack.tracks.transverse`.
"""

import numpy as np

from snowtrack.errors import CoordinateError, TrackError
from snowtrack.geometry import DTCoordinates, PantsDecomposition, arc_type_counts, boundary_values, check_admissible
from snowtrack.tracks.moves import push_weights
from snowtrack.tracks.tight import tie_system
from snowtrack.tracks.track import L, SMALL_L, SMALL_R, TrainTrack, Weights


MODELS = ("tight", "tight-dual")


def loop(curve: int) -> tuple[int, int]:
    """Branch ids (e1, e2) of the loop carrying `curve`"""
    return 4 * curve, 4 * curve + 1


def tails(curve: int) -> tuple[int, int]:
    """Branch ids of the tails towards the first and the second side of `curve`"""
    return 4 * curve + 2, 4 * curve + 3


def seam(pd: PantsDecomposition, pants: int, k: int) -> int:
    return 4 * pd.n_curves + 3 * pants + k % 3


def merge_switch(pd: PantsDecomposition, pants: int, k: int) -> int:
    return 2 * pd.n_curves + 3 * pants + k % 3


def slot_tail(pd: PantsDecomposition, pants: int, k: int) -> int:
    curve = pd.curve_at(pants, k)
    first, _ = pd.gluing[curve]
    tail_a, tail_b = tails(curve)
    return tail_a if (pants, k % 3) == first else tail_b


def standard_track(pd: PantsDecomposition, model: str = "tight") -> TrainTrack:
    """The maximal standard track of `model` on `pd`, with its layout and its tie record."""
    if model not in MODELS:
        raise TrackError(f"Unknown standard model {model!r}, choose one of {MODELS}")
    tail_port = SMALL_L if model == "tight" else SMALL_R
    loop_port = SMALL_R if model == "tight" else SMALL_L
    ports: dict[int, list[int]] = {}
    ends: dict[int, list] = {}
    for curve in pd.curves:
        a, b = 2 * curve, 2 * curve + 1
        e1, e2 = loop(curve)
        tail_a, tail_b = tails(curve)
        (p, k), (q, k2) = pd.gluing[curve]
        for switch, tail in ((a, tail_a), (b, tail_b)):
            ports[switch] = [e1, -1, -1]
            ports[switch][tail_port] = tail
            ports[switch][loop_port] = e2
        ends[e1] = [(a, L), (b, L)]
        ends[e2] = [(b, loop_port), (a, loop_port)]
        ends[tail_a] = [(merge_switch(pd, p, k), L), (a, tail_port)]
        ends[tail_b] = [(merge_switch(pd, q, k2), L), (b, tail_port)]
    seams = {}
    for pants in range(pd.n_pants):
        for k in range(3):
            ports[merge_switch(pd, pants, k)] = [slot_tail(pd, pants, k), seam(pd, pants, k - 1), seam(pd, pants, k)]
            branch = seam(pd, pants, k)
            ends[branch] = [(merge_switch(pd, pants, k), SMALL_R), (merge_switch(pd, pants, k + 1), SMALL_L)]
            seams[branch] = [pants, k]
    layout = {
        "loops": {curve: list(loop(curve)) for curve in pd.curves},
        "tails": {curve: list(tails(curve)) for curve in pd.curves},
        "seams": seams,
    }
    track = TrainTrack(genus=pd.genus, ports=ports, ends=ends, model=model, layout=layout, pd=pd)
    track.layout["embedding"] = tie_system(track)
    return track


def _seam_counts(pd: PantsDecomposition, coords: DTCoordinates, pants: int):
    counts = arc_type_counts(*boundary_values(coords, pd, pants))
    if any(counts.loops):
        return None
    return counts


def chart_weights(pd: PantsDecomposition, model: str, coords: DTCoordinates) -> Weights | None:
    """Branch weights of the curve with coordinates `coords` on the standard model, or None if it is not carried."""
    check_admissible(coords, pd)
    counts = [_seam_counts(pd, coords, pants) for pants in range(pd.n_pants)]
    if any(c is None for c in counts):
        return None
    weights: Weights = {}
    for pants in range(pd.n_pants):
        for k in range(3):
            weights[seam(pd, pants, k)] = counts[pants].count(k, (k + 1) % 3)
    for curve, (m, t) in enumerate(zip(coords.m, coords.t)):
        e1, e2 = loop(curve)
        if m == 0:
            loop_weights = (t, t)
        elif model == "tight":
            loop_weights = (m - t, -t)
        else:
            loop_weights = (t, t - m)
        weights[e1], weights[e2] = loop_weights
        for tail in tails(curve):
            weights[tail] = m
    if any(w < 0 for w in weights.values()):
        return None
    return weights


def chart_coordinates(track: TrainTrack, weights: Weights) -> DTCoordinates:
    """Inverse of `chart_weights`: the Dehn-Thurston coordinates of a carried weighting of a standard model."""
    if track.model not in MODELS or track.pd is None:
        raise TrackError("Chart coordinates are only defined on standard models")
    pd = track.pd
    m, t = [], []
    for curve in pd.curves:
        (p, k), (q, k2) = pd.gluing[curve]
        tail_a, tail_b = tails(curve)
        if weights[tail_a] != weights[tail_b]:
            raise CoordinateError(f"Weights do not match across curve {curve}")
        if weights[tail_a] != weights[seam(pd, p, k)] + weights[seam(pd, p, k - 1)]:
            raise CoordinateError(f"Seams at slot {(p, k)} do not add up to the tail of curve {curve}")
        e2 = weights[loop(curve)[1]]
        m.append(weights[tail_a])
        if not m[-1]:
            t.append(e2)
        else:
            t.append(-e2 if track.model == "tight" else m[-1] + e2)
    return DTCoordinates(tuple(m), tuple(t))


def is_carried(curve: DTCoordinates, track: TrainTrack) -> Weights | None:
    """
    Weights of `curve` on `track` when it is carried, None otherwise. Standard models are read off their chart,
    derived tracks push the weights on their parent through the recorded moves.
    """
    if track.parent is None:
        if track.model not in MODELS or track.pd is None:
            raise TrackError("Track has neither a standard model nor a recorded derivation")
        return chart_weights(track.pd, track.model, curve)
    weights = is_carried(curve, track.parent)
    for move in track.moves:
        if weights is None:
            return None
        weights = push_weights(move, weights)
    return weights


def random_integer(rng: np.random.Generator, low: int, high: int) -> int:
    """Uniform-enough integer in [low, high] of any size, drawn from the bytes of `rng`"""
    span = high - low + 1
    return low + int.from_bytes(rng.bytes(span.bit_length() // 8 + 8), "little") % span


def random_positive_weights(track: TrainTrack, rng: np.random.Generator, scale: int = 10**60) -> Weights:
    """
    A strictly positive carried weighting of a standard model. All m are even in [scale, 2 scale), so that every
    pants has strict triangle inequalities, and every loop carries between 1 and `scale` extra turns.
    """
    if track.model not in MODELS or track.pd is None:
        raise TrackError("Random positive weights are only drawn on standard models")
    pd = track.pd
    m = tuple(2 * random_integer(rng, scale // 2, scale - 1) for _ in pd.curves)
    turns = [random_integer(rng, 1, scale) for _ in pd.curves]
    t = tuple(-s if track.model == "tight" else mc + s for mc, s in zip(m, turns))
    weights = chart_weights(pd, track.model, DTCoordinates(m, t))
    if weights is None or not all(w > 0 for w in weights.values()):
        raise TrackError(f"Weights {weights} drawn at scale {scale} are not strictly positive")
    return weights
