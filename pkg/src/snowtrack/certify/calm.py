"""Carried decomposing systems that are calm with respect to a standard track.

`construct_calm_cds` builds one from the track itself. The complementary triangles are paired, and the three cusps of
every triangle are zipped to the three cusps of its partner, in the order that makes the two triangles bound a pair
of pants. Zipping a cusp means unzipping the track from it along a shortest train path to the other cusp, one slide
or split at a time, and closing the path with a central split. Once every cusp is gone the track is a union of
closed branches, the annuli around the curves of the system, and every complementary pants is theta-shaped by
construction. When the track falls apart into pieces that can not be paired, the construction starts over with a
new pairing.

`place_system` works from the frame instead: the image of the frame under a twist word is twisted along every frame
curve until it sits strictly inside the chart of the model. Such systems keep their word, which places the pair of
two of them.
"""

from collections import deque
from typing import Mapping, Sequence

import numpy as np
from loguru import logger

from snowtrack.errors import BudgetExceeded, TrackError
from snowtrack.geometry import DTCoordinates, PantsDecomposition, sum_coordinates
from snowtrack.mcg import TwistWord, generator_ids, image_of_frame, validate_word
from snowtrack.tracks import (
    MODELS,
    TrainTrack,
    chart_coordinates,
    chart_weights,
    check_switch_conditions,
    complementary_regions,
    random_positive_weights,
    slide,
    split,
)
from snowtrack.tracks.track import L, SMALL_L, SMALL_R, End
from snowtrack.certify.shapes import CarriedSystem, is_calm


DEFAULT_ATTEMPTS = 64
DEFAULT_MAX_WORD_LENGTH = 5
GUIDE_DOMINANCE = 10**120
GUIDE_NOISE_SCALE = 10**30


class _Stuck(Exception):
    """The current pairing can not be zipped any further"""


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based random stream: the same (seed, index) always gives the same draws."""
    # streams of consecutive indices are 2**64 blocks apart
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, index, 0, 0]))


def _check_standard(track: TrainTrack):
    if track.model not in MODELS or track.pd is None:
        raise TrackError("Calm systems are built on standard models")


def triangle_cusps(track: TrainTrack) -> list[tuple[int, int, int]]:
    """The cusps of every complementary triangle, in the order met along its boundary."""
    out = []
    for region in complementary_regions(track):
        if not region.is_triangle:
            raise TrackError(f"Complementary region {region.corners} is not a triangle, the track is not maximal")
        out.append(tuple(track.cusps[s] for s, port in region.corners if port == SMALL_L))
    return out


def _switch_of(track: TrainTrack, cusp: int) -> int:
    return next(s for s, c in track.cusps.items() if c == cusp)


def shortest_train_path(track: TrainTrack, source: int, target: int) -> list[tuple[int, End]] | None:
    """
    Shortest train path leaving `source` through its large port and arriving at the large port of `target`, as
    (branch, arrival end) pairs, or None when there is none.
    """
    first = track.branch_at(source, L)
    start = (first, track.other_end(first, (source, L)))
    previous: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        branch, (switch, port) = state
        if (switch, port) == (target, L):
            path = []
            while state is not None:
                path.append(state)
                state = previous[state]
            return path[::-1]
        for out in ((L,) if port != L else (SMALL_L, SMALL_R)):
            following = track.branch_at(switch, out)
            step = (following, track.other_end(following, (switch, out)))
            if step not in previous:
                previous[step] = state
                queue.append(step)
    return None


def zip_cusps(track: TrainTrack, cusp: int, other: int, max_moves: int) -> tuple[TrainTrack, int]:
    """
    Unzips `track` from `cusp` towards `other` until the two cusps meet across a large branch, then splits it
    centrally. The path is planned again after every move.

    Returns: the zipped track and the number of moves it took
    """
    for moves in range(1, max_moves + 1):
        u, target = _switch_of(track, cusp), _switch_of(track, other)
        path = shortest_train_path(track, u, target)
        if path is None:
            raise _Stuck(f"no train path from cusp {cusp} to cusp {other}")
        branch, (v, port) = path[0]
        if port != L:
            track, _ = slide(track, u)
        elif len(path) == 1:
            track, _ = split(track, branch, "central")
            return track, moves
        else:
            following, arrival = path[1]
            _, out = track.other_end(following, arrival)
            track, _ = split(track, branch, "left" if out == SMALL_L else "right")
    raise _Stuck(f"cusp {cusp} did not reach cusp {other} within {max_moves} moves")


def _components(track: TrainTrack) -> dict[int, int]:
    """Connected component label of every switch"""
    label: dict[int, int] = {}
    for start in track.switches:
        if start in label:
            continue
        label[start] = start
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for b in track.ports[s]:
                for t, _ in track.ends[b]:
                    if t not in label:
                        label[t] = start
                        queue.append(t)
    return label


def _zip_all(track: TrainTrack, triangles: list[tuple[int, int, int]], rng: np.random.Generator,
             max_moves: int) -> dict[int, dict[int, int]]:
    """Pairs and zips every triangle, returning the columns of the closed branches left over."""
    current = track.with_identity_columns()
    current.model, current.layout = None, {}
    unpaired = list(range(len(triangles)))
    budget = max_moves
    while unpaired:
        first = unpaired.pop(int(rng.integers(len(unpaired))))
        label = _components(current)
        component = label[_switch_of(current, triangles[first][0])]
        partners = [t for t in unpaired if label[_switch_of(current, triangles[t][0])] == component]
        if not partners:
            raise _Stuck(f"triangle {first} is alone in its piece of the track")
        second = partners[int(rng.integers(len(partners)))]
        unpaired.remove(second)
        x1, x2, x3 = triangles[first]
        shift = int(rng.integers(3))
        y1, y2, y3 = triangles[second][shift:] + triangles[second][:shift]
        # the cyclic order is reversed across the pair, so that the two triangles bound a pants
        for cusp, other in ((x1, y1), (x2, y3), (x3, y2)):
            current, moves = zip_cusps(current, cusp, other, budget)
            budget -= moves
    if current.ports:
        raise TrackError(f"{len(current.ports)} switches survive the zipping")
    return current.circles


def system_from_columns(track: TrainTrack, columns: Mapping[int, Mapping[int, int]]) -> CarriedSystem | None:
    """The system whose curves are carried with the given weights, or None unless it is complete, positive and calm."""
    pd = track.pd
    if len(columns) != pd.n_curves:
        return None
    curves, total = [], {b: 0 for b in track.ends}
    for _, column in sorted(columns.items()):
        weights = {b: column.get(b, 0) for b in track.ends}
        if not check_switch_conditions(track, weights):
            return None
        curves.append(chart_coordinates(track, weights))
        for b, w in weights.items():
            total[b] += w
    if min(total.values()) <= 0 or not is_calm(total, track):
        return None
    return CarriedSystem(pd, None, tuple(curves), total)


def construct_calm_cds(track: TrainTrack, seed: int = 0, budget: int | None = None) -> CarriedSystem:
    """
    A complete decomposing system carried by the standard model `track` with positive weights and theta-shaped
    complementary pants. Its curves are the cores of the annuli left after zipping paired triangles together.

    Args:
        track: a standard model
        seed: seed of the pairings
        budget: number of pairings to try, defaults to `DEFAULT_ATTEMPTS`
    """
    _check_standard(track)
    budget = DEFAULT_ATTEMPTS if budget is None else budget
    rng = stream(seed)
    triangles = triangle_cusps(track)
    max_moves = 64 * track.n_branches * track.n_branches
    for attempt in range(budget):
        try:
            columns = _zip_all(track, triangles, rng, max_moves)
        except (_Stuck, TrackError) as e:
            logger.debug(f"Pairing {attempt + 1} could not be zipped: {e}")
            continue
        system = system_from_columns(track, columns)
        if system is not None:
            logger.debug(f"Calm system zipped from pairing {attempt + 1}")
            return system
    raise BudgetExceeded(f"No pairing among {budget} zips into a calm system")


def random_word(pd: PantsDecomposition, rng: np.random.Generator, length: int) -> TwistWord:
    """A uniformly random freely reduced word of `length` twists"""
    generators = generator_ids(pd)
    word: list[tuple[str, int]] = []
    while len(word) < length:
        letter = (generators[int(rng.integers(len(generators)))], 1 if rng.integers(2) else -1)
        if word and word[-1] == (letter[0], -letter[1]):
            continue
        word.append(letter)
    return tuple(word)


def fit_twists(model: str, union: DTCoordinates) -> list[int] | None:
    """
    Powers N_i of the negative twist along every frame curve moving `union` strictly inside the chart of `model`:
    t < 0 on the tight model, t > m on the dual one. None when the union misses a frame curve.
    """
    if any(m == 0 for m in union.m):
        return None
    if model == "tight":
        return [t // m + 1 for m, t in zip(union.m, union.t)]
    return [(t - m - 1) // m for m, t in zip(union.m, union.t)]


def common_twists(d: DTCoordinates, e: DTCoordinates) -> list[int] | None:
    """
    Powers of the negative twist along every frame curve moving `d` inside the tight chart and `e` inside the dual
    one at the same time, or None when some curve leaves no room. The least such powers are returned.
    """
    least, most = fit_twists("tight", d), fit_twists("tight-dual", e)
    if least is None or most is None or any(lo > hi for lo, hi in zip(least, most)):
        return None
    return least


def twisted(curves: Sequence[DTCoordinates], powers: Sequence[int]) -> tuple[DTCoordinates, ...]:
    return tuple(DTCoordinates(c.m, tuple(t - n * m for t, m, n in zip(c.t, c.m, powers))) for c in curves)


def twist_letters(powers: Sequence[int]) -> TwistWord:
    letters = []
    for curve, power in enumerate(powers):
        letters += [(f"K{curve}", -1 if power > 0 else 1)] * abs(power)
    return tuple(letters)


def retwist(system: CarriedSystem, track: TrainTrack, powers: Sequence[int]) -> CarriedSystem | None:
    """`system` twisted `powers[i]` times negatively along frame curve i, or None when it leaves the positive cone."""
    curves = twisted(system.curves, powers)
    weights = chart_weights(track.pd, track.model, sum_coordinates(curves, track.pd.n_curves))
    if weights is None or any(w <= 0 for w in weights.values()):
        return None
    word = None if system.word is None else system.word + twist_letters(powers)
    return CarriedSystem(system.pd, word, curves, weights)


def place_system(track: TrainTrack, word: Sequence[tuple[str, int]]) -> CarriedSystem | None:
    """The image of the frame under `word`, twisted along the frame into the positive cone of `track`."""
    _check_standard(track)
    pd = track.pd
    word = validate_word(pd, word)
    curves = image_of_frame(pd, word)
    powers = fit_twists(track.model, sum_coordinates(curves, pd.n_curves))
    if powers is None:
        return None
    return retwist(CarriedSystem(pd, word, curves, {}), track, powers)


def search_calm_cds(track: TrainTrack, seed: int = 0, budget: int = 1000,
                    max_word_length: int = DEFAULT_MAX_WORD_LENGTH) -> CarriedSystem:
    """A calm system of `track` placed from the image of the frame under a random word, keeping its word."""
    _check_standard(track)
    rng = stream(seed)
    for attempt in range(budget):
        word = random_word(track.pd, rng, int(rng.integers(1, max_word_length + 1)))
        system = place_system(track, word)
        if system is not None and is_calm(system, track):
            logger.debug(f"Calm placed system found after {attempt + 1} words")
            return system
    raise BudgetExceeded(f"No calm placed system among {budget} words")


def gregarious_guide(weights: Mapping[int, int], track: TrainTrack, rng: np.random.Generator) -> dict[int, int]:
    """
    A guide dominated by a carried measure, `weights`, with a small generic perturbation: the derivation follows the
    measure wherever its weights differ and the perturbation breaks its ties, so the measure stays carried by every
    derived track.
    """
    noise = random_positive_weights(track, rng, scale=GUIDE_NOISE_SCALE)
    return {b: GUIDE_DOMINANCE * weights[b] + noise[b] for b in track.ends}
