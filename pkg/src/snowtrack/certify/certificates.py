"""Replayable lower bounds on curve complex and Heegaard distance.

A certificate stores the claimed bound together with everything needed to recompute it: the towers as split
sequences, the curves or systems as coordinates and the transverse pair as its overlay. `replay_certificate` rebuilds
all of them from the stored data and recomputes the bound from scratch.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

from loguru import logger

from snowtrack.errors import CertificateError, SnowtrackError
from snowtrack.geometry import DTCoordinates, PantsDecomposition
from snowtrack.io import SCHEMA_VERSION
from snowtrack.mcg import inverse_word, pair_frames, validate_word
from snowtrack.tracks import (
    Tower,
    TrainTrack,
    TransversePair,
    check_switch_conditions,
    check_transverse,
    is_carried,
    is_maximal,
    is_tight,
)
from snowtrack.waves import CdsPair
from snowtrack.certify.shapes import CarriedSystem, is_calm


CertificateKind = Literal["curve-complex", "heegaard", "membership"]


@dataclass
class DistanceCertificate:
    """
    Args:
        kind: what the bound is about
        bound: the certified lower bound (for memberships, the level of the tower carrying the object)
        hypotheses: every hypothesis checked, all of them true on an emitted certificate
        witnesses: values the bound is read from
        data: serialized inputs, enough to recompute everything
        metadata: justification and provenance, ignored on replay
    """

    kind: CertificateKind
    bound: int
    hypotheses: dict[str, bool] = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "bound": self.bound,
            "hypotheses": self.hypotheses,
            "witnesses": self.witnesses,
            "data": self.data,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DistanceCertificate":
        if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise CertificateError("schema_version", f"unsupported certificate schema {data['schema_version']}")
        return cls(
            kind=data["kind"],
            bound=int(data["bound"]),
            hypotheses=dict(data.get("hypotheses", {})),
            witnesses=dict(data.get("witnesses", {})),
            data=dict(data.get("data", {})),
            metadata=dict(data.get("metadata", {})),
        )


def _same_track(first: TrainTrack, second: TrainTrack) -> bool:
    return first.ports == second.ports and first.ends == second.ends and first.model == second.model


def _check_all(checks: Sequence[tuple[str, Callable[[], bool]]]) -> dict[str, bool]:
    """Evaluates hypotheses in order and refuses at the first failing one."""
    hypotheses = {}
    for name, check in checks:
        try:
            holds = check()
        except CertificateError:
            raise
        except SnowtrackError as e:
            raise CertificateError(name, str(e)) from e
        if not holds:
            raise CertificateError(name, "hypothesis does not hold")
        hypotheses[name] = True
    return hypotheses


def cert_cc_distance_lb(d: DTCoordinates, tower: Tower, e: DTCoordinates) -> DistanceCertificate:
    """
    Lower bound on the curve complex distance between `d`, carried by the top of `tower`, and `e`.

    Carrying decreases along the tower, so the least level j not carrying `e` is found from the bottom. A curve at
    distance at most k from a curve carried by level i is carried by level i - k, which bounds the distance by
    n - j + 1. When the top carries `e` there is no information and the bound is 0.
    """
    if not tower.validate():
        raise CertificateError("tower_valid", "the tower does not replay")
    if is_carried(d, tower.top) is None:
        raise CertificateError("d_carried", "the curve is not carried by the top of the tower")
    n = tower.height
    level = next((j for j, track in enumerate(tower.tracks) if is_carried(e, track) is None), None)
    bound = 0 if level is None else n - level + 1
    return DistanceCertificate(
        kind="curve-complex",
        bound=bound,
        hypotheses={"tower_valid": True, "d_carried": True},
        witnesses={"height": n, "first_uncarried_level": level},
        data={"d": d.to_dict(), "e": e.to_dict(), "tower": tower.to_dict()},
    )


def cert_heegaard_distance_lb(d: CarriedSystem, d_tower: Tower, e: CarriedSystem, e_tower: Tower,
                              pair: TransversePair) -> DistanceCertificate:
    """
    Lower bound n - 1 on the distance of the splitting glued along `d` and `e`, for a tower of height n over the
    first track of `pair` carrying `d` and a tower of height at least 2 over the second track carrying `e`.

    Every hypothesis is checked in order and the first failing one is named in the raised `CertificateError`.
    """
    track, dual = pair.track, pair.dual
    pd = track.pd
    n = d_tower.height
    hypotheses = _check_all((
        ("same_frame", lambda: pd is not None and d.pd == pd and e.pd == pd),
        ("e_tower_height", lambda: e_tower.height >= 2),
        ("maximal", lambda: is_maximal(track) and is_maximal(dual)),
        ("tight", lambda: is_tight(track, pd) and is_tight(dual, pd)),
        ("transverse", lambda: check_transverse(pair)),
        ("towers_based", lambda: _same_track(d_tower.base, track) and _same_track(e_tower.base, dual)),
        ("towers_valid", lambda: d_tower.validate() and e_tower.validate()),
        ("d_carried", lambda: is_carried(d.union, track) == d.weights),
        ("e_carried", lambda: is_carried(e.union, dual) == e.weights),
        ("d_positive", lambda: check_switch_conditions(track, d.weights) and min(d.weights.values()) > 0),
        ("e_positive", lambda: check_switch_conditions(dual, e.weights) and min(e.weights.values()) > 0),
        ("d_gregarious", lambda: is_carried(d.union, d_tower.top) is not None),
        ("e_gregarious", lambda: is_carried(e.union, e_tower.tracks[2]) is not None),
        ("d_calm", lambda: is_calm(d, track)),
        ("e_calm", lambda: is_calm(e, dual)),
    ))
    return DistanceCertificate(
        kind="heegaard",
        bound=n - 1,
        hypotheses=hypotheses,
        witnesses={"d_height": n, "e_height": e_tower.height},
        data={
            "pair": pair.to_dict(),
            "d": d.to_dict(),
            "e": e.to_dict(),
            "d_tower": d_tower.to_dict(),
            "e_tower": e_tower.to_dict(),
        },
        metadata={
            "justification": f"the system D is {n}-gregarious on the first track, hence {n - 1}-gregarious with "
                             f"respect to the 2-gregarious calm system E on the transverse track",
        },
    )


def gnp_membership(obj: DTCoordinates | CarriedSystem, tower: Tower, n: int | None = None) -> DistanceCertificate:
    """
    Certifies that `obj` has positive weight on every branch of the base of `tower` and is carried by its level `n`
    (the top by default).
    """
    n = tower.height if n is None else n
    coords = obj.union if isinstance(obj, CarriedSystem) else obj
    if not 0 <= n <= tower.height:
        raise CertificateError("tower_height", f"level {n} asked from a tower of height {tower.height}")
    if not tower.validate():
        raise CertificateError("tower_valid", "the tower does not replay")
    weights = is_carried(coords, tower.base)
    if weights is None:
        raise CertificateError("carried", "not carried by the base track")
    zeros = sorted(b for b, w in weights.items() if w == 0)
    if zeros:
        raise CertificateError("positive", f"zero weight on branches {zeros}")
    if is_carried(coords, tower.tracks[n]) is None:
        raise CertificateError("gregarious", f"not carried by level {n}")
    return DistanceCertificate(
        kind="membership",
        bound=n,
        hypotheses={"tower_valid": True, "carried": True, "positive": True, "gregarious": True},
        witnesses={"min_weight": min(weights.values())},
        data={
            "object": obj.to_dict(),
            "system": isinstance(obj, CarriedSystem),
            "tower": tower.to_dict(),
        },
    )


def _recompute(cert: DistanceCertificate) -> DistanceCertificate:
    data = cert.data
    if cert.kind == "curve-complex":
        tower = Tower.from_dict(data["tower"])
        return cert_cc_distance_lb(DTCoordinates.from_dict(data["d"]), tower, DTCoordinates.from_dict(data["e"]))
    if cert.kind == "heegaard":
        pair = TransversePair.from_dict(data["pair"])
        pd = pair.track.pd
        return cert_heegaard_distance_lb(
            CarriedSystem.from_dict(data["d"], pd),
            Tower.from_dict(data["d_tower"]),
            CarriedSystem.from_dict(data["e"], pd),
            Tower.from_dict(data["e_tower"]),
            pair,
        )
    if cert.kind == "membership":
        tower = Tower.from_dict(data["tower"])
        if data["system"]:
            obj = CarriedSystem.from_dict(data["object"], tower.base.pd)
        else:
            obj = DTCoordinates.from_dict(data["object"])
        return gnp_membership(obj, tower, cert.bound)
    raise CertificateError("kind", f"unknown certificate kind {cert.kind}")


def replay_certificate(cert: DistanceCertificate | dict) -> bool:
    """Rebuilds every witness of `cert` from its stored data and checks that the same bound comes out."""
    try:
        if isinstance(cert, dict):
            cert = DistanceCertificate.from_dict(cert)
        again = _recompute(cert)
    except (SnowtrackError, KeyError) as e:
        logger.warning(f"Certificate replay failed: {e}")
        return False
    if again.bound != cert.bound or again.witnesses != cert.witnesses or again.hypotheses != cert.hypotheses:
        logger.warning(f"Certificate replay gives bound {again.bound}, the certificate claims {cert.bound}")
        return False
    return True


def overlay_pair(d: CarriedSystem, e: CarriedSystem) -> CdsPair:
    """
    The pair (D, E) moved so that E becomes the frame. Both systems are images of the same frame, so the map taking
    E back to the frame sends D to the image of the frame under the word of D followed by the inverse of that of E.
    """
    if d.pd != e.pd:
        raise CertificateError("same_frame", "the systems are written in different frames")
    if d.word is None or e.word is None:
        raise CertificateError("word", "systems built on a track carry no word placing them against the frame")
    return pair_frames(d.pd, d.word + inverse_word(e.word), placement=e.word)


def disjointness_upper_bound(pd: PantsDecomposition, word: Sequence[tuple[str, int]], a: int, b: int) -> int:
    """
    Length of a path in the curve complex from the image of frame curve `a` under `word` to frame curve `b`.

    Peeling the letters of the word off one at a time gives a sequence of frames, from the image of the frame under
    the whole word down to the frame itself. Curves of one frame are pairwise disjoint, and consecutive frames share
    every curve fixed by the peeled letter: a pants twist fixes the whole frame and a transversal twist fixes every
    frame curve but its own. The shortest path through these frames is an upper bound on the distance.
    """
    word = validate_word(pd, word)
    curves = pd.n_curves

    def fixes(letter: tuple[str, int], curve: int) -> bool:
        gen = letter[0]
        return gen.startswith("K") or int(gen[1:]) != curve

    # 0-1 breadth first search over (frame, curve)
    target = (len(word), b)
    dist = {(0, a): 0}
    queue = deque([(0, a)])
    while queue:
        node = queue.popleft()
        level, curve = node
        if node == target:
            return dist[node]
        steps = [((level, other), 1) for other in range(curves) if other != curve]
        if level < len(word) and fixes(word[level], curve):
            steps.append(((level + 1, curve), 0))
        if level > 0 and fixes(word[level - 1], curve):
            steps.append(((level - 1, curve), 0))
        for step, cost in steps:
            if dist.get(step, cost + dist[node] + 1) > dist[node] + cost:
                dist[step] = dist[node] + cost
                if cost:
                    queue.append(step)
                else:
                    queue.appendleft(step)
    raise CertificateError("path", f"no disjointness path from curve {a} to curve {b}")
