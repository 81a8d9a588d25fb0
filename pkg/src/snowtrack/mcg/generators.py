"""Dehn twists as automorphisms of the surface groupoid.

For every decomposition curve K_i there are two generators:

- ``K{i}``: the twist along K_i itself, ε_i -> ε_i u_B^-1 (its twist coordinate grows by m_i).
- ``D{i}``: the twist along a transversal δ_i that meets K_i twice (K_i between two distinct pants, δ_i lives in the
  four-holed sphere they form) or once (K_i glued to two slots of one pants, δ_i lives in the one-holed torus).

Images are checked when a generator is built: every vertex and edge relation has to survive, and the torus
transversal is oriented so that it satisfies the braid relation with the twist along its pants curve.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from snowtrack.geometry.pants import PantsDecomposition
from snowtrack.mcg.groupoid import (
    BOUNDARY,
    Edge,
    Loop,
    Path,
    Reducer,
    Surface,
    boundary,
    close_loop,
    compose,
)
from snowtrack.utils.logging import logger


GENERATOR_SET_VERSION = "dt-groupoid/1"


@dataclass
class Automorphism:
    """
    Images of the vertex letters (pants, letter) and of the positive edges. Missing keys are fixed.
    """

    name: str
    surface: Surface
    letters: dict[tuple[int, int], Path] = field(default_factory=dict)
    edges: dict[int, Path] = field(default_factory=dict)

    def __post_init__(self):
        self._letter_cache: dict[tuple[int, int], Path] = {}
        self._edge_cache: dict[Edge, Path] = {}

    def letter_image(self, pants: int, letter: int) -> Path:
        key = (pants, letter)
        if key not in self._letter_cache:
            image = self.letters.get((pants, abs(letter)), Path.vertex(pants, (abs(letter),)))
            self._letter_cache[key] = image if letter > 0 else image.inverse()
        return self._letter_cache[key]

    def edge_image(self, edge: Edge) -> Path:
        if edge not in self._edge_cache:
            curve, sign = edge
            first, second = self.surface.pd.gluing[curve]
            image = self.edges.get(curve, Path(first[0], second[0], ((), ()), ((curve, 1),)))
            self._edge_cache[edge] = image if sign > 0 else image.inverse()
        return self._edge_cache[edge]

    def _push(self, reducer: Reducer, start: int, verts, edges):
        pants = start
        for j, word in enumerate(verts):
            for letter in word:
                reducer.push_path(self.letter_image(pants, letter))
            if j < len(edges):
                reducer.push_path(self.edge_image(edges[j]))
                pants = self.surface.arrival(edges[j])[0]

    def apply_path(self, path: Path) -> Path:
        reducer = Reducer(self.surface, path.start)
        self._push(reducer, path.start, path.verts, path.edges)
        return reducer.path()

    def apply_loop(self, loop: Loop) -> Loop:
        reducer = Reducer(self.surface, loop.base)
        self._push(reducer, loop.base, loop.verts, loop.edges)
        return close_loop(self.surface, reducer)


def paths_equal(surface: Surface, first: Path, second: Path) -> bool:
    return compose(surface, [first, second.inverse()]).is_identity


def boundary_path(pants: int, position: int) -> Path:
    return Path.vertex(pants, BOUNDARY[position])


def edge_path(pd: PantsDecomposition, curve: int) -> Path:
    first, second = pd.gluing[curve]
    return Path(first[0], second[0], ((), ()), ((curve, 1),))


def _conjugate(surface: Surface, by: Path, path: Path) -> Path:
    return compose(surface, [by, path, by.inverse()])


def _letters_from_positions(surface: Surface, pants: int, images: dict[int, Path]) -> dict[tuple[int, int], Path]:
    """Completes the images of two boundary positions with the third one and returns the images of u_0 and u_1."""
    missing = ({0, 1, 2} - set(images)).pop()
    # u_missing = (u_(missing+1) u_(missing+2))^-1
    images[missing] = compose(surface, [images[(missing + 1) % 3], images[(missing + 2) % 3]]).inverse()
    return {(pants, 1): images[0], (pants, 2): images[1]}


def pants_twist(pd: PantsDecomposition, curve: int, sign: int = 1) -> Automorphism:
    surface = Surface(pd)
    first, second = pd.gluing[curve]
    image = Path(first[0], second[0], ((), boundary(second[1], -sign)), ((curve, 1),))
    return Automorphism(f"K{curve}{'+' if sign > 0 else '-'}", surface, edges={curve: image})


def _four_holed_transversal(pd: PantsDecomposition, curve: int, sign: int) -> Automorphism:
    surface = Surface(pd)
    (p, k), (q, kq) = pd.gluing[curve]
    eps = edge_path(pd, curve)
    # δ encloses u_(k+1) on the first side and ε u_(kq+2) ε^-1 on the second
    first_lasso = Path(p, p, ((), BOUNDARY[(kq + 2) % 3], ()), ((curve, 1), (curve, -1)))
    loop = compose(surface, [first_lasso, boundary_path(p, (k + 1) % 3)])
    if sign < 0:
        loop = loop.inverse()
    seen_from_q = compose(surface, [eps.inverse(), loop, eps])

    letters = {}
    letters.update(_letters_from_positions(surface, p, {
        (k + 1) % 3: _conjugate(surface, loop, boundary_path(p, (k + 1) % 3)),
        (k + 2) % 3: boundary_path(p, (k + 2) % 3),
    }))
    letters.update(_letters_from_positions(surface, q, {
        (kq + 2) % 3: _conjugate(surface, seen_from_q, boundary_path(q, (kq + 2) % 3)),
        (kq + 1) % 3: boundary_path(q, (kq + 1) % 3),
    }))
    enclosed = {(p, (k + 1) % 3): loop, (q, (kq + 2) % 3): seen_from_q}
    edges = {}
    for other in pd.curves:
        if other == curve:
            continue
        first, second = pd.gluing[other]
        if first not in enclosed and second not in enclosed:
            continue
        parts = []
        if first in enclosed:
            parts.append(enclosed[first])
        parts.append(edge_path(pd, other))
        if second in enclosed:
            parts.append(enclosed[second].inverse())
        edges[other] = compose(surface, parts)
    return Automorphism(f"D{curve}{'+' if sign > 0 else '-'}", surface, letters=letters, edges=edges)


def _torus_candidates(pd: PantsDecomposition, curve: int, sign: int) -> list[tuple[Automorphism, dict[int, Path]]]:
    surface = Surface(pd)
    (p, k), (_, kb) = pd.gluing[curve]
    h = 3 - k - kb
    eps = edge_path(pd, curve)
    power = eps if sign > 0 else eps.inverse()
    y = boundary_path(p, kb)
    candidates = []
    for image_of_y in (compose(surface, [y, power]), compose(surface, [power, y])):
        images = {
            kb: image_of_y,
            k: compose(surface, [eps, image_of_y.inverse(), eps.inverse()]),
            h: boundary_path(p, h),
        }
        letters = {(p, 1): images[0], (p, 2): images[1]}
        candidates.append((Automorphism(f"D{curve}{'+' if sign > 0 else '-'}", surface, letters=letters), images))
    return candidates


def preserves_relations(auto: Automorphism) -> bool:
    """Every edge relation ε u_B ε^-1 u_A = 1 still holds after substitution."""
    pd = auto.surface.pd
    for curve in pd.curves:
        (p, a), (_, b) = pd.gluing[curve]
        relation = Path(p, p, ((), BOUNDARY[b], BOUNDARY[a]), ((curve, 1), (curve, -1)))
        if not auto.apply_path(relation).is_identity:
            return False
    return True


def _test_paths(pd: PantsDecomposition) -> list[Path]:
    paths = [Path.vertex(p, (letter,)) for p in range(pd.n_pants) for letter in (1, 2)]
    return paths + [edge_path(pd, curve) for curve in pd.curves]


def satisfies_braid_relation(first: Automorphism, second: Automorphism) -> bool:
    surface = first.surface
    for path in _test_paths(surface.pd):
        left = first.apply_path(second.apply_path(first.apply_path(path)))
        right = second.apply_path(first.apply_path(second.apply_path(path)))
        if not paths_equal(surface, left, right):
            return False
    return True


def commute(first: Automorphism, second: Automorphism) -> bool:
    surface = first.surface
    return all(
        paths_equal(surface, first.apply_path(second.apply_path(path)), second.apply_path(first.apply_path(path)))
        for path in _test_paths(surface.pd)
    )


def transversal_twist(pd: PantsDecomposition, curve: int, sign: int = 1) -> Automorphism:
    if not pd.is_self_glued(curve):
        auto = _four_holed_transversal(pd, curve, sign)
        if not preserves_relations(auto):
            raise RuntimeError(f"Transversal twist {auto.name} does not preserve the groupoid relations")
        return auto
    twist = pants_twist(pd, curve, 1)
    for index, (candidate, images) in enumerate(_torus_candidates(pd, curve, 1)):
        p = pd.gluing[curve][0][0]
        consistent = all(
            paths_equal(candidate.surface, candidate.apply_path(boundary_path(p, position)), images[position])
            for position in range(3)
        )
        if consistent and preserves_relations(candidate) and satisfies_braid_relation(twist, candidate):
            logger.debug(f"Torus transversal of K{curve} uses image form {index}")
            return candidate if sign > 0 else _torus_candidates(pd, curve, -1)[index][0]
    raise RuntimeError(f"No torus transversal for K{curve} satisfies the braid relation")


@lru_cache(maxsize=64)
def generator_set(pd: PantsDecomposition) -> dict[tuple[str, int], Automorphism]:
    """Every generator and its inverse, keyed by (generator id, sign)."""
    generators = {}
    for curve in pd.curves:
        for sign in (1, -1):
            generators[(f"K{curve}", sign)] = pants_twist(pd, curve, sign)
            generators[(f"D{curve}", sign)] = transversal_twist(pd, curve, sign)
    return generators


def generator_ids(pd: PantsDecomposition) -> list[str]:
    return [f"{kind}{curve}" for curve in pd.curves for kind in ("K", "D")]
