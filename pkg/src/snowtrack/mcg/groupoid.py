"""Exact words in the fundamental groupoid of a surface cut into pants.

Every pants p has a base point and a free vertex group on two letters: ``1`` is the boundary loop u_0 and ``2`` is
u_1, with u_0 u_1 u_2 = 1 so that u_2 is the word ``(-2, -1)``. Every curve i gives an edge ε_i from the base point
of the pants holding its first slot A to the pants holding its second slot B, with ε_i u_B ε_i^-1 = u_A^-1.

A path alternates vertex words and edges: ``verts[0] e_0 verts[1] ... e_(n-1) verts[n]``. A closed curve is a
cyclic word ``verts[0] e_0 ... verts[n-1] e_(n-1)``. Reduction removes every pinch, a subword e g e^-1 with g a power
of the boundary loop e arrives at, which leaves words whose edge count is the intersection number with the
decomposition curves.
"""

from dataclasses import dataclass
from typing import Iterable

from snowtrack.geometry.pants import PantsDecomposition, Slot


Word = tuple[int, ...]
Edge = tuple[int, int]

BOUNDARY: dict[int, Word] = {0: (1,), 1: (2,), 2: (-2, -1)}


def inverse(word: Word) -> Word:
    return tuple(-letter for letter in reversed(word))


def mul(*words: Word) -> Word:
    """Free product of reduced words"""
    out: list[int] = []
    for word in words:
        for letter in word:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
    return tuple(out)


def power(word: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(word), -n)
    return mul(*([word] * n))


def boundary(position: int, n: int = 1) -> Word:
    return power(BOUNDARY[position], n)


def boundary_exponent(word: Word, position: int) -> int | None:
    """n such that `word` is u_position^n, or None"""
    if not word:
        return 0
    if position < 2:
        letter = position + 1
        if all(x == letter for x in word):
            return len(word)
        if all(x == -letter for x in word):
            return -len(word)
        return None
    if len(word) % 2:
        return None
    n = len(word) // 2
    if word == power(BOUNDARY[2], n):
        return n
    if word == power(BOUNDARY[2], -n):
        return -n
    return None


def cyclically_reduce(word: Word) -> Word:
    start, end = 0, len(word)
    while end - start > 1 and word[start] == -word[end - 1]:
        start += 1
        end -= 1
    return word[start:end]


# the same element written over (x, y) = (u_a, u_(a+1)) for a = 0, 1, 2
_BASIS_SUBSTITUTION: dict[int, dict[int, Word]] = {
    0: {1: (1,), -1: (-1,), 2: (2,), -2: (-2,)},
    1: {1: (-2, -1), -1: (1, 2), 2: (1,), -2: (-1,)},
    2: {1: (2,), -1: (-2,), 2: (-2, -1), -2: (1, 2)},
}


def in_basis(word: Word, a: int) -> Word:
    substitution = _BASIS_SUBSTITUTION[a]
    return mul(*(substitution[letter] for letter in word))


def syllables(word: Word) -> list[tuple[int, int]]:
    """Run-length encoding: [(generator, exponent), ...]"""
    out: list[tuple[int, int]] = []
    for letter in word:
        generator, step = abs(letter), 1 if letter > 0 else -1
        if out and out[-1][0] == generator:
            out[-1] = (generator, out[-1][1] + step)
        else:
            out.append((generator, step))
    return out


class Surface:
    """Edge bookkeeping of the groupoid of a pants decomposition"""

    def __init__(self, pd: PantsDecomposition):
        self.pd = pd

    def departure(self, edge: Edge) -> Slot:
        first, second = self.pd.gluing[edge[0]]
        return first if edge[1] > 0 else second

    def arrival(self, edge: Edge) -> Slot:
        first, second = self.pd.gluing[edge[0]]
        return second if edge[1] > 0 else first


def inverse_edge(edge: Edge) -> Edge:
    return edge[0], -edge[1]


@dataclass(frozen=True)
class Path:
    """A groupoid element from the base point of pants `start` to the base point of pants `end`"""

    start: int
    end: int
    verts: tuple[Word, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def vertex(cls, pants: int, word: Word) -> "Path":
        return cls(pants, pants, (word,), ())

    def inverse(self) -> "Path":
        return Path(
            self.end,
            self.start,
            tuple(inverse(v) for v in reversed(self.verts)),
            tuple(inverse_edge(e) for e in reversed(self.edges)),
        )

    @property
    def is_identity(self) -> bool:
        return not self.edges and not self.verts[0]


@dataclass(frozen=True)
class Loop:
    """
    A free homotopy class of closed curves: the cyclic word ``verts[0] e_0 ... verts[n-1] e_(n-1)``, or a single
    vertex word of pants `base` when there are no edges.
    """

    base: int
    verts: tuple[Word, ...]
    edges: tuple[Edge, ...]


class Reducer:
    """Stack that builds a reduced path from pushed words and edges"""

    def __init__(self, surface: Surface, start: int):
        self.surface = surface
        self.start = start
        self.verts: list[Word] = [()]
        self.edges: list[Edge] = []

    def push_word(self, word: Word):
        if word:
            self.verts[-1] = mul(self.verts[-1], word)

    def push_edge(self, edge: Edge):
        if self.edges and self.edges[-1] == inverse_edge(edge):
            previous = self.edges[-1]
            n = boundary_exponent(self.verts[-1], self.surface.arrival(previous)[1])
            if n is not None:
                self.edges.pop()
                self.verts.pop()
                self.push_word(boundary(self.surface.departure(previous)[1], -n))
                return
        self.edges.append(edge)
        self.verts.append(())

    def push_path(self, path: Path):
        self.push_word(path.verts[0])
        for edge, word in zip(path.edges, path.verts[1:]):
            self.push_edge(edge)
            self.push_word(word)

    def current_pants(self) -> int:
        return self.surface.arrival(self.edges[-1])[0] if self.edges else self.start

    def path(self) -> Path:
        return Path(self.start, self.current_pants(), tuple(self.verts), tuple(self.edges))


def reduce_path(surface: Surface, path: Path) -> Path:
    reducer = Reducer(surface, path.start)
    reducer.push_path(path)
    return reducer.path()


def compose(surface: Surface, paths: Iterable[Path]) -> Path:
    paths = list(paths)
    reducer = Reducer(surface, paths[0].start)
    for path in paths:
        if path.start != reducer.current_pants():
            raise ValueError(f"Can not compose a path starting at pants {path.start} after one ending at "
                             f"{reducer.current_pants()}")
        reducer.push_path(path)
    return reducer.path()


def close_loop(surface: Surface, reducer: Reducer) -> Loop:
    """Turns a reduced closed path into a cyclically reduced `Loop`."""
    if reducer.current_pants() != reducer.start:
        raise ValueError("Path is not closed")
    verts, edges = list(reducer.verts), list(reducer.edges)
    if not edges:
        return Loop(reducer.start, (cyclically_reduce(verts[0]),), ())
    verts = [mul(verts[-1], verts[0])] + verts[1:-1]
    while len(edges) >= 2 and edges[0] == inverse_edge(edges[-1]):
        last = edges[-1]
        n = boundary_exponent(verts[0], surface.arrival(last)[1])
        if n is None:
            break
        h = boundary(surface.departure(last)[1], -n)
        if len(edges) == 2:
            return Loop(surface.departure(last)[0], (cyclically_reduce(mul(verts[1], h)),), ())
        verts = [mul(verts[-1], h, verts[1])] + verts[2:-1]
        edges = edges[1:-1]
    return Loop(surface.departure(edges[0])[0], tuple(verts), tuple(edges))


def loop_from_path(surface: Surface, path: Path) -> Loop:
    reducer = Reducer(surface, path.start)
    reducer.push_path(path)
    return close_loop(surface, reducer)


def loop_as_path(loop: Loop) -> Path:
    return Path(loop.base, loop.base, loop.verts + ((),) if loop.edges else loop.verts, loop.edges)
