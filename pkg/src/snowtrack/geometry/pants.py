"""Combinatorial closed surfaces cut into pairs of pants.

A slot is a boundary component of a pants, numbered ``3 * pants + position``. Positions 0, 1, 2 are taken in the
cyclic order induced by the orientation of the surface, which the mapping class group engine relies on.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from snowtrack.errors import GluingError


Slot = tuple[int, int]


@dataclass(frozen=True)
class PantsDecomposition:
    """
    A closed genus-g surface given by 2g-2 pants and 3g-3 curves.

    Args:
        genus: genus of the closed surface
        pants: for each pants, the curve ids glued to its three slots
        gluing: for each curve id, the (first, second) slots it joins. The curve is crossed from the first slot
            towards the second one by the positive edge of the surface groupoid.
    """

    genus: int
    pants: tuple[tuple[int, int, int], ...]
    gluing: tuple[tuple[Slot, Slot], ...]

    @property
    def n_curves(self) -> int:
        return len(self.gluing)

    @property
    def n_pants(self) -> int:
        return len(self.pants)

    @property
    def curves(self) -> tuple[int, ...]:
        return tuple(range(self.n_curves))

    def curve_at(self, pants: int, position: int) -> int:
        return self.pants[pants][position]

    def other_side(self, slot: Slot) -> Slot:
        """Slot on the other side of the curve glued at `slot`."""
        first, second = self.gluing[self.curve_at(*slot)]
        return second if slot == first else first

    def is_self_glued(self, curve: int) -> bool:
        first, second = self.gluing[curve]
        return first[0] == second[0]

    @cached_property
    def dual_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((first[0], second[0]) for first, second in self.gluing)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "pants": [{"slots": list(slots)} for slots in self.pants],
            "gluing": [[list(first), list(second)] for first, second in self.gluing],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PantsDecomposition":
        gluing = [(tuple(first), tuple(second)) for first, second in data["gluing"]]
        return build_pants_decomposition(data["genus"], gluing)


def build_pants_decomposition(genus: int, gluing: Sequence[tuple[Slot, Slot]]) -> PantsDecomposition:
    """
    Validates a slot involution and returns the decomposition it describes, with curves labeled canonically in the
    order in which a lexicographic scan of the slots first meets them.

    Args:
        genus: genus of the closed surface, at least 2
        gluing: 3g-3 pairs of slots `((pants, position), (pants, position))`, each slot used exactly once

    Returns: the validated `PantsDecomposition`
    """
    if genus < 2:
        raise GluingError(f"Closed surfaces with pants decompositions have genus >= 2, got {genus=}")
    n_pants, n_curves = 2 * genus - 2, 3 * genus - 3
    if len(gluing) != n_curves:
        raise GluingError(f"Genus {genus} needs {n_curves} curves, the gluing has {len(gluing)}")

    partner: dict[Slot, Slot] = {}
    for pair in gluing:
        if len(pair) != 2:
            raise GluingError(f"Each curve joins exactly two slots, got {pair}")
        first, second = (tuple(slot) for slot in pair)
        for pants, position in (first, second):
            if not (0 <= pants < n_pants and 0 <= position < 3):
                raise GluingError(f"Slot {(pants, position)} does not exist on {n_pants} pants with 3 slots each")
        if first == second or first in partner or second in partner:
            raise GluingError(f"Slots must be used exactly once, {first}/{second} repeats")
        partner[first], partner[second] = second, first
    if len(partner) != 3 * n_pants:
        raise GluingError(f"Slot count mismatch: {len(partner)} glued slots for {n_pants} pants")

    # canonical labels, keeping the orientation (first -> second) of each given pair
    orientation = {tuple(pair[0]): tuple(pair[1]) for pair in gluing}
    labels: dict[Slot, int] = {}
    canonical: list[tuple[Slot, Slot]] = []
    for slot in sorted(partner):
        if slot in labels:
            continue
        other = partner[slot]
        labels[slot] = labels[other] = len(canonical)
        canonical.append((slot, other) if orientation.get(slot) == other else (other, slot))
    pants = tuple(tuple(labels[(p, k)] for k in range(3)) for p in range(n_pants))

    # dual graph connectivity
    neighbours: dict[int, set[int]] = {p: set() for p in range(n_pants)}
    for first, second in canonical:
        neighbours[first[0]].add(second[0])
        neighbours[second[0]].add(first[0])
    seen, queue = {0}, deque([0])
    while queue:
        for q in neighbours[queue.popleft()] - seen:
            seen.add(q)
            queue.append(q)
    if len(seen) != n_pants:
        raise GluingError(f"Disconnected dual graph: pants {sorted(set(range(n_pants)) - seen)} are unreachable")
    return PantsDecomposition(genus=genus, pants=pants, gluing=tuple(canonical))


def theta_gluing() -> list[tuple[Slot, Slot]]:
    """Genus 2: two pants glued to each other along all three of their boundaries."""
    return [((0, k), (1, k)) for k in range(3)]


def chain_gluing(genus: int) -> list[tuple[Slot, Slot]]:
    """
    A chain of pants: a handle pants at each end, then pairs of pants glued along two curves in the middle.
    At genus 2 this is the dumbbell (two handle pants joined by a separating curve).
    """
    if genus < 2:
        raise GluingError(f"Genus must be >= 2, got {genus}")
    last = 2 * genus - 3
    gluing: list[tuple[Slot, Slot]] = [((0, 0), (0, 1)), ((last, 0), (last, 1))]
    previous = (0, 2)
    for k in range(1, genus - 1):
        left, right = 2 * k - 1, 2 * k
        gluing.append((previous, (left, 0)))
        gluing.append(((left, 1), (right, 0)))
        gluing.append(((left, 2), (right, 1)))
        previous = (right, 2)
    gluing.append((previous, (last, 2)))
    return gluing


STANDARD_GLUINGS = {
    "theta": lambda genus: theta_gluing() if genus == 2 else None,
    "linear": lambda genus: theta_gluing() if genus == 2 else None,
    "chain": chain_gluing,
}


def standard_decomposition(genus: int, kind: str = "chain") -> PantsDecomposition:
    if kind not in STANDARD_GLUINGS:
        raise GluingError(f"Unknown gluing {kind!r}, choose one of {sorted(STANDARD_GLUINGS)}")
    gluing = STANDARD_GLUINGS[kind](genus)
    if gluing is None:
        raise GluingError(f"The {kind!r} gluing only exists in genus 2")
    return build_pants_decomposition(genus, gluing)
