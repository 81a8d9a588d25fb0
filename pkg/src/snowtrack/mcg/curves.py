"""Dehn-Thurston coordinates <-> reduced cyclic words.

`construct` draws the normal-form multicurve of a coordinate vector arc by arc and records every component as a
`Loop`. `readback` recovers the coordinates from any reduced family of loops: m_i counts the K_i edges and the twist
comes from how far each arc winds around the boundaries it leaves and enters, relative to the standard arc of its type.
"""

from snowtrack.errors import CoordinateError
from snowtrack.geometry import DTCoordinates, PantsDecomposition, arc_type_counts, boundary_values, check_admissible
from snowtrack.geometry.pants import Slot
from snowtrack.mcg.groupoid import (
    BOUNDARY,
    Loop,
    Surface,
    Word,
    boundary,
    cyclically_reduce,
    in_basis,
    inverse,
    loop_as_path,
    loop_from_path,
    mul,
    syllables,
)


Curve = tuple[Loop, ...]
Endpoint = tuple[Slot, int]


def _wave_core(k: int, upper_to_lower: bool) -> Word:
    uk, uk1 = BOUNDARY[k], BOUNDARY[(k + 1) % 3]
    return mul(uk, uk1 if upper_to_lower else inverse(uk1), inverse(uk))


def _seam_core(a: int, b: int) -> Word:
    return BOUNDARY[a] if b == (a + 1) % 3 else inverse(BOUNDARY[b])


def _pants_arcs(pd: PantsDecomposition, coords: DTCoordinates, pants: int) -> dict[Endpoint, tuple[Endpoint, Word]]:
    """
    Pairs up the arc endpoints on the three boundaries of `pants`. Positions on a boundary are counted forward from
    its marker: first the seams towards the previous boundary, then (on a wave boundary) the upper wave ends, then the
    seams towards the next boundary and finally the lower wave ends.
    """
    counts = arc_type_counts(*boundary_values(coords, pd, pants))
    layout: dict[int, dict[str, range]] = {}
    for k in range(3):
        to_previous = counts.count(k, (k - 1) % 3)
        waves = counts.loops[k]
        to_next = counts.count(k, (k + 1) % 3)
        layout[k] = {
            "previous": range(0, to_previous),
            "upper": range(to_previous, to_previous + waves),
            "next": range(to_previous + waves, to_previous + waves + to_next),
            "lower": range(to_previous + waves + to_next, to_previous + 2 * waves + to_next),
        }

    arcs: dict[Endpoint, tuple[Endpoint, Word]] = {}
    for k in range(3):
        nxt = (k + 1) % 3
        here, there = layout[k]["next"], layout[nxt]["previous"]
        # seam bundles reverse their order between the two boundaries
        for i, position in enumerate(here):
            other = there[len(there) - 1 - i]
            arcs[((pants, k), position)] = (((pants, nxt), other), _seam_core(k, nxt))
            arcs[((pants, nxt), other)] = (((pants, k), position), _seam_core(nxt, k))
        upper, lower = layout[k]["upper"], layout[k]["lower"]
        for i, position in enumerate(upper):
            other = lower[len(lower) - 1 - i]
            arcs[((pants, k), position)] = (((pants, k), other), _wave_core(k, True))
            arcs[((pants, k), other)] = (((pants, k), position), _wave_core(k, False))
    return arcs


def construct(pd: PantsDecomposition, coords: DTCoordinates) -> Curve:
    """Every connected component of the multicurve with coordinates `coords`, as reduced loops."""
    check_admissible(coords, pd)
    surface = Surface(pd)
    arcs: dict[Endpoint, tuple[Endpoint, Word]] = {}
    for pants in range(pd.n_pants):
        arcs.update(_pants_arcs(pd, coords, pants))

    loops: list[Loop] = []
    # parallel copies of pants curves
    for curve, (m, t) in enumerate(zip(coords.m, coords.t)):
        if m == 0:
            first, _ = pd.gluing[curve]
            loops.extend(Loop(first[0], (BOUNDARY[first[1]],), ()) for _ in range(t))

    visited: set[Endpoint] = set()
    for start in sorted(arcs):
        if start in visited:
            continue
        verts: list[Word] = []
        edges: list[tuple[int, int]] = []
        pending: Word = ()
        current = start
        while True:
            (slot, position), core = arcs[current]
            visited.add(current)
            visited.add((slot, position))
            word = mul(pending, core)
            curve = pd.curve_at(*slot)
            first, second = pd.gluing[curve]
            m, t = coords.m[curve], coords.t[curve]
            other_position = (-position - 1 - t) % m
            winding = (other_position + position + t + 1) // m
            if slot == first:
                verts.append(word)
                edges.append((curve, 1))
                pending = boundary(second[1], -winding)
                current = (second, other_position)
            else:
                verts.append(mul(word, boundary(second[1], winding)))
                edges.append((curve, -1))
                pending = ()
                current = (first, other_position)
            if current == start:
                break
        verts[0] = mul(pending, verts[0])
        # normal-form words are reduced already, this only normalizes the cyclic representation
        loops.append(loop_from_path(surface, loop_as_path(Loop(surface.departure(edges[0])[0], tuple(verts),
                                                                  tuple(edges)))))
    return tuple(loops)


def _arc_offsets(word: Word, a: int, b: int) -> tuple[int, int]:
    """
    How far an arc arriving at boundary `a` and leaving at boundary `b` winds at each end, relative to the standard
    arc between them.

    Returns: (winding at the arrival end, winding at the departure end)
    """
    if a == b:
        parts = syllables(in_basis(word, a))
        shape = [gen for gen, _ in parts]
        if shape in ([2], [1, 2], [2, 1], [1, 2, 1]):
            if shape == [1, 2, 1]:
                head, middle, tail = parts[0][1], parts[1][1], parts[2][1]
            elif shape == [1, 2]:
                head, middle, tail = parts[0][1], parts[1][1], 0
            elif shape == [2, 1]:
                head, middle, tail = 0, parts[0][1], parts[1][1]
            else:
                head, middle, tail = 0, parts[0][1], 0
            if abs(middle) == 1:
                return head - 1, tail + 1
        raise CoordinateError(f"Vertex word {word} is not a simple arc returning to boundary {a}")
    if b == (a + 1) % 3:
        parts = syllables(in_basis(word, a))
        head = parts[0][1] if parts and parts[0][0] == 1 else 0
        rest = parts[1:] if parts and parts[0][0] == 1 else parts
        if len(rest) > 1 or (rest and rest[0][0] != 2):
            raise CoordinateError(f"Vertex word {word} is not a seam from boundary {a} to {b}")
        return head - 1, rest[0][1] if rest else 0
    parts = syllables(in_basis(word, b))
    head = parts[0][1] if parts and parts[0][0] == 2 else 0
    rest = parts[1:] if parts and parts[0][0] == 2 else parts
    if len(rest) > 1 or (rest and rest[0][0] != 1):
        raise CoordinateError(f"Vertex word {word} is not a seam from boundary {a} to {b}")
    return head, (rest[0][1] if rest else 0) + 1


def _peripheral_curve(pd: PantsDecomposition, loop: Loop) -> int:
    word = cyclically_reduce(loop.verts[0])
    for k in range(3):
        for candidate in (BOUNDARY[k], inverse(BOUNDARY[k])):
            rotations = {candidate[i:] + candidate[:i] for i in range(len(candidate))}
            if word in rotations:
                return pd.curve_at(loop.base, k)
    if not word:
        raise CoordinateError(f"Trivial loop in pants {loop.base}")
    raise CoordinateError(f"Loop {word} in pants {loop.base} is neither simple nor peripheral")


def readback(pd: PantsDecomposition, curve: Curve) -> DTCoordinates:
    """Dehn-Thurston coordinates of a family of disjoint reduced loops."""
    surface = Surface(pd)
    m = [0] * pd.n_curves
    winding = [0] * pd.n_curves
    copies = [0] * pd.n_curves
    for loop in curve:
        if not loop.edges:
            copies[_peripheral_curve(pd, loop)] += 1
            continue
        for j, edge in enumerate(loop.edges):
            m[edge[0]] += 1
            arriving = loop.edges[j - 1]
            a = surface.arrival(arriving)[1]
            b = surface.departure(edge)[1]
            alpha, beta = _arc_offsets(loop.verts[j], a, b)
            winding[arriving[0]] += alpha
            winding[edge[0]] -= beta
    t = [copies[i] - winding[i] - m[i] for i in range(pd.n_curves)]
    return DTCoordinates(tuple(m), tuple(t))
