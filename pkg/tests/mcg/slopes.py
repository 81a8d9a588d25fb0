"""Twists of multicurves lying inside the support of a transversal twist, computed on slopes.

The transversal of a curve K glued to itself lives in a one-holed torus, that of any other curve in a four-holed
sphere. A multicurve missing the boundary of that support is a multiple of a single slope there, and every twist
supported inside acts linearly on slopes:

- torus: (m, t) is the class m δ + t K with <δ, K> = 1, and the twist along w sends v to v + <v, w> w
- four-holed sphere: (m, t) is the vector (m / 2, t), intersection numbers are twice the determinant, and the twist
  along w sends v to v + 2 det(v, w) w

Neither formula knows about the groupoid, so both check its twists independently. The transversal itself is the
slope (1, τ) for some offset τ of the coordinates, found as the only curve of that slope the twist fixes.
"""

from snowtrack.geometry import DTCoordinates, PantsDecomposition


def support_boundary(pd: PantsDecomposition, curve: int) -> tuple[int, ...]:
    """Curves bounding the subsurface the transversal twist of `curve` is supported in"""
    pants = {p for p, _ in pd.gluing[curve]}
    return tuple(sorted({c for p in pants for c in pd.pants[p]} - {curve}))


def scale(pd: PantsDecomposition, curve: int) -> int:
    """Intersections of the transversal with `curve`"""
    return 1 if pd.is_self_glued(curve) else 2


def to_slope(pd: PantsDecomposition, curve: int, m: int, t: int) -> tuple[int, int]:
    return m // scale(pd, curve), t


def from_slope(pd: PantsDecomposition, curve: int, v: tuple[int, int]) -> tuple[int, int]:
    x, t = v
    if x < 0:
        x, t = -x, -t
    if x == 0:
        t = abs(t)
    return x * scale(pd, curve), t


def twist_slope(pd: PantsDecomposition, curve: int, v: tuple[int, int], w: tuple[int, int],
                handedness: int) -> tuple[int, int]:
    form = v[0] * w[1] - v[1] * w[0]
    k = handedness * scale(pd, curve) * form
    return v[0] + k * w[0], v[1] + k * w[1]


def transversal_image(pd: PantsDecomposition, curve: int, coords: DTCoordinates, offset: int,
                      handedness: int) -> DTCoordinates:
    """
    Image of `coords` under the twist along the transversal of slope (1, `offset`). Only valid when `coords` misses
    the boundary of the support, which every other coordinate keeps.
    """
    if any(coords.m[c] for c in support_boundary(pd, curve)):
        raise ValueError(f"{coords} crosses the boundary of the support of the transversal of K{curve}")
    v = to_slope(pd, curve, coords.m[curve], coords.t[curve])
    m, t = from_slope(pd, curve, twist_slope(pd, curve, v, (1, offset), handedness))
    ms, ts = list(coords.m), list(coords.t)
    ms[curve], ts[curve] = m, t
    return DTCoordinates(tuple(ms), tuple(ts))


def transversal(pd: PantsDecomposition, curve: int, offset: int) -> DTCoordinates:
    m = [0] * pd.n_curves
    t = [0] * pd.n_curves
    m[curve], t[curve] = scale(pd, curve), offset
    return DTCoordinates(tuple(m), tuple(t))
