from typing import Sequence

from snowtrack.errors import CoordinateError
from snowtrack.geometry import DTCoordinates, PantsDecomposition, check_admissible
from snowtrack.mcg.curves import construct, readback
from snowtrack.mcg.generators import GENERATOR_SET_VERSION, generator_ids, generator_set
from snowtrack.waves import CdsPair


TwistWord = tuple[tuple[str, int], ...]


def validate_word(pd: PantsDecomposition, word: Sequence[tuple[str, int]]) -> TwistWord:
    valid = set(generator_ids(pd))
    out = []
    for gen, sign in word:
        if gen not in valid:
            raise ValueError(f"Unknown generator {gen!r} for a genus {pd.genus} decomposition")
        if sign not in (1, -1):
            raise ValueError(f"Twist signs are +1 or -1, got {sign}")
        out.append((gen, int(sign)))
    return tuple(out)


def inverse_word(word: TwistWord) -> TwistWord:
    return tuple((gen, -sign) for gen, sign in reversed(word))


def apply_word(pd: PantsDecomposition, coords: DTCoordinates, word: Sequence[tuple[str, int]]) -> DTCoordinates:
    """
    Image of the multicurve `coords` under the twist word, letters applied left to right.

    The curve is drawn once in the surface groupoid and every twist acts on the reduced words, so the cost grows with
    the intersection numbers of the intermediate curves (exponential in the word length for generic words).
    """
    check_admissible(coords, pd)
    word = validate_word(pd, word)
    if not word:
        return coords
    generators = generator_set(pd)
    loops = construct(pd, coords)
    for gen, sign in word:
        auto = generators[(gen, sign)]
        loops = tuple(auto.apply_loop(loop) for loop in loops)
    return readback(pd, loops)


def twist(pd: PantsDecomposition, coords: DTCoordinates, generator: str, sign: int = 1) -> DTCoordinates:
    return apply_word(pd, coords, ((generator, sign),))


def frame_curves(pd: PantsDecomposition) -> tuple[DTCoordinates, ...]:
    return tuple(DTCoordinates.pants_curve(pd.n_curves, curve) for curve in pd.curves)


def image_of_frame(pd: PantsDecomposition, word: TwistWord) -> tuple[DTCoordinates, ...]:
    return tuple(apply_word(pd, curve, word) for curve in frame_curves(pd))


def pair_frames(pd: PantsDecomposition, word: Sequence[tuple[str, int]], placement: Sequence = ()) -> CdsPair:
    """
    𝒟 = word(ℰ) in the frame ℰ, together with ℰ in the frame 𝒟, which is word⁻¹(ℰ) read in ℰ.
    """
    word = validate_word(pd, word)
    return CdsPair(
        frame=pd,
        d_in_e=image_of_frame(pd, word),
        e_in_d=image_of_frame(pd, inverse_word(word)),
        word=word,
        placement=validate_word(pd, placement),
        metadata={"generator_set_version": GENERATOR_SET_VERSION},
    )


def check_pair(pair: CdsPair):
    """Round trip of the provenance word: both expressions must come back to the frame curves."""
    pd = pair.frame
    if not pair.word:
        return
    back = inverse_word(pair.word)
    for j, (d, e) in enumerate(zip(pair.d_in_e, pair.e_in_d)):
        expected = DTCoordinates.pants_curve(pd.n_curves, j)
        if apply_word(pd, d, back) != expected or apply_word(pd, e, pair.word) != expected:
            raise CoordinateError(f"Curve {j} does not return to the frame under the inverse word")


def intersection_with_frame(curve: DTCoordinates) -> tuple[int, ...]:
    """Geometric intersection numbers with the frame curves (the m coordinates of the normal form)."""
    return curve.m


def word_to_json(word: TwistWord) -> list[dict]:
    return [{"gen": gen, "sign": sign} for gen, sign in word]


def word_from_json(data: list[dict]) -> TwistWord:
    return tuple((item["gen"], int(item["sign"])) for item in data)
