import itertools
import unittest

import numpy as np

from snowtrack.geometry import DTCoordinates, is_admissible_dt, standard_decomposition
from snowtrack.mcg.action import (
    apply_word,
    check_pair,
    frame_curves,
    intersection_with_frame,
    inverse_word,
    pair_frames,
    twist,
    validate_word,
    word_from_json,
    word_to_json,
)
from snowtrack.mcg.generators import GENERATOR_SET_VERSION, generator_ids
from snowtrack.waves import snow_check

from .slopes import support_boundary, transversal, transversal_image


def backgrounds(pd, curve, options):
    """Admissible coordinates of every curve but `curve`, drawn from `options`, with zeros at `curve`"""
    others = [c for c in pd.curves if c != curve]
    for choice in itertools.product(options, repeat=len(others)):
        m, t = [0] * pd.n_curves, [0] * pd.n_curves
        for c, (mc, tc) in zip(others, choice):
            m[c], t[c] = mc, tc
        yield m, t


def with_curve(m, t, curve, mc, tc):
    m, t = list(m), list(t)
    m[curve], t[curve] = mc, tc
    return DTCoordinates(tuple(m), tuple(t))


def random_coordinates(pd, rng):
    while True:
        coords = DTCoordinates(tuple(int(x) for x in rng.integers(0, 7, pd.n_curves)),
                               tuple(int(x) for x in rng.integers(-6, 7, pd.n_curves)))
        if is_admissible_dt(coords, pd) and not coords.is_empty:
            return coords


SMALL = [(m, t) for m in range(7) for t in range(-6, 7)]


class TestTwists(unittest.TestCase):
    def setUp(self):
        self.theta = standard_decomposition(2, "theta")
        self.chain = standard_decomposition(2, "chain")
        self.samples = [
            DTCoordinates((2, 0, 0), (0, 0, 0)),
            DTCoordinates((2, 2, 2), (1, -1, 0)),
            DTCoordinates((4, 1, 1), (0, 2, -1)),
            DTCoordinates((0, 2, 0), (1, 0, 3)),
        ]

    def test_generator_ids(self):
        self.assertEqual(generator_ids(self.theta), ["K0", "D0", "K1", "D1", "K2", "D2"])
        self.assertEqual(GENERATOR_SET_VERSION, "dt-groupoid/1")

    def test_pants_twist_adds_m(self):
        options = [(0, 0), (0, 2), (1, -1), (2, 3), (3, 0)]
        for pd in (self.theta, self.chain):
            for curve in pd.curves:
                for m, t in backgrounds(pd, curve, options):
                    for mc, tc in SMALL:
                        coords = with_curve(m, t, curve, mc, tc)
                        if not is_admissible_dt(coords, pd):
                            continue
                        for sign in (1, -1):
                            expected = with_curve(coords.m, coords.t, curve, mc, tc + sign * mc)
                            self.assertEqual(twist(pd, coords, f"K{curve}", sign), expected)

    def test_pants_twist_fixes_frame(self):
        for curve in frame_curves(self.theta):
            self.assertEqual(twist(self.theta, curve, "K0"), curve)

    def test_transversal_images(self):
        # twisting a pants curve around its transversal
        self.assertEqual(twist(self.theta, DTCoordinates.pants_curve(3, 0), "D0").m, (4, 0, 0))
        self.assertEqual(twist(self.chain, DTCoordinates.pants_curve(3, 0), "D0").m, (1, 0, 0))
        self.assertEqual(twist(self.chain, DTCoordinates.pants_curve(3, 1), "D1").m, (0, 4, 0))

    def test_intersection_with_frame(self):
        self.assertEqual(intersection_with_frame(DTCoordinates.pants_curve(3, 1)), (0, 0, 0))
        image = twist(self.chain, DTCoordinates.pants_curve(3, 1), "D1")
        self.assertEqual(intersection_with_frame(image), (0, 4, 0))

    def test_word_and_inverse(self):
        word = (("D0", 1), ("K1", -1), ("D2", 1), ("K0", 1))
        for coords in self.samples:
            image = apply_word(self.theta, coords, word)
            self.assertEqual(apply_word(self.theta, image, inverse_word(word)), coords)

    def test_validate_word(self):
        with self.assertRaises(ValueError):
            validate_word(self.theta, [("K3", 1)])
        with self.assertRaises(ValueError):
            validate_word(self.theta, [("K0", 2)])
        word = validate_word(self.theta, [("D1", -1), ("K2", 1)])
        self.assertEqual(word_from_json(word_to_json(word)), word)


class TestTransversalsOnSlopes(unittest.TestCase):
    def calibrate(self, pd, curve):
        """Offset of the transversal and handedness of the twist, each of which must be unique"""
        offsets = [tau for tau in range(-6, 7)
                   if twist(pd, transversal(pd, curve, tau), f"D{curve}") == transversal(pd, curve, tau)]
        self.assertEqual(len(offsets), 1, f"D{curve} fixes {offsets}")
        frame_curve = DTCoordinates.pants_curve(pd.n_curves, curve)
        image = twist(pd, frame_curve, f"D{curve}")
        hands = [h for h in (1, -1) if transversal_image(pd, curve, frame_curve, offsets[0], h) == image]
        self.assertEqual(len(hands), 1)
        return offsets[0], hands[0]

    def check_slice(self, pd, curve):
        offset, hand = self.calibrate(pd, curve)
        if pd.is_self_glued(curve):
            # the braid relation with the pants twist needs both twists of the same hand
            self.assertEqual(hand, 1)
        boundary = support_boundary(pd, curve)
        options = [(0, 0), (0, 1), (0, 2), (1, -2), (3, 1), (4, 5)]
        checked = 0
        for m, t in backgrounds(pd, curve, options):
            if any(m[c] for c in boundary):
                continue
            for mc, tc in SMALL:
                coords = with_curve(m, t, curve, mc, tc)
                if coords.is_empty or not is_admissible_dt(coords, pd):
                    continue
                for sign in (1, -1):
                    expected = transversal_image(pd, curve, coords, offset, sign * hand)
                    self.assertEqual(twist(pd, coords, f"D{curve}", sign), expected, f"D{curve}^{sign} {coords}")
                    checked += 1
        return checked

    def test_torus_transversals(self):
        pd = standard_decomposition(2, "chain")
        handles = [c for c in pd.curves if pd.is_self_glued(c)]
        self.assertEqual(len(handles), 2)
        for curve in handles:
            self.assertGreater(self.check_slice(pd, curve), 1000)

    def test_four_holed_transversals(self):
        for kind in ("theta", "chain"):
            pd = standard_decomposition(2, kind)
            for curve in pd.curves:
                if not pd.is_self_glued(curve):
                    self.assertGreater(self.check_slice(pd, curve), 100)

    def test_slope_arithmetic(self):
        pd = standard_decomposition(2, "theta")
        self.assertEqual(support_boundary(pd, 0), (1, 2))
        # a twist along the transversal of slope (1, 0) sends K to a curve meeting K four times
        image = transversal_image(pd, 0, DTCoordinates.pants_curve(3, 0), 0, 1)
        self.assertEqual((image.m[0], image.t[0]), (4, -1))
        with self.assertRaises(ValueError):
            transversal_image(pd, 0, DTCoordinates((2, 2, 0), (0, 0, 0)), 0, 1)


class TestRelations(unittest.TestCase):
    def test_relations_hold_pointwise(self):
        pd = standard_decomposition(2, "chain")
        handles = [c for c in pd.curves if pd.is_self_glued(c)]
        rng = np.random.default_rng(5)
        for _ in range(1000):
            coords = random_coordinates(pd, rng)
            i = int(rng.integers(pd.n_curves))
            j = int(rng.choice([c for c in pd.curves if c != i]))
            k, d = (f"K{i}", 1), (f"D{i}", 1)
            image = apply_word(pd, coords, (d,))
            self.assertEqual(apply_word(pd, image, ((f"D{i}", -1),)), coords)
            self.assertEqual([image.m[c] for c in pd.curves if c != i], [coords.m[c] for c in pd.curves if c != i])
            doubled = DTCoordinates(tuple(2 * x for x in coords.m), tuple(2 * x for x in coords.t))
            self.assertEqual(apply_word(pd, doubled, (d,)), image + image)
            for first, second in ((k, (f"K{j}", 1)), (d, (f"K{j}", 1)), (k, (f"D{j}", -1))):
                self.assertEqual(apply_word(pd, coords, (first, second)), apply_word(pd, coords, (second, first)))
            if i in handles:
                self.assertEqual(apply_word(pd, coords, (k, d, k)), apply_word(pd, coords, (d, k, d)))
                other = next(c for c in handles if c != i)
                self.assertEqual(apply_word(pd, coords, (d, (f"D{other}", 1))),
                                 apply_word(pd, coords, ((f"D{other}", 1), d)))

    def test_theta_transversals_commute_with_other_pants_twists(self):
        pd = standard_decomposition(2, "theta")
        rng = np.random.default_rng(6)
        for _ in range(200):
            coords = random_coordinates(pd, rng)
            i, j = (int(x) for x in rng.choice(pd.n_curves, size=2, replace=False))
            self.assertEqual(apply_word(pd, coords, ((f"D{i}", 1), (f"K{j}", 1))),
                             apply_word(pd, coords, ((f"K{j}", 1), (f"D{i}", 1))))


class TestPairFrames(unittest.TestCase):
    def setUp(self):
        self.pd = standard_decomposition(2, "theta")

    def test_identity_pair(self):
        pair = pair_frames(self.pd, ())
        self.assertEqual(pair.d_in_e, frame_curves(self.pd))
        self.assertEqual(pair.e_in_d, frame_curves(self.pd))
        self.assertEqual(snow_check(pair), (True, None))

    def test_pants_twist_pair(self):
        pair = pair_frames(self.pd, [("K1", 1)])
        self.assertEqual(pair.d_in_e, frame_curves(self.pd))
        self.assertEqual(pair.metadata["generator_set_version"], GENERATOR_SET_VERSION)
        check_pair(pair)

    def test_longer_word(self):
        word = [("D0", 1), ("K1", 1), ("D2", -1), ("K0", -1), ("D1", 1), ("K2", 1)]
        pair = pair_frames(self.pd, word, placement=[("K0", 1)])
        check_pair(pair)
        pair.check_consistency()
        self.assertEqual(snow_check(pair)[0], snow_check(pair.swapped())[0])
