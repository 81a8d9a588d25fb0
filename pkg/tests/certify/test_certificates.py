import itertools
import unittest

import numpy as np

from snowtrack.certify import (
    DistanceCertificate,
    cert_cc_distance_lb,
    cert_heegaard_distance_lb,
    construct_calm_cds,
    disjointness_upper_bound,
    gnp_membership,
    gregarious_guide,
    is_calm,
    overlay_pair,
    random_word,
    replay_certificate,
    retwist,
    search_calm_cds,
)
from snowtrack.errors import CertificateError
from snowtrack.geometry import DTCoordinates, standard_decomposition
from snowtrack.mcg import image_of_frame, inverse_word
from snowtrack.tracks import (
    build_tower,
    chart_coordinates,
    dual_pair,
    is_carried,
    random_positive_weights,
    standard_track,
)
from snowtrack.waves import snow_check


class TestUpperBound(unittest.TestCase):
    def setUp(self):
        self.pd = standard_decomposition(2, "theta")

    def test_frame(self):
        self.assertEqual(disjointness_upper_bound(self.pd, (), 1, 1), 0)
        self.assertEqual(disjointness_upper_bound(self.pd, (), 0, 2), 1)

    def test_pants_twist_fixes_the_frame(self):
        self.assertEqual(disjointness_upper_bound(self.pd, (("K0", 1), ("K1", -1)), 0, 0), 0)

    def test_transversal_twist(self):
        word = (("D0", 1),)
        self.assertEqual(disjointness_upper_bound(self.pd, word, 0, 0), 2)
        self.assertEqual(disjointness_upper_bound(self.pd, word, 1, 1), 0)


class TestCurveComplexBound(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.pd = standard_decomposition(2, "theta")
        cls.track = standard_track(cls.pd)
        cls.system = construct_calm_cds(cls.track, seed=0)
        guide = gregarious_guide(cls.system.weights, cls.track, np.random.default_rng(1))
        cls.tower = build_tower(cls.track, guide, 2)
        cls.low = build_tower(cls.track, guide, 1)

    def test_same_curve(self):
        cert = cert_cc_distance_lb(self.system.union, self.tower, self.system.union)
        self.assertEqual(cert.bound, 0)
        self.assertTrue(replay_certificate(cert))

    def test_uncarried_at_the_base(self):
        twisted_away = DTCoordinates((2, 2, 2), (1, 1, 1))
        self.assertIsNone(is_carried(twisted_away, self.track))
        cert = cert_cc_distance_lb(self.system.union, self.low, twisted_away)
        self.assertEqual(cert.bound, 2)
        self.assertEqual(cert.witnesses["first_uncarried_level"], 0)
        self.assertEqual(cert_cc_distance_lb(self.system.union, self.tower, twisted_away).bound, 3)

    def test_frame_curves_are_carried_at_the_base(self):
        for b in self.pd.curves:
            cert = cert_cc_distance_lb(self.system.union, self.low, DTCoordinates.pants_curve(self.pd.n_curves, b))
            self.assertLessEqual(cert.bound, 1)
            self.assertNotEqual(cert.witnesses["first_uncarried_level"], 0)

    def test_bound_below_disjointness_paths(self):
        rng = np.random.default_rng(12)
        pairs = 0
        for seed in range(5):
            system = search_calm_cds(self.track, seed=seed, budget=5000)
            tower = build_tower(self.track, gregarious_guide(system.weights, self.track, rng), 2)
            for _ in range(20):
                word = random_word(self.pd, rng, int(rng.integers(0, 4)))
                b = int(rng.integers(self.pd.n_curves))
                cert = cert_cc_distance_lb(system.union, tower, image_of_frame(self.pd, word)[b])
                path = system.word + inverse_word(word)
                upper = min(disjointness_upper_bound(self.pd, path, a, b) for a in self.pd.curves)
                self.assertLessEqual(cert.bound, upper)
                pairs += 1
        self.assertGreaterEqual(pairs, 100)

    def test_monotone_in_height(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            curve = chart_coordinates(self.track, random_positive_weights(self.track, rng, scale=10))
            low = cert_cc_distance_lb(self.system.union, self.low, curve).bound
            high = cert_cc_distance_lb(self.system.union, self.tower, curve).bound
            self.assertGreaterEqual(high, low)

    def test_top_must_carry(self):
        with self.assertRaises(CertificateError) as context:
            cert_cc_distance_lb(DTCoordinates((2, 2, 2), (1, 1, 1)), self.tower, self.system.union)
        self.assertEqual(context.exception.hypothesis, "d_carried")

    def test_tampered_certificate(self):
        data = cert_cc_distance_lb(self.system.union, self.low, DTCoordinates((2, 2, 2), (1, 1, 1))).to_dict()
        self.assertTrue(replay_certificate(data))
        data["bound"] = 5
        self.assertFalse(replay_certificate(data))
        self.assertFalse(replay_certificate({"kind": "heegaard", "bound": 1, "data": {}}))


class TestHeegaardBound(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.pd = standard_decomposition(2, "theta")
        cls.pair = dual_pair(cls.pd)
        rng = np.random.default_rng(8)
        cls.d = construct_calm_cds(cls.pair.track, seed=0)
        cls.e = construct_calm_cds(cls.pair.dual, seed=1)
        d_guide = gregarious_guide(cls.d.weights, cls.pair.track, rng)
        e_guide = gregarious_guide(cls.e.weights, cls.pair.dual, rng)
        cls.d_towers = {n: build_tower(cls.pair.track, d_guide, n) for n in (1, 3)}
        cls.e_tower = build_tower(cls.pair.dual, e_guide, 2)
        cls.e_short = build_tower(cls.pair.dual, e_guide, 1)

    def test_height_one(self):
        cert = cert_heegaard_distance_lb(self.d, self.d_towers[1], self.e, self.e_tower, self.pair)
        self.assertEqual(cert.bound, 0)
        self.assertTrue(replay_certificate(cert))

    def test_height_three(self):
        cert = cert_heegaard_distance_lb(self.d, self.d_towers[3], self.e, self.e_tower, self.pair)
        self.assertEqual(cert.bound, 2)
        self.assertTrue(all(cert.hypotheses.values()))
        self.assertIn("2-gregarious", cert.metadata["justification"])
        self.assertTrue(replay_certificate(DistanceCertificate.from_dict(cert.to_dict()).to_dict()))

    def test_short_e_tower(self):
        with self.assertRaises(CertificateError) as context:
            cert_heegaard_distance_lb(self.d, self.d_towers[1], self.e, self.e_short, self.pair)
        self.assertEqual(context.exception.hypothesis, "e_tower_height")

    def test_tower_on_the_wrong_track(self):
        with self.assertRaises(CertificateError) as context:
            cert_heegaard_distance_lb(self.d, self.e_tower, self.e, self.e_tower, self.pair)
        self.assertEqual(context.exception.hypothesis, "towers_based")

    def test_overlay_needs_words(self):
        with self.assertRaises(CertificateError) as context:
            overlay_pair(self.d, self.e)
        self.assertEqual(context.exception.hypothesis, "word")


class TestCalmPairs(unittest.TestCase):
    @staticmethod
    def variants(system, track, sign, count):
        out = []
        for powers in itertools.product(range(4), repeat=track.pd.n_curves):
            moved = retwist(system, track, [sign * p for p in powers])
            if moved is not None and is_calm(moved, track):
                out.append(moved)
            if len(out) == count:
                break
        return out

    def test_calm_pairs_are_snow(self):
        pair = dual_pair(standard_decomposition(2, "theta"))
        d = search_calm_cds(pair.track, seed=0, budget=5000)
        e = search_calm_cds(pair.dual, seed=1, budget=5000)
        # t moves away from 0 on the tight chart and away from m on the dual one
        ds = self.variants(d, pair.track, 1, 10)
        es = self.variants(e, pair.dual, -1, 10)
        self.assertEqual((len(ds), len(es)), (10, 10))
        for first, second in itertools.product(ds, es):
            overlay = overlay_pair(first, second)
            self.assertEqual(overlay.frame, pair.track.pd)
            self.assertTrue(snow_check(overlay)[0], msg=f"{first.word} against {second.word}")


class TestMembership(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.track = standard_track(standard_decomposition(2, "theta"))
        cls.guide = random_positive_weights(cls.track, np.random.default_rng(6))
        cls.tower = build_tower(cls.track, cls.guide, 2)

    def test_guide_is_member(self):
        cert = gnp_membership(chart_coordinates(self.track, self.guide), self.tower)
        self.assertEqual(cert.kind, "membership")
        self.assertEqual(cert.bound, 2)
        self.assertTrue(replay_certificate(cert))

    def test_zero_weight(self):
        with self.assertRaises(CertificateError) as context:
            gnp_membership(DTCoordinates((2, 2, 2), (-1, 0, -1)), self.tower)
        self.assertEqual(context.exception.hypothesis, "positive")

    def test_level_out_of_range(self):
        with self.assertRaises(CertificateError):
            gnp_membership(chart_coordinates(self.track, self.guide), self.tower, 3)

    def test_calm_system(self):
        system = construct_calm_cds(self.track, seed=0)
        tower = build_tower(self.track, gregarious_guide(system.weights, self.track, np.random.default_rng(2)), 2)
        cert = gnp_membership(system, tower, 2)
        self.assertTrue(replay_certificate(cert))
