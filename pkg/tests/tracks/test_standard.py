import itertools
import unittest

import numpy as np

from snowtrack.errors import TrackError
from snowtrack.geometry import DTCoordinates, is_admissible_dt, standard_decomposition
from snowtrack.tracks import (
    TrainTrack,
    chart_coordinates,
    check_switch_conditions,
    complementary_regions,
    is_carried,
    is_maximal,
    is_tight,
    loop,
    random_positive_weights,
    standard_track,
    tails,
)
from snowtrack.tracks.track import L


def small_curves(pd, max_m=2, twists=(-2, -1, 0, 1, 2, 3, 4)):
    for m in itertools.product(range(max_m + 1), repeat=pd.n_curves):
        for t in itertools.product(twists, repeat=pd.n_curves):
            coords = DTCoordinates(m, t)
            if not coords.is_empty and is_admissible_dt(coords, pd):
                yield coords


class TestStandardTrack(unittest.TestCase):
    def test_maximal(self):
        for genus, kind in ((2, "theta"), (2, "chain"), (3, "chain"), (4, "chain")):
            pd = standard_decomposition(genus, kind)
            for model in ("tight", "tight-dual"):
                track = standard_track(pd, model)
                self.assertTrue(is_maximal(track))
                self.assertEqual(len(complementary_regions(track)), 4 * genus - 4)

    def test_only_loops_start_large(self):
        pd = standard_decomposition(3, "chain")
        track = standard_track(pd)
        self.assertEqual({b for b in track.branches if track.is_large(b)}, {loop(c)[0] for c in pd.curves})

    def test_json(self):
        track = standard_track(standard_decomposition(2, "theta"), "tight-dual")
        restored = TrainTrack.from_dict(track.to_dict())
        self.assertEqual(restored.ports, track.ports)
        self.assertEqual(restored.layout, track.layout)


class TestCharts(unittest.TestCase):
    def setUp(self):
        self.pd = standard_decomposition(2, "theta")
        self.tight = standard_track(self.pd, "tight")
        self.dual = standard_track(self.pd, "tight-dual")

    def test_unknown_model(self):
        with self.assertRaises(TrackError):
            standard_track(self.pd, "tau-plus")

    def test_twist_sign_charts(self):
        self.assertIsNotNone(is_carried(DTCoordinates((2, 2, 2), (-1, 0, -1)), self.tight))
        self.assertIsNone(is_carried(DTCoordinates((2, 2, 2), (1, 0, 0)), self.tight))
        self.assertIsNotNone(is_carried(DTCoordinates((2, 2, 2), (2, 3, 2)), self.dual))
        self.assertIsNone(is_carried(DTCoordinates((2, 2, 2), (1, 2, 2)), self.dual))
        self.assertIsNone(is_carried(DTCoordinates((2, 2, 2), (0, -1, 0)), self.dual))
        weights = is_carried(DTCoordinates((2, 2, 2), (-1, 0, -1)), self.tight)
        self.assertEqual([weights[b] for b in loop(0)], [3, 1])
        self.assertEqual([weights[b] for b in tails(0)], [2, 2])

    def test_waves_are_not_carried(self):
        for track in (self.tight, self.dual):
            self.assertIsNone(is_carried(DTCoordinates((4, 0, 0), (0, 0, 0)), track))

    def test_pants_curves_are_carried_on_their_loops(self):
        for track in (self.tight, self.dual):
            for curve in self.pd.curves:
                weights = is_carried(DTCoordinates.pants_curve(3, curve, copies=2), track)
                self.assertIsNotNone(weights)
                self.assertEqual({b for b, w in weights.items() if w}, set(loop(curve)))
                self.assertEqual([weights[b] for b in loop(curve)], [2, 2])
                self.assertEqual(chart_coordinates(track, weights), DTCoordinates.pants_curve(3, curve, copies=2))

    def test_carried_weights(self):
        for pd in (self.pd, standard_decomposition(2, "chain")):
            for model in ("tight", "tight-dual"):
                track = standard_track(pd, model)
                for coords in small_curves(pd):
                    weights = is_carried(coords, track)
                    if weights is None:
                        continue
                    self.assertTrue(check_switch_conditions(track, weights))
                    self.assertEqual(chart_coordinates(track, weights), coords)

    def test_carried_by_both_covers_neither(self):
        both = 0
        curves = [DTCoordinates((0, 0, 0), t) for t in itertools.product(range(5), repeat=3) if any(t)]
        for coords in itertools.chain(curves, small_curves(self.pd)):
            weights = is_carried(coords, self.tight)
            dual_weights = is_carried(coords, self.dual)
            if weights is None or dual_weights is None:
                continue
            both += 1
            self.assertEqual(coords.m, (0, 0, 0))
            self.assertEqual(min(weights.values()), 0)
            self.assertEqual(min(dual_weights.values()), 0)
        self.assertGreaterEqual(both, 100)

    def test_random_positive_weights(self):
        rng = np.random.default_rng(3)
        for pd in (self.pd, standard_decomposition(3, "chain")):
            for model in ("tight", "tight-dual"):
                track = standard_track(pd, model)
                weights = random_positive_weights(track, rng)
                self.assertTrue(all(w > 0 for w in weights.values()))
                self.assertTrue(check_switch_conditions(track, weights))
                self.assertEqual(is_carried(chart_coordinates(track, weights), track), weights)


class TestTightness(unittest.TestCase):
    def setUp(self):
        self.pd = standard_decomposition(2, "theta")
        self.track = standard_track(self.pd)
        self.routes = self.track.layout["embedding"]

    def test_standard_models_are_tight(self):
        for genus, kind in ((2, "theta"), (2, "chain"), (3, "chain")):
            pd = standard_decomposition(genus, kind)
            for model in ("tight", "tight-dual"):
                self.assertTrue(is_tight(standard_track(pd, model), pd))

    def test_every_branch_is_crossed(self):
        fibers = {item[1] for route in self.routes.values() for item in route if item[0] == "fiber"}
        self.assertEqual(fibers, set(self.track.branches))

    def test_cusp_off_the_curves(self):
        corner = next(tuple(item[1:3]) for item in self.routes[0] if item[0] == "segment" and item[5])
        for route in self.routes.values():
            for i, item in enumerate(route):
                if item[0] == "segment" and tuple(item[1:3]) == corner:
                    route[i] = item[:5] + [False]
        self.assertFalse(is_tight(self.track, self.pd))

    def test_segment_off_a_cusp(self):
        route = self.routes[1]
        route[1] = ["segment", route[1][1], L, *route[1][3:]]
        self.assertFalse(is_tight(self.track, self.pd))

    def test_curve_running_along_a_branch(self):
        self.routes[2][0] = ["run", self.routes[2][0][1]]
        self.assertFalse(is_tight(self.track, self.pd))

    def test_record_survives_json(self):
        self.assertTrue(is_tight(TrainTrack.from_dict(self.track.to_dict()), self.pd))

    def test_missing_record(self):
        self.track.layout = {}
        with self.assertRaises(TrackError):
            is_tight(self.track, self.pd)
