import unittest

import numpy as np

from snowtrack.errors import GuideError, TrackError
from snowtrack.geometry import standard_decomposition
from snowtrack.tracks import (
    TrainTrack,
    check_switch_conditions,
    complementary_regions,
    covers,
    fold,
    is_maximal,
    loop,
    push_weights,
    random_closed_train_path,
    random_positive_weights,
    slide,
    split,
    standard_track,
    tails,
)
from snowtrack.tracks.track import SMALL_L, SMALL_R, L


def non_filling_track(genus: int = 2) -> TrainTrack:
    # two switches and three branches: a planar theta graph sitting inside a surface of positive genus
    return TrainTrack(
        genus=genus,
        ports={0: [0, 1, 2], 1: [0, 2, 1]},
        ends={0: [(0, L), (1, L)], 1: [(0, SMALL_L), (1, SMALL_R)], 2: [(0, SMALL_R), (1, SMALL_L)]},
    )


def same_track(a: TrainTrack, b: TrainTrack) -> bool:
    return a.ports == b.ports and a.ends == b.ends and a.columns == b.columns and a.cusps == b.cusps


class TestTrainTrack(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(7)
        self.track = standard_track(standard_decomposition(2, "theta"))

    def test_euler_counts(self):
        for genus, kind in ((2, "theta"), (2, "chain"), (3, "chain")):
            for model in ("tight", "tight-dual"):
                track = standard_track(standard_decomposition(genus, kind), model)
                self.assertEqual(track.n_switches, 12 * genus - 12)
                self.assertEqual(track.n_branches, 18 * genus - 18)
                regions = complementary_regions(track)
                self.assertEqual(len(regions), 4 * genus - 4)
                self.assertTrue(all(region.is_triangle for region in regions))
                self.assertTrue(is_maximal(track))

    def test_switch_conditions(self):
        zero = {b: 0 for b in self.track.branches}
        self.assertTrue(check_switch_conditions(self.track, zero))
        indicator = dict(zero)
        indicator[0] = 1
        self.assertFalse(check_switch_conditions(self.track, indicator))
        with self.assertRaises(TrackError):
            check_switch_conditions(self.track, {0: 0})
        for _ in range(20):
            self.assertTrue(check_switch_conditions(self.track, random_closed_train_path(self.track, self.rng)))

    def test_covers(self):
        weights = random_positive_weights(self.track, self.rng)
        self.assertTrue(covers(self.track, weights))
        weights[0] = 0
        self.assertFalse(covers(self.track, weights))

    def test_non_filling(self):
        track = non_filling_track()
        regions = complementary_regions(track)
        self.assertEqual([region.genus for region in regions if region.genus], [2])
        self.assertFalse(is_maximal(track))

    def test_malformed(self):
        with self.assertRaises(TrackError):
            TrainTrack(genus=2, ports={0: [0, 1, 2], 1: [0, 2, 1]}, ends={0: [(0, L), (1, L)]})

    def test_serialization(self):
        restored = TrainTrack.from_dict(self.track.to_dict())
        self.assertTrue(same_track(restored, self.track))
        self.assertEqual(restored.model, "tight")
        self.assertEqual(restored.layout, self.track.layout)


class TestMoves(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.track = standard_track(standard_decomposition(2, "theta"))
        self.weights = random_positive_weights(self.track, self.rng)
        self.loop = loop(0)[0]

    def test_split_fold_round_trip(self):
        for direction in ("left", "right", "central"):
            split_track, move = split(self.track, self.loop, direction)
            self.assertEqual(move.kind, direction)
            self.assertTrue(same_track(fold(split_track, move), self.track))

    def test_only_large_branches_split(self):
        with self.assertRaises(TrackError):
            split(self.track, tails(0)[0], "left")

    def test_guided_split(self):
        split_track, move = split(self.track, self.loop, guide=self.weights)
        a, d = self.weights[move.roles["A"]], self.weights[move.roles["D"]]
        self.assertEqual(move.kind, "left" if a > d else "right")
        pushed = push_weights(move, self.weights)
        self.assertTrue(check_switch_conditions(split_track, pushed))
        self.assertTrue(covers(split_track, pushed))
        # the split track is carried by the original one through its columns
        self.assertEqual(split_track.image(pushed), self.weights)
        self.assertTrue(is_maximal(split_track))

    def test_central_split(self):
        split_track, move = split(self.track, self.loop, "central")
        self.assertEqual(split_track.n_switches, self.track.n_switches - 2)
        self.assertEqual(split_track.n_branches, self.track.n_branches - 3)
        self.assertEqual(len(move.merged), 2)
        with self.assertRaises(GuideError):
            split(self.track, self.loop, "central", guide=self.weights)

    def test_slide(self):
        split_track, move = split(self.track, self.loop, guide=self.weights)
        weights = push_weights(move, self.weights)
        u = next(s for s in split_track.switches if not split_track.is_large(split_track.ports[s][L])
                 and split_track.other_end(split_track.ports[s][L], (s, L))[0] != s)
        slid, slide_move = slide(split_track, u)
        pushed = push_weights(slide_move, weights)
        self.assertTrue(check_switch_conditions(slid, pushed))
        self.assertEqual(slid.image(pushed), self.weights)
        self.assertTrue(is_maximal(slid))
        self.assertTrue(same_track(fold(slid, slide_move), split_track))

    def test_random_moves_stay_maximal(self):
        for genus in (2, 3):
            start = standard_track(standard_decomposition(genus, "chain"))
            track = start
            for _ in range(1000):
                large = [b for b in track.branches if track.is_large(b)]
                if large:
                    branch = large[int(self.rng.integers(len(large)))]
                    track, _ = split(track, branch, ("left", "right")[int(self.rng.integers(2))])
                else:
                    movable = [s for s in track.switches if track.other_end(track.ports[s][L], (s, L))[0] != s]
                    self.assertTrue(movable)
                    track, _ = slide(track, movable[int(self.rng.integers(len(movable)))])
                self.assertTrue(is_maximal(track))
                self.assertEqual(sorted(track.cusps.values()), sorted(start.cusps.values()))
            self.assertEqual(len(track.moves), 1000)
