import unittest

from snowtrack.errors import TrackError
from snowtrack.geometry import standard_decomposition
from snowtrack.tracks import (
    Crossing,
    Overlay,
    TransversePair,
    check_transverse,
    dual_pair,
    loop,
    overlay_regions,
    self_overlay,
    standard_track,
    tails,
)


def with_bigon(pair: TransversePair) -> TransversePair:
    """Pushes a finger of the dual tail across the tight loop of curve 0 and back."""
    e2 = loop(0)[1]
    dual_tail = tails(0)[1]
    crossings = list(pair.overlay.crossings)
    crossings += [Crossing(e2, 1, dual_tail, 1, -1), Crossing(e2, 2, dual_tail, 2, 1)]
    return TransversePair(pair.track, pair.dual, Overlay(crossings))


class TestTransverse(unittest.TestCase):
    def test_dual_pair(self):
        for genus, kind in ((2, "theta"), (2, "chain"), (3, "chain"), (4, "chain")):
            pair = dual_pair(standard_decomposition(genus, kind))
            self.assertTrue(check_transverse(pair))
            self.assertEqual(len(pair.overlay.crossings), 12 * (genus - 1))
            regions = overlay_regions(pair)
            self.assertEqual(len(regions), 22 * (genus - 1))
            self.assertEqual(sorted(set(regions)), [3, 6])

    def test_pair_survives_json(self):
        pair = dual_pair(standard_decomposition(2, "chain"))
        restored = TransversePair.from_dict(pair.to_dict())
        self.assertEqual(restored.overlay.crossings, pair.overlay.crossings)
        self.assertTrue(check_transverse(restored))

    def test_track_over_itself(self):
        track = standard_track(standard_decomposition(2, "theta"))
        self.assertFalse(check_transverse(self_overlay(track)))

    def test_bigon(self):
        pair = with_bigon(dual_pair(standard_decomposition(2, "theta")))
        self.assertEqual(len(pair.overlay.crossings), 14)
        self.assertFalse(check_transverse(pair))
        self.assertIn(2, overlay_regions(pair))

    def test_inconsistent_overlay(self):
        pair = dual_pair(standard_decomposition(2, "theta"))
        pair.overlay.crossings.append(Crossing(0, 7, 0, 9, 1))
        with self.assertRaises(TrackError):
            check_transverse(pair)
