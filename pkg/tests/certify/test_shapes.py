import unittest

from snowtrack.certify import (
    CarriedSystem,
    Connector,
    classify_pants_shapes,
    construct_calm_cds,
    is_calm,
    search_calm_cds,
    shapes_from_connectors,
    trace_connectors,
)
from snowtrack.errors import TrackError
from snowtrack.geometry import standard_decomposition
from snowtrack.tracks import standard_track


# two triangles with cusps at switches 0-2 and 3-5
TRIANGLES = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1}


class TestShapesFromConnectors(unittest.TestCase):
    def test_theta(self):
        connectors = [Connector(0, 3, (7,)), Connector(1, 4, (8,)), Connector(2, 5, (9,))]
        (shape,) = shapes_from_connectors(TRIANGLES, connectors)
        self.assertEqual(shape.shape, "theta")
        self.assertEqual(shape.triangles, (0, 1))
        self.assertEqual(len(shape.connectors), 3)

    def test_eyeglass(self):
        connectors = [Connector(0, 1, (7,)), Connector(2, 3, (8,)), Connector(4, 5, (9,))]
        (shape,) = shapes_from_connectors(TRIANGLES, connectors)
        self.assertEqual(shape.shape, "eyeglass")

    def test_incomplete_system(self):
        triangles = {**TRIANGLES, 6: 2, 7: 2, 8: 2}
        connectors = [Connector(0, 3, ()), Connector(1, 4, ()), Connector(2, 6, ()), Connector(5, 7, ())]
        with self.assertRaises(TrackError):
            shapes_from_connectors(triangles, connectors)


class TestClassify(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.pd = standard_decomposition(2, "theta")
        cls.track = standard_track(cls.pd)
        cls.system = construct_calm_cds(cls.track, seed=0)

    def test_calm_system_is_all_theta(self):
        shapes = classify_pants_shapes(self.system, self.track)
        self.assertEqual(len(shapes), 2)
        self.assertTrue(all(shape.shape == "theta" for shape in shapes))
        self.assertTrue(all(len(shape.triangles) == 2 for shape in shapes))
        self.assertEqual(len({t for shape in shapes for t in shape.triangles}), 4)
        self.assertTrue(is_calm(self.system.weights, self.track))

    def test_connectors_pair_up_cusps(self):
        connectors = trace_connectors(self.track, self.system.weights)
        self.assertEqual(len(connectors), self.track.n_switches // 2)
        ends = [s for c in connectors for s in (c.start, c.end)]
        self.assertEqual(sorted(ends), self.track.switches)

    def test_zero_weight(self):
        weights = dict(self.system.weights)
        weights[min(weights)] = 0
        with self.assertRaises(TrackError):
            classify_pants_shapes(weights, self.track)

    def test_serialization(self):
        restored = CarriedSystem.from_dict(self.system.to_dict(), self.pd)
        self.assertEqual(restored, self.system)
        self.assertIsNone(restored.word)

    def test_serialization_with_word(self):
        system = search_calm_cds(self.track, seed=0, budget=5000)
        restored = CarriedSystem.from_dict(system.to_dict(), self.pd)
        self.assertEqual(restored, system)
        self.assertTrue(restored.word)
