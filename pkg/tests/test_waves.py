import unittest

from snowtrack.errors import CoordinateError
from snowtrack.geometry import DTCoordinates, standard_decomposition
from snowtrack.waves import CdsPair, curve_has_wave, meridian_necessary_condition, pants_has_wave, snow_check


def frame(pd):
    return tuple(DTCoordinates.pants_curve(pd.n_curves, curve) for curve in pd.curves)


class TestWaves(unittest.TestCase):
    def setUp(self):
        self.theta = standard_decomposition(2, "theta")
        self.chain = standard_decomposition(3)
        # (2,2,4), (4,1,1), (1,1,2), (1,1,2) around the four pants of the genus 3 chain
        self.wavy = DTCoordinates((2, 4, 1, 1, 2, 1), (0,) * 6)

    def test_pants_has_wave(self):
        self.assertEqual(pants_has_wave(4, 1, 1), 0)
        self.assertEqual(pants_has_wave(1, 6, 1), 1)
        self.assertIsNone(pants_has_wave(2, 2, 2))
        self.assertIsNone(pants_has_wave(0, 0, 0))
        self.assertIsNone(pants_has_wave(4, 2, 2))
        with self.assertRaises(CoordinateError):
            pants_has_wave(3, 1, 1)

    def test_curve_has_wave(self):
        self.assertEqual(curve_has_wave(DTCoordinates.pants_curve(3, 1), self.theta), [])
        self.assertEqual(curve_has_wave(DTCoordinates((2, 2, 2), (0, 0, 0)), self.theta), [])
        witnesses = curve_has_wave(self.wavy, self.chain)
        self.assertEqual(len(witnesses), 1)
        self.assertEqual((witnesses[0].pants, witnesses[0].slot, witnesses[0].loops), (1, 0, 1))
        # on the theta graph both pants see the same boundary values
        witnesses = curve_has_wave(DTCoordinates((4, 1, 1), (0, 0, 0)), self.theta)
        self.assertEqual([w.pants for w in witnesses], [0, 1])

    def test_curve_has_wave_inadmissible(self):
        with self.assertRaises(CoordinateError):
            curve_has_wave(DTCoordinates((1, 0, 0), (0, 0, 0)), self.theta)

    def test_snow_identity(self):
        pair = CdsPair(self.theta, frame(self.theta), frame(self.theta))
        self.assertEqual(snow_check(pair), (True, None))

    def test_snow_failure_and_symmetry(self):
        pd = self.theta
        # D_0 = (4,0,0)-curve in the E frame, symmetric matrix of intersection numbers
        rest = (DTCoordinates.pants_curve(3, 1), DTCoordinates.pants_curve(3, 2))
        d_in_e = (DTCoordinates((4, 0, 0), (1, 0, 0)), *rest)
        e_in_d = (DTCoordinates((4, 0, 0), (-1, 0, 0)), *rest)
        pair = CdsPair(pd, d_in_e, e_in_d)
        verdict, witness = snow_check(pair)
        self.assertFalse(verdict)
        self.assertEqual(witness.direction, "D_in_E")
        self.assertEqual(snow_check(pair.swapped())[0], verdict)

    def test_inconsistent_pair(self):
        d_in_e = (DTCoordinates((2, 2, 2), (0, 0, 0)),) + frame(self.theta)[1:]
        pair = CdsPair(self.theta, d_in_e, frame(self.theta))
        with self.assertRaises(CoordinateError):
            snow_check(pair)

    def test_meridian_necessary_condition(self):
        self.assertTrue(meridian_necessary_condition(DTCoordinates.pants_curve(3, 2), self.theta))
        self.assertFalse(meridian_necessary_condition(DTCoordinates((2, 2, 2), (0, 0, 0)), self.theta))
        self.assertTrue(meridian_necessary_condition(self.wavy, self.chain))
