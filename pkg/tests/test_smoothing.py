import unittest
from fractions import Fraction

import pytest

from fixtures import births_and_deaths_formigram, seeded, sp, three_phase_formigram
from formibar.core.graphs import Graph
from formibar.core.intervals import Barcode, Interval
from formibar.core.timeline import from_pieces, validate
from formibar.smoothing.smoothing import (
    coarsen_over_interval,
    is_saturated,
    smooth_barcode,
    smooth_dg,
    smooth_formigram,
    window,
)
from formibar.utils.synthetic import random_dg, random_formigram
from formibar.zigzag.barcode import barcode_of_formigram

F = Fraction


class TestSmoothing(unittest.TestCase):
    def test_short_disbands_are_erased(self):
        smoothed = smooth_formigram(three_phase_formigram(), F(3))
        expected = Barcode.of([Interval.real_line(), Interval.open(F(5), F(7)), Interval.open(F(9), F(14))])
        self.assertEqual(barcode_of_formigram(smoothed), expected)

    def test_window_coarsening(self):
        X = ("x1", "x2", "x3")
        theta = three_phase_formigram()
        self.assertEqual(coarsen_over_interval(theta, window(F(10), F(2))), sp(X, ["x1"], ["x2", "x3"]))
        self.assertEqual(coarsen_over_interval(theta, window(F(8), F(3))), sp(X, X))

    def test_zero_is_identity(self):
        theta = three_phase_formigram()
        self.assertIs(smooth_formigram(theta, F(0)), theta)

    def test_negative_parameter_rejected(self):
        with self.assertRaises(ValueError):
            smooth_formigram(three_phase_formigram(), F(-1))

    def test_closed_bars_grow(self):
        bars = barcode_of_formigram(smooth_formigram(births_and_deaths_formigram(), F(1)))
        self.assertIn(Interval.closed(F(-6), F(6)), list(bars))
        # [-3,-1) slides left, (1,2] slides right
        self.assertIn(Interval(F(-4), F(-2), True, False), list(bars))
        self.assertIn(Interval(F(2), F(3), False, True), list(bars))

    def test_saturation(self):
        self.assertTrue(is_saturated(three_phase_formigram()))
        self.assertFalse(is_saturated(births_and_deaths_formigram()))

    def test_dg_edge_spreads_over_window(self):
        X = ("a", "b")
        apart = Graph.of(X, loops=True)
        dg = from_pieces(X, [(Interval.point(F(1)), Graph.of(X, [("a", "b")], loops=True))], apart)
        smoothed = smooth_dg(dg, F(1))
        self.assertTrue(validate(smoothed).ok)
        self.assertTrue(smoothed.value_at(F(0)).has_edge("a", "b"))
        self.assertTrue(smoothed.value_at(F(2)).has_edge("a", "b"))
        self.assertFalse(smoothed.value_at(F(21, 10)).has_edge("a", "b"))
        self.assertEqual(smoothed.crit, (0, 2))


@pytest.mark.parametrize("seed", range(200))
@pytest.mark.parametrize("eps", [F(1, 4), F(1), F(3)])
def test_smoothing_matches_barcode_table(seed, eps):
    theta = random_formigram(seeded(seed))
    assert barcode_of_formigram(smooth_formigram(theta, eps)) == smooth_barcode(barcode_of_formigram(theta), eps)


@pytest.mark.parametrize("seed", range(30))
def test_smoothed_dg_is_valid_and_larger(seed):
    dg = random_dg(seeded(seed))
    eps = F(1, 2)
    smoothed = smooth_dg(dg, eps)
    assert validate(smoothed).ok
    for t in dg.sample_points():
        assert dg.value_at(t).is_subgraph_of(smoothed.value_at(t))


def test_smoothing_twice_adds_up():
    theta = three_phase_formigram()
    twice = smooth_formigram(smooth_formigram(theta, F(1)), F(1, 2))
    once = smooth_formigram(theta, F(3, 2))
    assert twice == once
