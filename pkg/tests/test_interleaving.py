import unittest
from fractions import Fraction

import pytest

from fixtures import constant_formigram, seeded, three_phase_formigram, tightness_pair
from formibar.clustering.components import cluster_ddg, pi0_dg
from formibar.core.errors import SizeBoundExceededError
from formibar.core.intervals import Barcode, Interval
from formibar.core.tripod import Tripod
from formibar.metrics.bottleneck import bottleneck, stability_lower_bound
from formibar.metrics.interleaving import (
    epsilon_candidates,
    interleaving_dg_exact,
    interleaving_formigram_exact,
    is_formigram_interleaved,
)
from formibar.utils.synthetic import random_ddg, random_dg
from formibar.utils.utils import INF
from formibar.zigzag.barcode import barcode_of_formigram

F = Fraction


class TestBottleneck(unittest.TestCase):
    def test_identical_barcodes(self):
        bars = barcode_of_formigram(three_phase_formigram())
        self.assertEqual(bottleneck(bars, bars), 0)

    def test_short_bar_goes_to_the_diagonal(self):
        a = Barcode.of([Interval.real_line()])
        b = Barcode.of([Interval.real_line(), Interval.open(F(0), F(3))])
        self.assertEqual(bottleneck(a, b), F(3, 2))

    def test_unmatched_infinite_bars(self):
        a = Barcode.of([Interval.real_line()])
        b = Barcode.of([Interval.real_line(), Interval.real_line()])
        self.assertEqual(bottleneck(a, b), INF)
        self.assertEqual(stability_lower_bound(a, b), INF)


class TestFormigramInterleaving(unittest.TestCase):
    def test_tightness_pair(self):
        theta_x, theta_y = tightness_pair()
        self.assertEqual(interleaving_formigram_exact(theta_x, theta_y), 1)
        bars_x, bars_y = barcode_of_formigram(theta_x), barcode_of_formigram(theta_y)
        self.assertEqual(bottleneck(bars_x, bars_y), 1)
        self.assertEqual(stability_lower_bound(bars_x, bars_y), F(1, 2))

    def test_tripod_fails_below_the_distance(self):
        theta_x, theta_y = tightness_pair()
        r = Tripod.of([("x", "y1"), ("x", "y2")])
        self.assertFalse(is_formigram_interleaved(theta_x, theta_y, r, F(1, 2)))
        self.assertTrue(is_formigram_interleaved(theta_x, theta_y, r, F(1)))

    def test_distance_to_itself(self):
        theta = three_phase_formigram()
        self.assertEqual(interleaving_formigram_exact(theta, theta), 0)
        self.assertTrue(is_formigram_interleaved(theta, theta, Tripod.identity(theta.universe), F(0)))

    def test_symmetric(self):
        theta_x, theta_y = tightness_pair()
        self.assertEqual(
            interleaving_formigram_exact(theta_x, theta_y), interleaving_formigram_exact(theta_y, theta_x)
        )

    def test_constant_formigrams(self):
        one = constant_formigram([["a", "b"]])
        two = constant_formigram([["p"], ["q", "r"]])
        also_two = constant_formigram([["u", "v"], ["w"]])
        self.assertEqual(interleaving_formigram_exact(one, two), INF)
        self.assertEqual(interleaving_formigram_exact(two, also_two), 0)

    def test_size_bound(self):
        big = constant_formigram([[f"p{i}" for i in range(4)]])
        with self.assertRaises(SizeBoundExceededError):
            interleaving_formigram_exact(big, big, size_bound=12)

    def test_candidates(self):
        self.assertEqual(epsilon_candidates([F(-1), F(1)]), [F(0), F(1), F(2)])


@pytest.mark.parametrize("m", range(1, 4))
@pytest.mark.parametrize("k", range(1, 4))
def test_constant_formigram_dichotomy(m, k):
    x = constant_formigram([[f"x{i}"] for i in range(m)])
    y = constant_formigram([[f"y{i}"] for i in range(k)])
    assert interleaving_formigram_exact(x, y) == (0 if m == k else INF)


def _small_dg_pair(seed):
    rng = seeded(7000 + seed)
    return random_dg(rng, max_vertices=3, max_crit=3), random_dg(rng, max_vertices=3, max_crit=3)


@pytest.mark.parametrize("seed", range(100))
def test_dg_barcode_stability(seed):
    g_x, g_y = _small_dg_pair(seed)
    d_dg = interleaving_dg_exact(g_x, g_y)
    d_b = bottleneck(barcode_of_formigram(pi0_dg(g_x)), barcode_of_formigram(pi0_dg(g_y)))
    assert d_b <= 2 * d_dg


@pytest.mark.parametrize("seed", range(100))
def test_components_are_one_lipschitz(seed):
    g_x, g_y = _small_dg_pair(seed)
    assert interleaving_formigram_exact(pi0_dg(g_x), pi0_dg(g_y)) <= interleaving_dg_exact(g_x, g_y)


@pytest.mark.parametrize("seed", range(100))
def test_weak_clustering_stability(seed):
    rng = seeded(9000 + seed)
    theta_x = cluster_ddg(random_ddg(rng, max_vertices=3, max_crit=3), "weak")
    theta_y = cluster_ddg(random_ddg(rng, max_vertices=3, max_crit=3), "weak")
    d_f = interleaving_formigram_exact(theta_x, theta_y)
    assert bottleneck(barcode_of_formigram(theta_x), barcode_of_formigram(theta_y)) <= 2 * d_f


def test_dg_distance_to_itself():
    g, _ = _small_dg_pair(0)
    assert interleaving_dg_exact(g, g) == 0
