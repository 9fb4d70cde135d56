import itertools
import unittest
from fractions import Fraction

import pytest

from fixtures import seeded, sp, three_phase_formigram
from formibar.core.errors import NotADendrogramError, NotUltrametricError, SizeBoundExceededError
from formibar.core.intervals import Interval
from formibar.core.metric_space import MetricSpace
from formibar.core.timeline import from_pieces
from formibar.dms.dms import dms_from_metric_filtration, dms_from_ultrametric
from formibar.metrics.dendrogram import check_dendrogram, dendrogram_from_ultrametric, dendrogram_ultrametric
from formibar.metrics.gromov_hausdorff import best_correspondence, distortion, gromov_hausdorff_exact
from formibar.metrics.interleaving import (
    interleaving_dg_exact,
    interleaving_dms_exact,
    interleaving_formigram_exact,
)
from formibar.utils.utils import INF

F = Fraction


def _canonical(space: MetricSpace):
    n = len(space.points)
    return min(
        tuple(space.d(space.points[p[i]], space.points[p[j]]) for i, j in itertools.combinations(range(n), 2))
        for p in itertools.permutations(range(n))
    )


def ultrametrics(max_points, values=(1, 2, 3)):
    """One ultrametric per isometry class."""
    found = {}
    for n in range(1, max_points + 1):
        names = [f"p{i}" for i in range(n)]
        pairs = list(itertools.combinations(names, 2))
        for choice in itertools.product(values, repeat=len(pairs)):
            space = MetricSpace.of(names, dict(zip(pairs, choice)))
            if space.is_ultrametric():
                found.setdefault((n, _canonical(space)), space)
    return list(found.values())


def relabel(space: MetricSpace, prefix: str) -> MetricSpace:
    rename = {p: f"{prefix}{i}" for i, p in enumerate(space.points)}
    return MetricSpace.of([rename[p] for p in space.points], {(rename[x], rename[y]): space.d(x, y) for x, y in space.pairs()})


SMALL = ultrametrics(3)
UP_TO_FOUR = ultrametrics(4)
SMALL_PAIRS = list(itertools.combinations_with_replacement(range(len(SMALL)), 2))
BOUNDED_PAIRS = [
    (i, j)
    for i, j in itertools.combinations_with_replacement(range(len(UP_TO_FOUR)), 2)
    if len(UP_TO_FOUR[i]) * len(UP_TO_FOUR[j]) <= 12
]


class TestGromovHausdorff(unittest.TestCase):
    def test_isometric(self):
        a = MetricSpace.of("abc", {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 2})
        self.assertEqual(gromov_hausdorff_exact(a, relabel(a, "q")), 0)

    def test_two_point_spaces(self):
        a = MetricSpace.of("ab", {("a", "b"): 1})
        b = MetricSpace.of("pq", {("p", "q"): 4})
        self.assertEqual(gromov_hausdorff_exact(a, b), F(3, 2))

    def test_point_against_two_points(self):
        self.assertEqual(gromov_hausdorff_exact(MetricSpace.point(), MetricSpace.of("ab", {("a", "b"): 3})), F(3, 2))

    def test_best_correspondence(self):
        a = MetricSpace.of("abc", {("a", "b"): 1, ("a", "c"): 3, ("b", "c"): 3})
        b = MetricSpace.of("pq", {("p", "q"): 3})
        value, tripod = best_correspondence(a, b)
        self.assertEqual(value, 1)
        self.assertEqual(distortion(a, b, tripod), value)
        # a and b sit together opposite c
        forward = tripod.forward()
        self.assertEqual(forward["a"], forward["b"])
        self.assertNotEqual(forward["a"], forward["c"])

    def test_five_point_spaces(self):
        names = "abcde"
        narrow = MetricSpace.of(names, {pair: 1 for pair in itertools.combinations(names, 2)})
        wide = relabel(MetricSpace.of(names, {pair: 3 for pair in itertools.combinations(names, 2)}), "q")
        self.assertEqual(gromov_hausdorff_exact(narrow, wide, bound=5), 1)
        clusters = MetricSpace.of(
            names,
            {(x, y): 1 if {x, y} <= set("abc") or {x, y} <= set("de") else 4 for x, y in itertools.combinations(names, 2)},
        )
        self.assertEqual(gromov_hausdorff_exact(clusters, relabel(clusters, "q"), bound=5), 0)

    def test_size_bound(self):
        big = MetricSpace.of("abcdef", {pair: 1 for pair in itertools.combinations("abcdef", 2)})
        with self.assertRaises(SizeBoundExceededError):
            gromov_hausdorff_exact(big, big, bound=5)


class TestDendrograms(unittest.TestCase):
    def test_ultrametric_of_a_three_leaf_dendrogram(self):
        X = ("x", "y", "z")
        theta = from_pieces(
            X,
            [
                (Interval(F(0), F(1), True, False), sp(X, ["x"], ["y"], ["z"])),
                (Interval(F(1), F(2), True, False), sp(X, ["x", "y"], ["z"])),
                (Interval(F(2), INF, True, False), sp(X, X)),
            ],
            sp(X),
        )
        u = dendrogram_ultrametric(theta)
        self.assertEqual(u.as_dict(), {("x", "y"): 1, ("x", "z"): 2, ("y", "z"): 2})
        self.assertTrue(u.is_ultrametric())

    def test_back_and_forth(self):
        u = MetricSpace.of("abcd", {("a", "b"): 1, ("c", "d"): 2, ("a", "c"): 3, ("a", "d"): 3, ("b", "c"): 3, ("b", "d"): 3})
        theta = dendrogram_from_ultrametric(u)
        check_dendrogram(theta)
        self.assertEqual(theta.crit, (0, 1, 2, 3))
        self.assertEqual(dendrogram_ultrametric(theta), u)

    def test_single_block_from_birth(self):
        X = ("a", "b")
        theta = from_pieces(X, [(Interval(F(0), INF, True, False), sp(X, X))], sp(X))
        self.assertEqual(dendrogram_ultrametric(theta).d("a", "b"), 0)

    def test_formigram_that_disbands_is_rejected(self):
        with self.assertRaises(NotADendrogramError):
            dendrogram_ultrametric(three_phase_formigram())

    def test_non_ultrametric_rejected(self):
        with self.assertRaises(NotUltrametricError):
            dendrogram_from_ultrametric(MetricSpace.of("abc", {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 3}))


def test_isometry_classes():
    # one point, three two-point spaces, six three-point spaces
    assert len(SMALL) == 10


@pytest.mark.parametrize("i,j", BOUNDED_PAIRS)
def test_dendrogram_interleaving_is_twice_gromov_hausdorff(i, j):
    u_x, u_y = UP_TO_FOUR[i], relabel(UP_TO_FOUR[j], "q")
    theta_x, theta_y = dendrogram_from_ultrametric(u_x), dendrogram_from_ultrametric(u_y)
    assert interleaving_formigram_exact(theta_x, theta_y) == 2 * gromov_hausdorff_exact(u_x, u_y)


@pytest.mark.parametrize("seed", range(4))
def test_four_leaf_dendrograms(seed):
    rng = seeded(seed)
    four = [u for u in UP_TO_FOUR if len(u) == 4]
    u_x, u_y = rng.choice(four), relabel(rng.choice(four), "q")
    theta_x, theta_y = dendrogram_from_ultrametric(u_x), dendrogram_from_ultrametric(u_y)
    assert interleaving_formigram_exact(theta_x, theta_y, size_bound=16) == 2 * gromov_hausdorff_exact(u_x, u_y)


@pytest.mark.parametrize("i,j", SMALL_PAIRS)
def test_metric_filtrations_are_twice_gromov_hausdorff(i, j):
    u_x, u_y = SMALL[i], relabel(SMALL[j], "q")
    d_gh = gromov_hausdorff_exact(u_x, u_y)
    assert interleaving_dg_exact(dms_from_metric_filtration(u_x), dms_from_metric_filtration(u_y)) == 2 * d_gh


@pytest.mark.parametrize("i,j", SMALL_PAIRS)
def test_ultrametric_dms_is_twice_gromov_hausdorff(i, j):
    u_x, u_y = SMALL[i], relabel(SMALL[j], "q")
    assert interleaving_dms_exact(dms_from_ultrametric(u_x), dms_from_ultrametric(u_y)) == 2 * gromov_hausdorff_exact(u_x, u_y)
