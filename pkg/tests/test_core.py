import unittest
from fractions import Fraction

import pytest

from fixtures import births_and_deaths_formigram, seeded, sp, three_phase_formigram
from formibar.core.errors import (
    EmptyIntervalError,
    FormatError,
    MalformedValueError,
    NotUltrametricError,
    UniverseMismatchError,
)
from formibar.core.graphs import Graph
from formibar.core.intervals import Barcode, Interval
from formibar.core.metric_space import MetricSpace
from formibar.core.partitions import (
    SubPartition,
    canonical_map,
    finest_common_coarsening,
    is_partition_morphism,
    refines,
)
from formibar.core.timeline import Timeline, from_pieces, require_valid, validate
from formibar.core.tripod import Tripod, correspondences, minimal_correspondences
from formibar.utils.synthetic import random_ddg, random_dg, random_formigram
from formibar.utils.utils import INF, Settings, format_time, simplest_between, to_extended, to_fraction

F = Fraction


class TestSubPartitions(unittest.TestCase):
    def setUp(self):
        self.X = ("x", "y", "z", "w")

    def test_overlapping_blocks_rejected(self):
        with self.assertRaises(ValueError):
            SubPartition.of(self.X, [["x", "y"], ["y", "z"]])

    def test_finest_common_coarsening_chains_blocks(self):
        joined = finest_common_coarsening(
            [sp(self.X, ["x"], ["y"]), sp(self.X, ["y", "z"]), sp(self.X, ["x", "w"])]
        )
        self.assertEqual(joined, sp(self.X, ["x", "w"], ["y", "z"]))

    def test_refines_and_canonical_map(self):
        fine = sp(self.X, ["x"], ["y"])
        coarse = sp(self.X, ["x", "y", "z"])
        self.assertTrue(refines(fine, coarse))
        self.assertFalse(refines(coarse, fine))
        image = canonical_map(fine, coarse)
        self.assertEqual(set(image.values()), {frozenset({"x", "y", "z"})})

    def test_refines_requires_same_universe(self):
        with self.assertRaises(UniverseMismatchError):
            refines(sp(("a",), ["a"]), sp(("a", "b"), ["a"]))

    def test_partition_morphism_is_multivalued(self):
        p = sp(("a", "b"), ["a", "b"])
        q = sp(("u", "v", "w"), ["u", "v"], ["w"])
        self.assertTrue(is_partition_morphism(p, q, {"a": {"u"}, "b": {"v"}}))
        self.assertFalse(is_partition_morphism(p, q, {"a": {"u"}, "b": {"w"}}))
        # partners outside q's underlying set fail
        self.assertFalse(is_partition_morphism(p, sp(("u", "v", "w"), ["u"]), {"a": {"u"}, "b": {"v"}}))


class TestIntervals(unittest.TestCase):
    def test_degenerate_interval_must_be_closed(self):
        with self.assertRaises(EmptyIntervalError):
            Interval(F(1), F(1), True, False)
        self.assertTrue(Interval.point(F(1)).contains(F(1)))

    def test_infinite_endpoints_are_open(self):
        with self.assertRaises(ValueError):
            Interval(-INF, F(0), True, False)

    def test_segment_fits(self):
        self.assertTrue(Interval.closed(F(0), F(2)).contains_segment(F(2)))
        self.assertFalse(Interval.open(F(0), F(2)).contains_segment(F(2)))
        self.assertTrue(Interval.real_line().contains_segment(F(100)))

    def test_barcode_order_is_canonical(self):
        a = Interval.open(F(2), F(10))
        b = Interval.real_line()
        self.assertEqual(Barcode.of([a, b]), Barcode.of([b, a]))
        self.assertEqual(str(Barcode.of([a, b])), "{(-inf,inf), (2,10)}")


class TestTimelines(unittest.TestCase):
    def test_value_at_each_piece(self):
        theta = three_phase_formigram()
        self.assertEqual(theta.crit, (2, 6, 10, 15, 17))
        self.assertEqual(len(theta.value_at(F(2))), 1)
        self.assertEqual(len(theta.value_at(F(3))), 2)
        self.assertEqual(len(theta.value_at(F(8))), 3)
        self.assertEqual(theta.value_at(F(10)), sp(("x1", "x2", "x3"), ["x1"], ["x2", "x3"]))
        self.assertEqual(len(theta.value_at(F(100))), 1)

    def test_refine_keeps_the_function(self):
        theta = three_phase_formigram()
        refined = theta.refine([F(0), F(4), F(16)])
        self.assertEqual(len(refined.crit), 8)
        for t in theta.sample_points() + [F(0), F(4), F(16)]:
            self.assertEqual(refined.value_at(t), theta.value_at(t))
        self.assertEqual(refined.pruned(), theta)

    def test_restrict_to_window(self):
        pieces = three_phase_formigram().restrict_to(Interval.closed(F(6), F(10)))
        self.assertEqual([p.kind for p in pieces], ["crit", "gap", "crit"])
        self.assertEqual(pieces[1].support, Interval.open(F(6), F(10)))

    def test_examples_are_valid(self):
        self.assertTrue(validate(three_phase_formigram()).ok)
        self.assertTrue(validate(births_and_deaths_formigram()).ok)

    def test_open_lifespan_reported(self):
        X = ("a", "b")
        dg = from_pieces(
            X,
            [(Interval.open(F(0), F(1)), Graph.of(["a", "b"], loops=True))],
            Graph.of(["a"], loops=True),
        )
        report = validate(dg)
        self.assertEqual(report.codes(), ["comparability", "lifespan"])
        self.assertTrue(any(v.element == "b" for v in report.violations))

    def test_missing_self_loop_reported(self):
        dg = Timeline.constant(("a",), Graph.of(["a"]))
        self.assertEqual(validate(dg).codes(), ["self-loop"])

    def test_split_lifespan_reported(self):
        X = ("a",)
        theta = from_pieces(
            X,
            [(Interval.closed(F(0), F(1)), sp(X, ["a"])), (Interval.closed(F(2), F(3)), sp(X, ["a"]))],
            SubPartition.empty(X),
        )
        report = validate(theta)
        self.assertIn("lifespan", report.codes())
        self.assertIn("not a single interval", str(report))

    def test_unsorted_critical_times_rejected(self):
        with self.assertRaises(ValueError):
            Timeline(frozenset(), (F(2), F(1)), (Graph(), Graph()), (Graph(),), Graph(), Graph())


@pytest.mark.parametrize("seed", range(40))
def test_random_timelines_are_valid(seed):
    rng = seeded(seed)
    require_valid(random_dg(rng))
    require_valid(random_ddg(rng))
    require_valid(random_formigram(rng))


class TestTripods(unittest.TestCase):
    def test_projections_must_be_onto(self):
        with self.assertRaises(MalformedValueError):
            Tripod(frozenset({"x", "x2"}), frozenset({"y"}), frozenset({("x", "y")}))

    def test_counts(self):
        # relations on 2 x 2 with full projections
        self.assertEqual(len(list(correspondences(["a", "b"], ["c", "d"]))), 7)
        minimal = minimal_correspondences(["a", "b"], ["c", "d"])
        self.assertEqual(len(minimal), 2)
        self.assertTrue(all(r.is_minimal() for r in minimal))
        self.assertEqual(len(minimal_correspondences(["x"], ["y1", "y2"])), 1)
        self.assertEqual(len(list(correspondences(["a", "b"], ["p", "q", "r"]))), 25)
        # one x takes a nonempty proper subset of the ys, the other takes the rest
        self.assertEqual(len(minimal_correspondences(["a", "b"], ["p", "q", "r"])), 6)
        self.assertEqual(len(minimal_correspondences([], [])), 1)
        self.assertEqual(minimal_correspondences(["a"], []), [])

    def test_forward_and_backward(self):
        r = Tripod.of([("x", "y1"), ("x", "y2")])
        self.assertEqual(r.forward(), {"x": frozenset({"y1", "y2"})})
        self.assertEqual(r.backward()["y2"], frozenset({"x"}))
        self.assertEqual(r.inverse().inverse(), r)


class TestMetricSpace(unittest.TestCase):
    def test_ultrametric_checks(self):
        u = MetricSpace.of("abc", {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 2})
        self.assertTrue(u.is_ultrametric())
        self.assertTrue(u.is_metric())
        not_u = MetricSpace.of("abc", {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 3})
        self.assertFalse(not_u.is_ultrametric())
        with self.assertRaises(NotUltrametricError):
            not_u.require_ultrametric()
        with self.assertRaises(NotUltrametricError):
            MetricSpace.of("ab", {("a", "b"): 0}).require_ultrametric()

    def test_missing_distance(self):
        with self.assertRaises(MalformedValueError):
            MetricSpace.of("abc", {("a", "b"): 1})

    def test_diameter(self):
        self.assertEqual(MetricSpace.point().diameter(), 0)
        self.assertEqual(MetricSpace.of("ab", {("a", "b"): "3/2"}).diameter(), F(3, 2))


class TestNumbers(unittest.TestCase):
    def test_to_fraction(self):
        self.assertEqual(to_fraction("1/3"), F(1, 3))
        self.assertEqual(to_fraction("0.25"), F(1, 4))
        self.assertEqual(to_fraction(3), F(3))
        with self.assertRaises(FormatError):
            to_fraction("one")
        with self.assertRaises(FormatError):
            to_fraction(True)

    def test_extended_times(self):
        self.assertEqual(to_extended("-inf"), -INF)
        self.assertEqual(format_time(INF), "inf")
        self.assertEqual(format_time(F(6, 4)), "3/2")
        self.assertEqual(format_time(F(4)), "4")

    def test_simplest_between(self):
        self.assertEqual(simplest_between(F(1, 3), F(1, 2)), F(1, 2))
        self.assertEqual(simplest_between(F(7, 10), F(3, 4)), F(3, 4))
        self.assertEqual(simplest_between(F(-1, 2), F(1, 2)), 0)
        self.assertEqual(simplest_between(F(-5, 2), F(-9, 4)), F(-5, 2))
        self.assertEqual(simplest_between(F(9, 4), F(12, 5)), F(7, 3))
        with self.assertRaises(ValueError):
            simplest_between(F(1), F(0))


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("FORMIBAR_GH_BOUND", "4")
    monkeypatch.setenv("FORMIBAR_BISECTION_TOLERANCE", "1/1024")
    settings = Settings.from_env()
    assert settings.gh_bound == 4
    assert settings.bisection_tolerance == F(1, 1024)


@pytest.mark.parametrize("name,raw", [("FORMIBAR_SIZE_BOUND", "twelve"), ("FORMIBAR_WORKERS", "2.5"), ("FORMIBAR_BISECTION_TOLERANCE", "tiny")])
def test_malformed_setting_names_the_variable(monkeypatch, name, raw):
    monkeypatch.setenv(name, raw)
    with pytest.raises(FormatError, match=name):
        Settings.from_env()
