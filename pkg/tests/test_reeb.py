from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest

from fixtures import (
    births_and_deaths_formigram,
    nonplanar_formigram,
    same_reeb_pair,
    seeded,
    three_phase_formigram,
    tightness_pair,
)
from formibar.core.errors import InvalidWindowError
from formibar.reeb.export import export_dot
from formibar.reeb.reeb_graph import betti_1, glue, reeb_levelset_barcode, reeb_of_formigram
from formibar.utils.synthetic import random_formigram
from formibar.zigzag.barcode import barcode_of_formigram

F = Fraction
GOLDEN = Path(__file__).parent / "golden"


def covering_window(theta):
    if not theta.crit:
        return F(0), F(0)
    return theta.crit[0] - 1, theta.crit[-1] + 1


def test_three_phase_dot_matches_golden():
    reeb = reeb_of_formigram(three_phase_formigram(), F(0), F(20))
    assert export_dot(reeb) == (GOLDEN / "example_reeb.dot").read_text()


def test_nonplanar_dot_matches_golden():
    reeb = reeb_of_formigram(nonplanar_formigram(), F(1, 2), F(5, 2))
    assert export_dot(reeb) == (GOLDEN / "k33_reeb.dot").read_text()


def test_cycle_ranks():
    assert betti_1(reeb_of_formigram(three_phase_formigram(), F(0), F(20))) == 3
    assert betti_1(reeb_of_formigram(nonplanar_formigram(), F(1, 2), F(5, 2))) == 4


def test_different_formigrams_same_graph():
    theta_x, theta_y = same_reeb_pair()
    gx = reeb_of_formigram(theta_x, F(-4), F(4)).to_networkx()
    gy = reeb_of_formigram(theta_y, F(-4), F(4)).to_networkx()
    assert nx.is_isomorphic(gx, gy)
    assert barcode_of_formigram(theta_x) == barcode_of_formigram(theta_y)
    assert len(theta_x.universe) != len(theta_y.universe)


def test_empty_window_gives_empty_graph():
    reeb = reeb_of_formigram(births_and_deaths_formigram(), F(10), F(20))
    assert reeb.vertices == () and reeb.edges == ()
    assert export_dot(reeb) == "digraph reeb {\n}\n"


def test_reversed_window_rejected():
    with pytest.raises(InvalidWindowError):
        reeb_of_formigram(three_phase_formigram(), F(5), F(1))


def test_glue_adjacent_windows():
    theta = three_phase_formigram()
    whole = reeb_of_formigram(theta, F(0), F(20))
    glued = glue(reeb_of_formigram(theta, F(0), F(12)), reeb_of_formigram(theta, F(12), F(20)))
    # the gluing time adds one vertex per block and splits the edges through it
    assert betti_1(glued) == betti_1(whole)
    assert len(glued.vertices) == len(whole.vertices) + 2


def test_glue_needs_touching_windows():
    theta = three_phase_formigram()
    with pytest.raises(InvalidWindowError):
        glue(reeb_of_formigram(theta, F(0), F(5)), reeb_of_formigram(theta, F(6), F(20)))


def test_levelset_barcode_needs_covering_window():
    with pytest.raises(InvalidWindowError):
        reeb_levelset_barcode(three_phase_formigram(), F(0), F(12))


@pytest.mark.parametrize(
    "theta",
    [three_phase_formigram(), births_and_deaths_formigram(), nonplanar_formigram(), *same_reeb_pair(), *tightness_pair()],
)
def test_levelset_barcode_of_fixtures(theta):
    start, end = covering_window(theta)
    assert reeb_levelset_barcode(theta, start, end) == barcode_of_formigram(theta)


@pytest.mark.parametrize("seed", range(200))
def test_levelset_barcode_of_random_formigrams(seed):
    theta = random_formigram(seeded(5000 + seed))
    start, end = covering_window(theta)
    assert reeb_levelset_barcode(theta, start, end) == barcode_of_formigram(theta)
