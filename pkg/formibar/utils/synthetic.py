from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from formibar.clustering.components import pi0_dg
from formibar.core.errors import InvalidParameterError
from formibar.core.graphs import Digraph, Graph
from formibar.core.metric_space import MetricSpace
from formibar.core.timeline import DynamicDigraph, DynamicGraph, Formigram, Timeline
from formibar.dms.dms import DMS, PiecewiseLinear, scaled_dms
from formibar.dms.trajectories import TrajectorySet

REGIMES = ("cohesive", "dispersed", "pulsing")


def _random_crit(rng: random.Random, count: int) -> List[Fraction]:
    slots = rng.sample(range(1, 4 * count + 2), count)
    return sorted(Fraction(s, 2) for s in slots)


def _random_lifespans(rng: random.Random, names: Sequence[str], n_levels: int):
    # a lifespan starts at the left tail or a critical level and ends at a critical level or
    # the right tail, so it is a closed interval of time
    closed_starts = [0] + list(range(1, n_levels - 1, 2))
    spans = {}
    for x in names:
        start = rng.choice(closed_starts)
        ends = [k for k in range(1, n_levels - 1, 2) if k >= max(start, 1)] + [n_levels - 1]
        spans[x] = (start, rng.choice(ends))
    return spans


def _random_levels(
    rng: random.Random, n_vertices: int, n_crit: int, directed: bool, edge_probability: float
) -> Tuple[List[str], List[Fraction], List[Tuple[List[str], set]]]:
    names = [f"x{i + 1}" for i in range(n_vertices)]
    crit = _random_crit(rng, n_crit)
    n_levels = 2 * n_crit + 1
    spans = _random_lifespans(rng, names, n_levels)
    alive = [[x for x in names if spans[x][0] <= k <= spans[x][1]] for k in range(n_levels)]
    pairs = [
        (a, b) for a, b in (itertools.permutations(names, 2) if directed else itertools.combinations(names, 2))
    ]
    links = [set() for _ in range(n_levels)]
    for k in range(n_levels):
        for a, b in pairs:
            if a in alive[k] and b in alive[k] and rng.random() < edge_probability:
                links[k].add((a, b))
    # local maximality: whatever holds on an open piece also holds at the neighbouring critical times
    for k in range(0, n_levels, 2):
        for j in (k - 1, k + 1):
            if 0 < j < n_levels - 1:
                links[j] |= links[k]
    return names, crit, [(alive[k], links[k]) for k in range(n_levels)]


def _assemble(names, crit, values) -> Timeline:
    n = len(crit)
    levels = list(values)
    if n == 0:
        return Timeline.constant(names, levels[0])
    at_crit = tuple(levels[1:-1:2])
    on_gap = tuple(levels[2:-1:2])
    return Timeline(frozenset(names), tuple(crit), at_crit, on_gap, levels[0], levels[-1])


def random_dg(
    rng: random.Random, max_vertices: int = 4, max_crit: int = 5, edge_probability: float = 0.4
) -> DynamicGraph:
    """A valid DG with random vertex lifespans and edges."""
    n_vertices = rng.randint(1, max_vertices)
    n_crit = rng.randint(0, max_crit)
    names, crit, levels = _random_levels(rng, n_vertices, n_crit, False, edge_probability)
    values = [Graph.of(alive, edges, loops=True) for alive, edges in levels]
    return _assemble(names, crit, values)


def random_ddg(
    rng: random.Random, max_vertices: int = 4, max_crit: int = 5, arc_probability: float = 0.3
) -> DynamicDigraph:
    n_vertices = rng.randint(1, max_vertices)
    n_crit = rng.randint(0, max_crit)
    names, crit, levels = _random_levels(rng, n_vertices, n_crit, True, arc_probability)
    values = [Digraph.of(alive, arcs, loops=True) for alive, arcs in levels]
    return _assemble(names, crit, values)


def random_formigram(rng: random.Random, max_elements: int = 8, max_crit: int = 10) -> Formigram:
    return pi0_dg(random_dg(rng, max_elements, max_crit))


def cosine_psi(
    omega: Fraction = Fraction(1),
    periods: int = 3,
    step: Fraction = Fraction(1, 2**8),
    denominator: int = 10**6,
) -> PiecewiseLinear:
    """PL samples of 1 + cos(omega t) between two zeros, with exact zeros at the minima.

    The period is a rational approximation of 2 pi / omega, so the samples repeat exactly.
    """
    period = Fraction(2 * math.pi / float(omega)).limit_denominator(denominator)
    per_period = max(4, 2 * round(float(period / step) / 2))
    start = -period / 2
    times, values = [], []
    for k in range(periods * per_period + 1):
        phase = k % per_period
        times.append(start + k * period / per_period)
        if phase == 0:
            values.append(Fraction(0))
        else:
            values.append(Fraction(1 + math.cos(2 * math.pi * phase / per_period - math.pi)).limit_denominator(denominator))
    return PiecewiseLinear(tuple(times), tuple(values))


def cosine_dms_pair(
    tau: Fraction,
    omega: Fraction = Fraction(1),
    periods: int = 3,
    step: Fraction = Fraction(1, 2**8),
    space: Optional[MetricSpace] = None,
) -> Tuple[DMS, DMS]:
    """The psi-modulated pair d(t) = psi(t) d' and d(t) = psi(t + tau) d'."""
    space = space or MetricSpace.of(("a", "b"), {("a", "b"): 1})
    psi = cosine_psi(omega, periods, step)
    return scaled_dms(space, psi), scaled_dms(space, psi.shifted(Fraction(tau)))


def _to_rational(value: float) -> Fraction:
    return Fraction(float(value)).limit_denominator(1000)


def _flock(
    gen: np.random.Generator, offsets: np.ndarray, spread: Callable[[int], float], steps: int
) -> TrajectorySet:
    drift = np.cumsum(gen.normal(0.0, 0.3, size=(steps + 1, 2)), axis=0)
    paths = {}
    for i, base in enumerate(offsets):
        rows = []
        for t in range(steps + 1):
            position = drift[t] + spread(t) * base
            rows.append((Fraction(t), tuple(_to_rational(c) for c in position)))
        paths[f"p{i + 1}"] = tuple(rows)
    return TrajectorySet(2, paths)


def regime_trajectories(regime: str, gen: np.random.Generator, points: int = 4, steps: int = 12) -> TrajectorySet:
    """One synthetic flock; at Rips scale 1, cohesive stays connected, dispersed never links and
    pulsing alternates between the two every couple of time units."""
    if regime == "cohesive":
        angles = gen.uniform(0, 2 * math.pi, size=points)
        radii = gen.uniform(0, 0.25, size=points)
        offsets = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
        return _flock(gen, offsets, lambda t: 1.0, steps)
    if regime == "dispersed":
        offsets = np.stack([4.0 * np.arange(points), np.zeros(points)], axis=1) + gen.uniform(-0.3, 0.3, (points, 2))
        return _flock(gen, offsets, lambda t: 1.0, steps)
    if regime == "pulsing":
        offsets = np.stack([1.1 * np.arange(points), np.zeros(points)], axis=1) + gen.uniform(-0.05, 0.05, (points, 2))
        schedule = (0.2, 3.0, 3.0, 0.2)
        return _flock(gen, offsets, lambda t: schedule[t % 4], steps)
    raise InvalidParameterError(f"unknown regime {regime!r}; expected one of {', '.join(REGIMES)}")


def three_regime_fixture(seed: int = 0, per_regime: int = 2) -> List[Tuple[str, TrajectorySet]]:
    gen = np.random.default_rng(seed)
    return [(regime, regime_trajectories(regime, gen)) for regime in REGIMES for _ in range(per_regime)]
