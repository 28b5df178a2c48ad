from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coarse_dyn.errors import DomainError, WindowError
from coarse_dyn.exact import ExactReal
from coarse_dyn.metric_core import (
    GRID_X,
    GRID_Y,
    Grid3,
    Halfline,
    Strip,
    Window,
    density_witness,
    dist,
    dist_bounds,
    lattice_points,
    nearest_distances,
    neighborhood_cover_check,
    samples,
    squares_halfline,
    strip_space,
    unit_chain,
    xk_lattice,
)

rationals = st.fractions(min_value=0, max_value=200, max_denominator=16)


def test_window_parse_and_tiling():
    w = Window.parse("1:2", "1/4")
    assert w.reals() == [1, Fraction(5, 4), Fraction(3, 2), Fraction(7, 4), 2]
    with pytest.raises(WindowError):
        Window(0, 1, Fraction(2, 5))
    with pytest.raises(WindowError):
        Window(2, 1)
    with pytest.raises(WindowError):
        Window(0, 1, 1, (3, 2))


def test_sample_counts():
    assert len(samples(strip_space(2), Window(0, 4, 1))) == 15
    # grid X has 2n+1 labels, grid Y 2n
    assert len(samples(GRID_X, Window(0, 1, 1, (1, 2)))) == 2 * (3 + 5)
    assert len(samples(GRID_Y, Window(0, 1, 1, (1, 2)))) == 2 * (2 + 4)
    assert samples(squares_halfline(), Window(0, 2, 1)) == [Halfline.of(1), Halfline.of(2)]


def test_space_membership():
    assert GRID_X.contains(Grid3(4, Fraction(1), 5))
    assert not GRID_Y.contains(Grid3(4, Fraction(1), 5))
    assert not GRID_X.contains(Grid3(5, Fraction(1), 1))
    assert strip_space(1).contains(Strip(Fraction(0), 1))
    assert not strip_space(1).contains(Strip(Fraction(-1), 0))
    assert xk_lattice(1).contains(Halfline(ExactReal.root(3, -1)))
    assert not xk_lattice(0).contains(Halfline.of(Fraction(3, 2)))


def test_max_norm():
    assert dist(Strip(Fraction(0), 0), Strip(Fraction(3), 1)) == 3
    assert dist(Grid3(4, Fraction(1), 1), Grid3(9, Fraction(1), 2)) == 5
    assert dist(Halfline.of(2), Halfline.of(Fraction(7, 2))) == Fraction(3, 2)
    with pytest.raises(DomainError):
        dist(Strip(Fraction(0), 0), Halfline.of(1))


def test_irrational_distance_is_enclosed():
    lo, hi = dist_bounds(Halfline(ExactReal.root(2, -1)), Halfline.of(1))
    assert lo <= hi
    assert hi - lo <= Fraction(1, 2 ** 120)
    assert Fraction(41, 100) < lo < Fraction(42, 100)


def test_lattice_points():
    pts = lattice_points(0, 1, 5)
    assert [p.r for p in pts] == [ExactReal(i) for i in range(1, 6)]
    pts = lattice_points(-1, 1, 30)
    assert [p.r for p in pts] == [ExactReal(i * i) for i in range(1, 6)]
    pts = lattice_points(1, 2, 3)
    assert [p.r.canonical() for p in pts] == [("q", 2), ("root", 5, -1), ("root", 6, -1), ("root", 7, -1), ("root", 8, -1), ("q", 3)]


def test_unit_chain_examples():
    p, q = Strip(Fraction(0), 0), Strip(Fraction(5, 2), 2)
    chain = unit_chain(p, q)
    assert chain[0] == p and chain[-1] == q
    assert len(chain) == 4
    assert unit_chain(p, p) == [p]
    with pytest.raises(DomainError):
        unit_chain(Grid3(1, Fraction(0), 1), Grid3(4, Fraction(0), 1))


def test_cover_check_reports_first_and_farthest():
    A = [Halfline.of(i * i) for i in range(1, 11)]
    target = [Halfline.of(i) for i in range(1, 101)]
    rep = neighborhood_cover_check(A, target, 2)
    assert not rep.covered
    assert rep.witness == Halfline.of(12)
    assert rep.farthest == Halfline.of(90)
    assert rep.farthest_distance == 9
    assert neighborhood_cover_check(A, target, 10).covered
    assert neighborhood_cover_check(target, target, 0).covered
    rays = [Strip(Fraction(i), 0) for i in range(11)]
    assert neighborhood_cover_check(rays, [Strip(Fraction(i), 1) for i in range(11)], 1).covered


def test_density_witness_examples():
    squares = [Halfline.of(i * i) for i in range(1, 40)]
    w = density_witness(squares[:6], Window(1, 36), 5)
    assert w == Halfline.of(Fraction(61, 2))
    assert nearest_distances(squares, [w])[0][0] == Fraction(11, 2)
    fourth = [Halfline.of(m ** 4) for m in range(1, 5)]
    w = density_witness(fourth, Window(1, 256), 3)
    assert nearest_distances(fourth, [w])[0][0] > 3
    assert density_witness([Halfline.of(i) for i in range(1, 101)], Window(1, 100), Fraction(1, 2)) is None


def test_nearest_distances_grid():
    A = [Grid3(4, Fraction(0), 1), Grid3(9, Fraction(10), 3)]
    out = nearest_distances(A, [Grid3(4, Fraction(2), 2), Grid3(9, Fraction(9), 1)])
    assert out[0] == (2, A[0])
    assert out[1] == (2, A[1])


strip_points = st.builds(Strip, rationals, st.integers(0, 4))
grid_points = st.integers(1, 8).flatmap(
    lambda n: st.builds(Grid3, st.just(n * n), rationals, st.integers(1, 2 * n + 1))
)


@given(strip_points, strip_points, strip_points)
def test_metric_axioms_strip(p, q, s):
    assert dist(p, q) >= 0
    assert (dist(p, q) == 0) == (p == q)
    assert dist(p, q) == dist(q, p)
    assert dist(p, s) <= dist(p, q) + dist(q, s)


@given(grid_points, grid_points, grid_points)
def test_metric_axioms_grid(p, q, s):
    assert dist(p, q) == dist(q, p)
    assert (dist(p, q) == 0) == (p == q)
    assert dist(p, s) <= dist(p, q) + dist(q, s)


@given(strip_points, strip_points)
def test_unit_chain_bounds_strip(p, q):
    chain = unit_chain(p, q, strip_space(4))
    steps = math.ceil(dist(p, q))
    assert chain[0] == p and chain[-1] == q
    assert len(chain) == max(steps, 0) + 1
    assert all(dist(a, b) <= 1 for a, b in zip(chain, chain[1:]))
    assert all(strip_space(4).contains(c) for c in chain)


@given(st.integers(1, 8), rationals, rationals, st.data())
def test_unit_chain_stays_in_grid(n, r1, r2, data):
    k1 = data.draw(st.integers(1, 2 * n + 1))
    k2 = data.draw(st.integers(1, 2 * n + 1))
    p, q = Grid3(n * n, r1, k1), Grid3(n * n, r2, k2)
    chain = unit_chain(p, q, GRID_X)
    assert all(GRID_X.contains(c) for c in chain)
    assert all(dist(a, b) <= 1 for a, b in zip(chain, chain[1:]))


@settings(max_examples=60)
@given(st.lists(st.integers(1, 60), min_size=1, max_size=12, unique=True), st.integers(0, 6))
def test_density_agrees_with_cover(A, C):
    # On integer sets with a half-integer sampling grid, the continuum
    # test and the sampled cover test agree.
    pts = [Halfline.of(a) for a in A]
    w = Window(1, 60, Fraction(1, 2))
    witness = density_witness(pts, w, C)
    cover = neighborhood_cover_check(pts, samples(squares_halfline(), w), C)
    assert (witness is None) == cover.covered
    if witness is not None:
        assert nearest_distances(pts, [witness])[0][0] > C
