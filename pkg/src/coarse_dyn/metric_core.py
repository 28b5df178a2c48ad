"""Points, spaces, sampling windows and distances.

Three point shapes cover every space used here:

* ``Halfline(r)`` -- a point of ``[1, oo)`` (or of a lattice ``X_k`` inside it),
  with ``r`` an :class:`~coarse_dyn.exact.ExactReal`;
* ``Strip(r, j)`` -- a point of ``[0, oo) x {0..k}``;
* ``Grid3(nsq, r, k)`` -- a point ``(n**2, r, k)`` of the thick-halfline spaces
  in R^3.

All distances in R^2 and R^3 use the maximum norm.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, WindowError
from .exact import ExactReal, as_fraction


class Halfline(NamedTuple):
    r: ExactReal

    @classmethod
    def of(cls, x) -> "Halfline":
        return cls(ExactReal.of(x))


class Strip(NamedTuple):
    r: Fraction
    j: int


class Grid3(NamedTuple):
    nsq: int
    r: Fraction
    k: int

    @property
    def n(self) -> int:
        return math.isqrt(self.nsq)


Point = Union[Halfline, Strip, Grid3]


@dataclass(frozen=True)
class Space:
    """One of the space families: ``squares``, ``xk``, ``strip``, ``grid_x``, ``grid_y``.

    ``k`` is the label bound for strips and the lattice index for ``xk``.
    """

    kind: str
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("squares", "xk", "strip", "grid_x", "grid_y"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "strip" and (self.k is None or self.k < 0):
            raise ValueError("strip space needs k >= 0")
        if self.kind == "xk" and self.k is None:
            raise ValueError("lattice space needs k")

    @property
    def name(self) -> str:
        if self.kind in ("strip", "xk"):
            return f"{self.kind}({self.k})"
        return self.kind

    @property
    def point_type(self) -> type:
        if self.kind in ("squares", "xk"):
            return Halfline
        if self.kind == "strip":
            return Strip
        return Grid3

    def labels(self, n: int | None = None) -> range:
        """Admissible labels: ``0..k`` on a strip, ``1..2n+1`` / ``1..2n`` on the grids."""
        if self.kind == "strip":
            return range(0, self.k + 1)
        if self.kind == "grid_x":
            return range(1, 2 * n + 2)
        if self.kind == "grid_y":
            return range(1, 2 * n + 1)
        raise DomainError(f"{self.name} has no labels")

    def contains(self, p) -> bool:
        if self.kind in ("grid_x", "grid_y"):
            # Hot path: every grid map checks its domain.
            if type(p) is not Grid3 or p.nsq < 1:
                return False
            n = math.isqrt(p.nsq)
            top = 2 * n + 1 if self.kind == "grid_x" else 2 * n
            return n * n == p.nsq and p.r.numerator >= 0 and type(p.k) is int and 1 <= p.k <= top
        if not isinstance(p, self.point_type):
            return False
        if self.kind == "squares":
            return p.r >= 1
        if self.kind == "xk":
            from .constructions import xk_membership

            return p.r >= 1 and xk_membership(self.k, p.r)
        return p.r >= 0 and isinstance(p.j, int) and 0 <= p.j <= self.k

    def check(self, p) -> None:
        if not self.contains(p):
            raise DomainError(f"{p!r} is not a point of {self.name}")


def squares_halfline() -> Space:
    return Space("squares")


def strip_space(k: int) -> Space:
    return Space("strip", k)


def xk_lattice(k: int) -> Space:
    return Space("xk", k)


GRID_X = Space("grid_x")
GRID_Y = Space("grid_y")


@dataclass(frozen=True)
class Window:
    """Closed rational interval ``[lo, hi]`` sampled with a rational ``step``.

    ``n_range`` bounds the square index ``n`` for the grid spaces.
    """

    lo: Fraction
    hi: Fraction
    step: Fraction = Fraction(1)
    n_range: Optional[tuple[int, int]] = None

    def __post_init__(self):
        for name in ("lo", "hi", "step"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.hi < self.lo:
            raise WindowError(f"empty window [{self.lo}, {self.hi}]")
        if self.step <= 0:
            raise WindowError("window step must be positive")
        if ((self.hi - self.lo) / self.step).denominator != 1:
            raise WindowError(f"step {self.step} does not tile [{self.lo}, {self.hi}]")
        if self.n_range is not None:
            a, b = self.n_range
            if a < 1 or b < a:
                raise WindowError(f"bad index range {self.n_range}")

    @classmethod
    def parse(cls, interval: str, step: str = "1", n_range: str | None = None) -> "Window":
        """``Window.parse("1:100", "1/8")``; ``n_range`` as ``"1:32"``."""
        lo, hi = interval.split(":")
        nr = None
        if n_range:
            a, b = n_range.split(":")
            nr = (int(a), int(b))
        return cls(Fraction(lo), Fraction(hi), Fraction(step), nr)

    def reals(self) -> list[Fraction]:
        count = int((self.hi - self.lo) / self.step)
        return [self.lo + i * self.step for i in range(count + 1)]

    def indices(self) -> range:
        if self.n_range is None:
            raise WindowError("grid sampling needs an index range")
        return range(self.n_range[0], self.n_range[1] + 1)

    @property
    def radius(self) -> Fraction:
        return self.hi


def samples(space: Space, window: Window) -> list:
    """All sample points of ``space`` inside ``window``, in lexicographic order."""
    if space.kind == "squares":
        return [Halfline(ExactReal(x)) for x in window.reals() if x >= 1]
    if space.kind == "xk":
        return lattice_points(space.k, window.lo, window.hi)
    if space.kind == "strip":
        rs = window.reals()
        return [Strip(r, j) for r in rs for j in space.labels()]
    rs = window.reals()
    return [Grid3(n * n, r, k) for n in window.indices() for r in rs for k in space.labels(n)]


def lattice_points(k: int, lo, hi, limit: int = 1_000_000) -> list[Halfline]:
    """Points ``m ** (2 ** -k)`` of the lattice ``X_k`` lying in ``[lo, hi]``."""
    lo_v, hi_v = ExactReal.of(lo), ExactReal.of(hi)
    if lo_v < 1:
        lo_v = ExactReal(1)
    m_lo = max(1, lo_v.ceil_pow2(k))
    m_hi = hi_v.ceil_pow2(k)
    if ExactReal.root(m_hi, -k) > hi_v:
        m_hi -= 1
    if m_hi - m_lo + 1 > limit:
        raise WindowError(f"lattice X_{k} has {m_hi - m_lo + 1} points in the window")
    return [Halfline(ExactReal.root(m, -k)) for m in range(m_lo, m_hi + 1)]


# -- distances ---------------------------------------------------------------


def _same_variant(p, q) -> None:
    if type(p) is not type(q):
        raise DomainError(f"cannot measure distance between {type(p).__name__} and {type(q).__name__}")


def dist_bounds(p: Point, q: Point) -> tuple[Fraction, Fraction]:
    """Rational enclosure ``(lo, hi)`` of ``dist(p, q)``; ``lo == hi`` when exact."""
    _same_variant(p, q)
    if isinstance(p, Halfline):
        a, b = p.r, q.r
        if a.is_rational and b.is_rational:
            d = abs(a.as_fraction() - b.as_fraction())
            return d, d
        alo, ahi = a.enclose()
        blo, bhi = b.enclose()
        hi = max(ahi - blo, bhi - alo)
        lo = max(alo - bhi, blo - ahi, Fraction(0))
        return lo, hi
    d = _lattice_dist(p, q)
    return d, d


def _lattice_dist(p, q) -> Fraction:
    # Integer coordinates first; the rational one only when it differs.
    if type(p) is Grid3:
        d = max(abs(p.nsq - q.nsq), abs(p.k - q.k))
    else:
        d = abs(p.j - q.j)
    if p.r != q.r:
        dr = abs(p.r - q.r)
        if dr > d:
            return Fraction(dr)
    return Fraction(d)


def dist(p: Point, q: Point, space: Space | None = None) -> Fraction:
    """Maximum-norm distance.  For irrational halfline points this is an
    outward-rounded upper bound, within ``2**-precision`` of the true value."""
    if space is None and type(p) is type(q) and type(p) is not Halfline:
        return _lattice_dist(p, q)
    if space is not None:
        space.check(p)
        space.check(q)
    return dist_bounds(p, q)[1]


def unit_chain(p: Point, q: Point, space: Space | None = None) -> list:
    """Points ``p = y_0, ..., y_n = q`` with consecutive distances at most 1,
    ``n = ceil(dist(p, q))``; the label coordinate is floor-interpolated."""
    _same_variant(p, q)
    if space is not None:
        space.check(p)
        space.check(q)
    if isinstance(p, Halfline):
        if not (p.r.is_rational and q.r.is_rational):
            raise DomainError("unit chains need rational halfline endpoints")
        a, b = p.r.as_fraction(), q.r.as_fraction()
        n = math.ceil(abs(a - b))
        if n == 0:
            return [p]
        return [Halfline(ExactReal(((n - i) * a + i * b) / n)) for i in range(n + 1)]
    if isinstance(p, Grid3) and p.nsq != q.nsq:
        raise DomainError("points lie on different thick halflines; no unit chain stays inside the space")
    n = math.ceil(dist(p, q))
    if n == 0:
        return [p]
    s, s2 = p.r, q.r
    lab, lab2 = (p.j, q.j) if isinstance(p, Strip) else (p.k, q.k)
    chain = []
    for i in range(n + 1):
        r = Fraction((n - i) * s + i * s2) / n
        label = ((n - i) * lab + i * lab2) // n
        chain.append(Strip(r, label) if isinstance(p, Strip) else Grid3(p.nsq, r, label))
    return chain


# -- neighbourhoods ------------------------------------------------------------


@dataclass
class CoverReport:
    """Result of :func:`neighborhood_cover_check`.

    ``witness`` is the first uncovered target point (in the order given);
    ``farthest`` is the target point farthest from ``A`` with that distance.
    """

    covered: bool
    witness: Optional[object]
    farthest: Optional[object]
    farthest_distance: Fraction
    radius: Fraction

    def __bool__(self) -> bool:
        return self.covered


def _sorted_halfline(A: Iterable[Halfline]) -> list[ExactReal]:
    return sorted({a.r if isinstance(a, Halfline) else ExactReal.of(a) for a in A})


def _nearest_1d(values: Sequence[ExactReal], x: ExactReal) -> tuple[Fraction, ExactReal]:
    i = bisect.bisect_left(values, x)
    best = None
    for c in values[max(0, i - 1): i + 1]:
        d = dist(Halfline(c), Halfline(x))
        if best is None or d < best[0]:
            best = (d, c)
    return best


def _coords(points: Sequence[Point]) -> np.ndarray:
    return np.array([[float(c) for c in p] for p in points], dtype=float)


def _slack(*arrays: np.ndarray) -> float:
    scale = max(float(np.abs(a).max()) if a.size else 0.0 for a in arrays)
    return 1e-9 * (1.0 + scale)


def nearest_distances(A: Sequence[Point], targets: Sequence[Point]) -> list[tuple[Fraction, Point]]:
    """Exact nearest-point distance from each target to ``A``.

    Halfline points are handled by exact bisection; planar and spatial
    points go through a Chebyshev k-d tree used only to shortlist
    candidates, which are then compared exactly.
    """
    if not A:
        raise DomainError("reference set is empty")
    if isinstance(targets[0], Halfline) if targets else False:
        values = _sorted_halfline(A)
        out = []
        for t in targets:
            d, c = _nearest_1d(values, t.r)
            out.append((d, Halfline(c)))
        return out
    A = list(A)
    ca, ct = _coords(A), _coords(targets)
    tree = cKDTree(ca)
    approx, _ = tree.query(ct, k=1, p=np.inf)
    slack = _slack(ca, ct)
    out = []
    for t, x, d0 in zip(targets, ct, approx):
        best = None
        for idx in tree.query_ball_point(x, d0 + slack, p=np.inf):
            d = dist(A[idx], t)
            if best is None or d < best[0]:
                best = (d, A[idx])
        out.append(best)
    return out


def neighborhood_cover_check(A: Sequence[Point], target: Sequence[Point], B) -> CoverReport:
    """Is every target point within ``B`` of some point of ``A``?"""
    B = as_fraction(B)
    if B < 0:
        raise DomainError("radius must be non-negative")
    target = list(target)
    if not target:
        return CoverReport(True, None, None, Fraction(0), B)
    near = nearest_distances(list(A), target)
    witness = None
    far_i = 0
    for i, (d, _) in enumerate(near):
        if witness is None and d > B:
            witness = target[i]
        if d > near[far_i][0]:
            far_i = i
    return CoverReport(witness is None, witness, target[far_i], near[far_i][0], B)


def density_witness(A: Iterable, window: Window, C) -> Optional[Halfline]:
    """A point of the real interval ``[window.lo, window.hi]`` at distance
    more than ``C`` from every point of ``A``, or ``None`` if the closed
    ``C``-neighbourhood of ``A`` covers the whole interval.

    Every gap between consecutive points of ``A`` is clipped to the window
    and its most isolated point (the clamped midpoint) is a candidate; the
    candidate farthest from ``A`` is returned.  The final ``> C`` test is
    exact even when ``A`` holds irrational lattice points.
    """
    C = as_fraction(C)
    values = _sorted_halfline(A)
    if not values:
        raise DomainError("reference set is empty")
    lo, hi = window.lo, window.hi

    def proxy(v: ExactReal) -> Fraction:
        a, b = v.enclose()
        return (a + b) / 2

    cuts = [proxy(v) for v in values]
    candidates = {lo, hi}
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        candidates.add(min(max(mid, lo), hi))
    best = None
    for c in sorted(candidates):
        d, _ = _nearest_1d(values, ExactReal(c))
        if best is None or d > best[0]:
            best = (d, c)
    w = best[1]
    if _is_isolated(values, w, C):
        return Halfline(ExactReal(w))
    return None


def _is_isolated(values: Sequence[ExactReal], w: Fraction, C: Fraction) -> bool:
    # Exact: no value of A lies in the closed interval [w - C, w + C].
    i = bisect.bisect_left(values, ExactReal(w - C))
    return i == len(values) or values[i] > ExactReal(w + C)


def identity_map(space: Space) -> "CoarseMapSpec":
    return CoarseMapSpec(f"id.{space.name}", space, space, lambda p: p, inverse=lambda p: p,
                         power=lambda n, p: p, preimages=lambda p: [p])


@dataclass(frozen=True)
class CoarseMapSpec:
    """A named total map between two spaces.

    ``inverse`` is an exact inverse when the map is a bijection, ``power``
    a closed form for the ``n``-th iterate and ``preimages`` an enumerator
    of the (finite) fibre over a point.
    """

    id: str
    domain: Space
    codomain: Space
    fn: Callable = field(repr=False)
    inverse: Optional[Callable] = field(default=None, repr=False)
    power: Optional[Callable] = field(default=None, repr=False)
    preimages: Optional[Callable] = field(default=None, repr=False)

    def __call__(self, p):
        return self.fn(p)

    @property
    def is_endomorphism(self) -> bool:
        return self.domain == self.codomain
