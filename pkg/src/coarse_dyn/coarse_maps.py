"""Closeness, control and coarse inverses, measured on finite windows.

Everything here is a desk-scale estimate: suprema are maxima over the
sample grid of a :class:`~coarse_dyn.metric_core.Window`, control functions
are maxima over sampled pairs.  A ``BoundedClose`` verdict therefore says
"no divergence on these windows", never "close on the whole space"; reports
carry ``scope = "finite-window"`` to say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError
from .exact import as_fraction
from .metric_core import (
    CoarseMapSpec,
    Halfline,
    Point,
    Window,
    _coords,
    _slack,
    dist,
    identity_map,
    samples,
)

CLOSE_TOL = Fraction(1, 2 ** 40)
DIVERGENCE_FACTOR = Fraction(3, 2)
DEFAULT_BUCKETS = (1, 2, 4, 8, 16)


# -- composition ------------------------------------------------------------------


def compose(a: CoarseMapSpec, b: CoarseMapSpec) -> CoarseMapSpec:
    """``a o b``."""
    if a.domain != b.codomain:
        raise DomainError(f"cannot compose {a.id} after {b.id}: {b.codomain.name} != {a.domain.name}")
    inverse = None
    if a.inverse is not None and b.inverse is not None:
        inverse = lambda p: b.inverse(a.inverse(p))
    return CoarseMapSpec(f"{a.id}*{b.id}", b.domain, a.codomain, lambda p: a.fn(b.fn(p)), inverse=inverse)


def iterate(spec: CoarseMapSpec, n: int) -> CoarseMapSpec:
    """The ``n``-fold composite, through the closed form when there is one."""
    if n < 1:
        raise DomainError("iterate count must be >= 1")
    if not spec.is_endomorphism:
        raise DomainError(f"{spec.id} maps {spec.domain.name} to {spec.codomain.name}; cannot iterate")
    if n == 1:
        return spec
    if spec.power is not None:
        fn = lambda p: spec.power(n, p)
    else:
        def fn(p):
            for _ in range(n):
                p = spec.fn(p)
            return p
    inverse = None
    if spec.inverse is not None:
        def inverse(p):
            for _ in range(n):
                p = spec.inverse(p)
            return p
    power = None
    if spec.power is not None:
        power = lambda m, p: spec.power(n * m, p)
    return CoarseMapSpec(f"{spec.id}^{n}", spec.domain, spec.codomain, fn, inverse=inverse, power=power)


def brute_iterate(spec: CoarseMapSpec, n: int, p):
    for _ in range(n):
        p = spec.fn(p)
    return p


# -- closeness -------------------------------------------------------------------


@dataclass
class SupDistance:
    value: Fraction
    witness: Optional[Point]
    samples: int

    def __iter__(self):
        return iter((self.value, self.witness))


def sup_distance(a: CoarseMapSpec, b: CoarseMapSpec, window: Window, points: Sequence | None = None) -> SupDistance:
    """Largest ``dist(a(x), b(x))`` over the window's samples, with an argmax."""
    if a.domain != b.domain:
        raise DomainError(f"{a.id} and {b.id} have different domains")
    if a.codomain.point_type is not b.codomain.point_type:
        raise DomainError(f"{a.id} and {b.id} have incompatible codomains")
    pts = samples(a.domain, window) if points is None else points
    best, arg = None, None
    for x in pts:
        d = dist(a.fn(x), b.fn(x))
        if best is None or d > best:
            best, arg = d, x
    return SupDistance(Fraction(0) if best is None else best, arg, len(pts))


@dataclass
class Verdict:
    kind: str  # "BoundedClose" | "Diverging" | "Inconclusive"
    bound: Optional[Fraction] = None
    exponent: Optional[float] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "bound": self.bound, "exponent": self.exponent, "scope": "finite-window"}


@dataclass
class ClosenessReport:
    windows: list
    sup_values: list
    witnesses: list
    verdict: Verdict

    @property
    def bounded(self) -> bool:
        return self.verdict.kind == "BoundedClose"

    @property
    def sup(self) -> Fraction:
        return self.sup_values[-1]

    def to_dict(self) -> dict:
        return {
            "windows": [[w.lo, w.hi, w.step, list(w.n_range) if w.n_range else None] for w in self.windows],
            "sup_values": self.sup_values,
            "witnesses": self.witnesses,
            "verdict": self.verdict.to_dict(),
        }


def growth_exponent(radii: Sequence, sups: Sequence) -> Optional[float]:
    """Least-squares slope of ``log sup`` against ``log radius`` over positive entries."""
    pairs = [(float(r), float(s)) for r, s in zip(radii, sups) if r > 0 and s > 0]
    if len(pairs) < 2:
        return None
    x, y = np.log([p[0] for p in pairs]), np.log([p[1] for p in pairs])
    if np.ptp(x) == 0:
        return None
    return float(np.polyfit(x, y, 1)[0])


def _window_radius(w: Window) -> Fraction:
    return Fraction(w.n_range[1]) ** 2 if w.n_range else w.hi


def classify(windows: Sequence[Window], sups: Sequence[Fraction]) -> Verdict:
    last, prev = sups[-1], sups[-2]
    if abs(last - prev) <= CLOSE_TOL:
        return Verdict("BoundedClose", bound=last)
    if prev > 0 and last >= DIVERGENCE_FACTOR * prev:
        radii = [_window_radius(w) for w in windows]
        return Verdict("Diverging", exponent=growth_exponent(radii, sups))
    return Verdict("Inconclusive", bound=last)


def closeness_trend(a: CoarseMapSpec, b: CoarseMapSpec, windows: Sequence[Window]) -> ClosenessReport:
    """Sup distances over nested windows and a verdict.

    ``BoundedClose(B)``  the last two sups agree to within ``2**-40``;
    ``Diverging``        the last sup is at least 1.5 times the previous one;
    ``Inconclusive``     anything else.
    """
    if len(windows) < 3:
        raise DomainError("closeness trend needs at least 3 nested windows")
    sups, wits = [], []
    if _shared_grid(windows):
        # One pass over the largest window; smaller windows are sub-grids.
        pts = samples(a.domain, windows[-1])
        dists = [dist(a.fn(x), b.fn(x)) for x in pts]
        for w in windows:
            best, arg = Fraction(0), None
            for x, d in zip(pts, dists):
                if _inside(x, w) and (arg is None or d > best):
                    best, arg = d, x
            sups.append(best)
            wits.append(arg)
    else:
        for w in windows:
            s = sup_distance(a, b, w)
            sups.append(s.value)
            wits.append(s.witness)
    return ClosenessReport(list(windows), sups, wits, classify(windows, sups))


def _shared_grid(windows: Sequence[Window]) -> bool:
    first = windows[0]
    for w, nxt in zip(windows, windows[1:]):
        if nxt.lo != first.lo or nxt.step != first.step or nxt.hi < w.hi:
            return False
        if (w.n_range is None) != (nxt.n_range is None):
            return False
        if w.n_range and (nxt.n_range[0] != first.n_range[0] or nxt.n_range[1] < w.n_range[1]):
            return False
    return True


def _inside(x, w: Window) -> bool:
    if w.n_range is not None and getattr(x, "nsq", 0) > w.n_range[1] ** 2:
        return False
    return x.r <= w.hi


# -- control ------------------------------------------------------------------


@dataclass
class ControlProfile:
    """Empirical control function on input-distance buckets.

    ``buckets[i] = (d_i, rho_i, witness_pair)``: ``rho_i`` is the largest image
    distance among sampled pairs at input distance ``<= d_i``.  ``expansion``
    (optional) holds ``(d_i, s_i, witness_pair)`` with ``s_i`` the smallest
    image distance among pairs at input distance ``>= d_i``.
    """

    buckets: list
    window: Window
    expansion: Optional[list] = None

    def rho(self, d) -> Fraction:
        d = as_fraction(d)
        if d <= 0:
            return Fraction(0)
        for bound, value, _ in self.buckets:
            if d <= bound:
                return value
        raise DomainError(f"distance {d} is beyond the largest bucket {self.buckets[-1][0]}")

    @property
    def rho1(self) -> Fraction:
        return self.rho(1)


def close_pairs(points: Sequence[Point], radius) -> list:
    """Index pairs ``(i, j)``, ``i < j``, with ``dist <= radius`` (exact)."""
    radius = as_fraction(radius)
    if not points:
        return []
    if isinstance(points[0], Halfline):
        order = sorted(range(len(points)), key=lambda i: points[i].r)
        out = []
        for a_pos, i in enumerate(order):
            for j in order[a_pos + 1:]:
                if dist(points[i], points[j]) > radius:
                    break
                out.append((min(i, j), max(i, j)))
        return out
    coords = _coords(points)
    tree = cKDTree(coords)
    cand = tree.query_pairs(float(radius) + _slack(coords), p=np.inf, output_type="ndarray")
    return [(int(i), int(j)) for i, j in cand if dist(points[i], points[j]) <= radius]


def control_profile(f: CoarseMapSpec, window: Window, bucket_bounds: Iterable = DEFAULT_BUCKETS,
                    expansion: bool = False) -> ControlProfile:
    pts = samples(f.domain, window)
    if not pts:
        raise DomainError("empty window")
    bounds = sorted(as_fraction(b) for b in bucket_bounds)
    images = [f.fn(p) for p in pts]
    pairs = close_pairs(pts, bounds[-1])
    raw = [(dist(pts[i], pts[j]), dist(images[i], images[j]), (pts[i], pts[j])) for i, j in pairs]
    raw.sort(key=lambda t: t[0])
    buckets = []
    best, wit, pos = Fraction(0), None, 0
    for bound in bounds:
        while pos < len(raw) and raw[pos][0] <= bound:
            if wit is None or raw[pos][1] > best:
                best, wit = raw[pos][1], raw[pos][2]
            pos += 1
        buckets.append((bound, best, wit))
    exp = None
    if expansion:
        exp = []
        every = [(dist(p, q), dist(images[i], images[j]), (p, q))
                 for i, p in enumerate(pts) for j, q in enumerate(pts) if i < j]
        for bound in bounds:
            cands = [t for t in every if t[0] >= bound]
            if cands:
                m = min(cands, key=lambda t: t[1])
                exp.append((bound, m[1], m[2]))
            else:
                exp.append((bound, None, None))
    return ControlProfile(buckets, window, exp)


@dataclass
class NonControlledWitness:
    pairs: list
    input_bound: Fraction
    image_distances: list
    thresholds: list

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "input_bound": self.input_bound,
            "image_distances": self.image_distances,
            "thresholds": self.thresholds,
        }


def non_controlled_witness(f: CoarseMapSpec, pair_family: Callable, params: Iterable, thresholds: Iterable
                           ) -> Optional[NonControlledWitness]:
    """Pairs of bounded input distance whose images separate past every threshold.

    ``pair_family(m)`` returns a pair of domain points.  Returns ``None`` if
    some threshold is never exceeded.
    """
    pairs, d_in, d_out = [], [], []
    for m in params:
        x, y = pair_family(m)
        pairs.append((x, y))
        d_in.append(dist(x, y))
        d_out.append(dist(f.fn(x), f.fn(y)))
    thresholds = [as_fraction(t) for t in thresholds]
    if not pairs or not all(any(d > t for d in d_out) for t in thresholds):
        return None
    return NonControlledWitness(pairs, max(d_in), d_out, thresholds)


# -- coarse inverses ---------------------------------------------------------------


@dataclass
class EquivalencePair:
    forward: str
    backward: str
    B: Fraction
    ok: bool
    back_forth: ClosenessReport  # backward o forward vs id on the domain
    forth_back: ClosenessReport  # forward o backward vs id on the codomain
    rho1_forward: Optional[Fraction] = None
    rho1_backward: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {
            "forward": self.forward,
            "backward": self.backward,
            "B": self.B,
            "ok": self.ok,
            "rho1_forward": self.rho1_forward,
            "rho1_backward": self.rho1_backward,
            "back_forth": self.back_forth.to_dict(),
            "forth_back": self.forth_back.to_dict(),
        }


def coarse_inverse_check(phi: CoarseMapSpec, psi: CoarseMapSpec, windows: Sequence[Window],
                         profile_window: Window | None = None) -> EquivalencePair:
    """Are ``phi`` and ``psi`` coarse inverses on these windows?

    ``B`` is the larger of the two final sups.  With ``profile_window`` the
    control constants ``rho(1)`` of both maps are measured as well.
    """
    if phi.domain != psi.codomain or phi.codomain != psi.domain:
        raise DomainError(f"{phi.id} and {psi.id} do not go back and forth between the same spaces")
    bf = closeness_trend(compose(psi, phi), identity_map(phi.domain), windows)
    fb = closeness_trend(compose(phi, psi), identity_map(phi.codomain), windows)
    B = max(bf.sup, fb.sup)
    pair = EquivalencePair(phi.id, psi.id, B, bf.bounded and fb.bounded, bf, fb)
    if profile_window is not None:
        pair.rho1_forward = control_profile(phi, profile_window, (1,)).rho1
        pair.rho1_backward = control_profile(psi, profile_window, (1,)).rho1
    return pair


@dataclass
class QIReport:
    ok: bool
    worst_pair: Optional[tuple]
    worst_slack: Optional[Fraction]
    C: Fraction
    A: Fraction
    pairs: int


def qi_lower_bound_check(Phi: CoarseMapSpec, rho1, B, window: Window) -> QIReport:
    """Check ``d(Phi x, Phi x') >= d(x, x')/rho1 - 1 - 2B/rho1`` on all sampled pairs.

    ``rho1`` is the measured ``rho(1)`` of a coarse inverse of ``Phi`` and ``B``
    the closeness constant of the two composites.
    """
    rho1, B = as_fraction(rho1), as_fraction(B)
    if rho1 == 0:
        raise DomainError("rho(1) must be non-zero")
    pts = samples(Phi.domain, window)
    images = [Phi.fn(p) for p in pts]
    A = 1 + 2 * B / rho1
    worst, worst_pair, count = None, None, 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            slack = dist(images[i], images[j]) - (dist(pts[i], pts[j]) / rho1 - A)
            count += 1
            if worst is None or slack < worst:
                worst, worst_pair = slack, (pts[i], pts[j])
    return QIReport(worst is None or worst >= 0, worst_pair, worst, rho1, A, count)


# -- sections of surjections --------------------------------------------------------


@dataclass
class SectionResult:
    """A section ``psi`` of a surjection ``phi`` and the closeness of
    ``psi o g`` to ``f o psi``.

    ``predicted_bound = rho_psi(D) + B_back`` where ``D`` is the measured
    closeness of ``phi o f`` and ``g o phi`` and ``B_back`` that of
    ``psi o phi`` and the identity: post-composing the first closeness with
    ``psi`` costs ``rho_psi(D)``, pre-composing the second with ``f o psi``
    costs nothing.
    """

    psi: CoarseMapSpec
    report: ClosenessReport
    section_exact: bool
    intertwining_exact: bool
    D: Optional[Fraction]
    B_back: Optional[Fraction]
    rho_psi_D: Optional[Fraction]
    predicted_bound: Optional[Fraction]

    @property
    def within_prediction(self) -> bool:
        return self.predicted_bound is not None and max(self.report.sup_values) <= self.predicted_bound


def section_map(phi: CoarseMapSpec, window: Window | None = None) -> CoarseMapSpec:
    """``psi`` with ``phi o psi = id``: the lexicographically least preimage.

    Fibres come from ``phi.preimages`` when available, otherwise from the
    samples of ``window``.
    """
    if phi.preimages is not None:
        def fibre(y):
            return [x for x in phi.preimages(y) if phi.domain.contains(x) and phi.fn(x) == y]
    else:
        if window is None:
            raise DomainError(f"{phi.id} has no fibre enumerator; give a window")
        table: dict = {}
        for x in samples(phi.domain, window):
            table.setdefault(phi.fn(x), []).append(x)
        fibre = lambda y: table.get(y, [])

    def psi(y):
        candidates = fibre(y)
        if not candidates:
            raise DomainError(f"{phi.id} is not surjective: nothing maps to {y!r}")
        return min(candidates)

    return CoarseMapSpec(f"section({phi.id})", phi.codomain, phi.domain, psi)


def section_of_surjection(phi: CoarseMapSpec, f: CoarseMapSpec, g: CoarseMapSpec,
                          windows: Sequence[Window], predict: bool = True) -> SectionResult:
    """Build a section of ``phi`` and certify ``psi o g ~ f o psi`` on ``windows``.

    With ``predict=False`` the constants ``D``, ``B_back`` and the predicted
    bound are not measured (they are ``None``); use this when ``phi`` is not
    known to intertwine ``f`` and ``g`` up to bounded error.
    """
    if f.domain != phi.domain or g.domain != phi.codomain:
        raise DomainError("f must act on the domain of phi and g on its codomain")
    big = windows[-1]
    psi = section_map(phi, big)
    ys = samples(phi.codomain, big)
    section_exact = all(phi.fn(psi.fn(y)) == y for y in ys)
    intertwining_exact = all(psi.fn(g.fn(y)) == f.fn(psi.fn(y)) for y in ys)
    report = closeness_trend(compose(psi, g), compose(f, psi), windows)
    if not predict:
        return SectionResult(psi, report, section_exact, intertwining_exact, None, None, None, None)
    xs = samples(phi.domain, big)
    D = sup_distance(compose(phi, f), compose(g, phi), big, xs).value
    B_back = sup_distance(compose(psi, phi), identity_map(phi.domain), big, xs).value
    rho_D = control_profile(psi, big, (max(D, Fraction(1)),)).rho(D) if D > 0 else Fraction(0)
    return SectionResult(psi, report, section_exact, intertwining_exact, D, B_back, rho_D, rho_D + B_back)


__all__ = [
    "compose",
    "iterate",
    "brute_iterate",
    "sup_distance",
    "SupDistance",
    "closeness_trend",
    "ClosenessReport",
    "Verdict",
    "classify",
    "growth_exponent",
    "control_profile",
    "ControlProfile",
    "close_pairs",
    "non_controlled_witness",
    "NonControlledWitness",
    "coarse_inverse_check",
    "EquivalencePair",
    "qi_lower_bound_check",
    "QIReport",
    "section_map",
    "section_of_surjection",
    "SectionResult",
]
