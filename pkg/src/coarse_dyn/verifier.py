"""Scenario runners: each one binds the constructions to the coarse-map
checks and returns a :class:`ScenarioReport` of PASS/FAIL claims.

Non-conjugacy statements quantify over all coarse equivalences and cannot
be checked by sampling.  For those, the scenarios verify exactly every
hypothesis the obstruction consumes (a *premise certificate*).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .coarse_maps import (
    ClosenessReport,
    brute_iterate,
    closeness_trend,
    coarse_inverse_check,
    compose,
    iterate,
    non_controlled_witness,
    section_of_surjection,
    sup_distance,
)
from .constructions import (
    SquaresMapId,
    StripMapId,
    g_multiplier_exponent,
    grid_map,
    squares_map,
    label_collapse,
    squares_eval,
    squares_pow,
    strip_map,
    strip_pow_closed,
    xk_membership,
)
from .errors import DomainError
from .exact import ExactReal, as_fraction
from .metric_core import (
    CoarseMapSpec,
    Grid3,
    Halfline,
    Strip,
    Window,
    density_witness,
    dist,
    identity_map,
    lattice_points,
    nearest_distances,
    samples,
    squares_halfline,
    strip_space,
)

SCHEMA_VERSION = "v1"
PASS, FAIL = "PASS", "FAIL"


# -- reports ---------------------------------------------------------------------


@dataclass
class Claim:
    id: str
    anchor: str
    verdict: str
    witness: object = None
    bound: object = None
    value: object = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


def claim(id, anchor, ok, witness=None, bound=None, value=None, **details) -> Claim:
    return Claim(id, anchor, PASS if ok else FAIL, witness, bound, value, details)


@dataclass
class ScenarioReport:
    scenario: str
    params: dict
    claims: list = field(default_factory=list)
    runtime_ms: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def __getitem__(self, claim_id: str) -> Claim:
        for c in self.claims:
            if c.id == claim_id:
                return c
        raise KeyError(claim_id)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario,
            "params": jsonable(self.params),
            "claims": [
                {
                    "id": c.id,
                    "paper_anchor": c.anchor,
                    "verdict": c.verdict,
                    "witness": jsonable(c.witness),
                    "bound": None if c.bound is None else float(c.bound),
                    "bound_exact": None if c.bound is None else jsonable(c.bound),
                    "value": jsonable(c.value),
                    "details": jsonable(c.details),
                }
                for c in self.claims
            ],
            "runtime_ms": round(self.runtime_ms, 3) if timing and self.runtime_ms is not None else None,
        }


def jsonable(obj):
    """Exact, deterministic JSON form: rationals become ``"p/q"`` strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, ExactReal):
        return obj.to_json()
    if isinstance(obj, Halfline):
        return {"type": "halfline", "r": jsonable(obj.r)}
    if isinstance(obj, Strip):
        return {"type": "strip", "r": jsonable(obj.r), "j": obj.j}
    if isinstance(obj, Grid3):
        return {"type": "grid", "nsq": obj.nsq, "r": jsonable(obj.r), "k": obj.k}
    if isinstance(obj, Window):
        return {"lo": str(obj.lo), "hi": str(obj.hi), "step": str(obj.step),
                "n_range": list(obj.n_range) if obj.n_range else None}
    if isinstance(obj, ClosenessReport):
        return jsonable(obj.to_dict())
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.runtime_ms = (time.perf_counter() - t0) * 1000
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def _first(items, pred):
    for x in items:
        if pred(x):
            return x
    return None


def nested_windows(window: Window, parts: int = 3) -> list:
    """``parts`` nested windows sharing ``window``'s lower end and step."""
    out = []
    for i in range(parts, 0, -1):
        span = (window.hi - window.lo) / 2 ** (i - 1)
        span = (span // window.step) * window.step
        nr = None
        if window.n_range:
            a, b = window.n_range
            nr = (a, max(a, math.ceil(b / 2 ** (i - 1))))
        out.append(Window(window.lo, window.lo + span, window.step, nr))
    return out


# -- squares --------------------------------------------------------------------


@_timed
def scenario_squares(k: int, n: int, window: Window, C_schedule: Iterable = range(1, 11)) -> ScenarioReport:
    """Powers ``f_k**n`` against ``g**n`` on ``[1, oo)``.

    For ``n <= k`` the difference lies in ``[0, 2**(n-k)]`` (checked by exact
    comparison at every sample).  For ``n > k`` the image of ``f_k**n`` sits in
    the lattice ``X_{k-n}``, whose ``C``-neighbourhood misses points of the
    line for every ``C`` in the schedule.
    """
    if k < 1 or n < 1:
        raise DomainError("need k >= 1 and n >= 1")
    f, g, phi = SquaresMapId("f", k), SquaresMapId("g"), SquaresMapId("phi", k)
    xs = [x.r for x in samples(squares_halfline(), window)]
    report = ScenarioReport("squares", {"k": k, "n": n, "window": window})
    images = [squares_pow(f, n, x) for x in xs]

    def brute(x):
        for _ in range(n):
            x = squares_eval(f, x)
        return x

    bad = _first(range(len(xs)), lambda i: brute(xs[i]) != images[i])
    report.claims.append(claim("power-identity", "f_k^n equals g^n after phi_k", bad is None,
                               witness=None if bad is None else xs[bad]))

    def in_lattice(i):
        # Certificate check plus an integer-only cross-check of v^(2^(k-n)) = ceil(x^(2^k)).
        v = images[i]
        if not xk_membership(k - n, v):
            return False
        return v.pow2(k - n) == xs[i].ceil_pow2(k)

    bad = _first(range(len(xs)), lambda i: not in_lattice(i))
    report.claims.append(claim("image-lattice", "image of f_k^n is the lattice X_{k-n}", bad is None,
                               witness=None if bad is None else xs[bad], lattice=k - n))

    bad = _first(xs, lambda x: squares_eval(phi, squares_pow(f, n, x)) != squares_pow(g, n, squares_eval(phi, x)))
    report.claims.append(claim("phi-intertwines", "phi_k o f_k^n = g^n o phi_k", bad is None, witness=bad))

    if n <= k:
        bound = Fraction(1, 2 ** (k - n))
        gn = [x.pow2(n) for x in xs]
        below = _first(range(len(xs)), lambda i: images[i] < gn[i])
        above = _first(range(len(xs)), lambda i: images[i] > ExactReal(gn[i].as_fraction() + bound))
        sup, arg = Fraction(0), None
        for x, a, b in zip(xs, images, gn):
            hi = a.enclose()[1] - b.as_fraction()
            if arg is None or hi > sup:
                sup, arg = hi, x
        report.claims.append(claim("lower-bound", "f_k^n >= g^n", below is None,
                                   witness=None if below is None else xs[below], bound=Fraction(0)))
        report.claims.append(claim("upper-bound", "f_k^n - g^n <= 2^(n-k)", above is None,
                                   witness=arg if above is None else xs[above], bound=bound, value=sup))
    else:
        fmap, gmap = iterate(squares_map("f", k), n), iterate(squares_map("g"), n)
        trend = closeness_trend(fmap, gmap, nested_windows(window))
        report.claims.append(claim("not-close", "f_k^n and g^n are not close for n > k",
                                   trend.verdict.kind == "Diverging", witness=trend.witnesses[-1],
                                   value=trend.sup, trend=trend))
        lattice = k - n
        witnesses = []
        missing = []
        for C in C_schedule:
            C = as_fraction(C)
            upper = max(window.hi, (math.ceil(C) + 1) ** (2 ** (n - k)))
            A = lattice_points(lattice, 1, upper + C)
            w = density_witness(A, Window(window.lo, upper), C)
            if w is None:
                missing.append(C)
                continue
            d = nearest_distances(A, [w])[0][0]
            witnesses.append({"C": C, "point": w, "distance": d})
            if not d > C:
                missing.append(C)
        report.claims.append(claim("density-failure", "N_C(X_{k-n}) is a proper subset of [1, oo)",
                                   not missing, witness=witnesses, missing=missing))
    return report


# -- strips ---------------------------------------------------------------------


@dataclass
class QwertyPremises:
    """Hypotheses of the exponential-growth obstruction.

    ``f`` has an orbit from ``x0`` with first coordinate ``>= F**n``; ``g``
    multiplies the first coordinate by at most ``G < F``.  ``D`` (closeness),
    ``s`` (first coordinate of the image of ``x0``) and the quasi-isometry
    constants ``C``, ``A`` only enter the recurrence and the lower curve.
    """

    F: Fraction
    G: Fraction
    x0: object = None
    D: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    C: Fraction = Fraction(1)
    A: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("F", "G", "D", "s", "C", "A"):
            setattr(self, name, as_fraction(getattr(self, name)))
        if self.G <= 1:
            raise DomainError(f"G must exceed 1 (got {self.G})")
        if self.D < 0 or self.s < 0 or self.A < 0 or self.C <= 0:
            raise DomainError("need D, s, A >= 0 and C > 0")


@dataclass
class RecurrenceBound:
    c: Fraction
    a: Fraction
    trace: list
    holds: bool
    tight: bool
    crossover: Optional[int]
    violation: Optional[int] = None

    def upper(self, n: int, G: Fraction) -> Fraction:
        return self.c * G ** n + self.a

    def to_dict(self) -> dict:
        return {"c": self.c, "a": self.a, "holds": self.holds, "tight": self.tight,
                "crossover": self.crossover, "violation": self.violation, "N": len(self.trace) - 1}


def qwerty_recurrence(premises: QwertyPremises, N: int, max_crossover: int = 10_000) -> RecurrenceBound:
    """Worst case ``s_{n+1} = G s_n + D`` from ``s_0 = s`` against ``c G**n + a``.

    ``c = G max(D, s)/(G - 1)`` and ``a = -max(D, s)/(G - 1)``.  The crossover
    is the least ``n`` with ``F**n / C - A > c G**n + a``; it exists whenever
    ``F > G`` and is searched up to ``max_crossover``.
    """
    G, D, s = premises.G, premises.D, premises.s
    M = max(D, s)
    c, a = G * M / (G - 1), -M / (G - 1)
    trace = [s]
    for _ in range(N):
        trace.append(G * trace[-1] + D)
    holds, tight, violation = True, True, None
    Gn = Fraction(1)
    for i, v in enumerate(trace):
        ub = c * Gn + a
        if v > ub:
            holds, violation = False, i
            break
        if v != ub:
            tight = False
        Gn *= G
    crossover = None
    Fn, Gn = Fraction(1), Fraction(1)
    for i in range(max_crossover + 1):
        if Fn / premises.C - premises.A > c * Gn + a:
            crossover = i
            break
        Fn *= premises.F
        Gn *= G
    return RecurrenceBound(c, a, trace, holds, tight and holds, crossover, violation)


def _strip_pair_family(k: int):
    return lambda m: (Strip(Fraction(m), 0), Strip(Fraction(m), k))


def _dyadic(upto: int = 20) -> list:
    return [2 ** i for i in range(upto + 1)]


@_timed
def scenario_strips(k: int, n: int, window: Window) -> ScenarioReport:
    """Powers ``f_k**n`` against ``g_k**n`` on ``[0, oo) x {0..k}``.

    ``n <= k``: closed forms, equal first coordinates, sup distance ``<= k``.
    ``n > k``: premise certificate for the growth obstruction with
    ``F = 2**n``, ``G = 2**(n-1)``, ``x0 = (1, k)``, plus a witness that
    ``f_k**n`` is not controlled.
    """
    if k < 1 or n < 1:
        raise DomainError("need k >= 1 and n >= 1")
    S = strip_space(k)
    pts = samples(S, window)
    f1, g1 = strip_map("f", k), strip_map("g", k)
    fn, gn = iterate(f1, n), iterate(g1, n)
    report = ScenarioReport("strips", {"k": k, "n": n, "window": window})

    forms = ["general"] + (["piecewise"] if n <= k else []) + (["period"] if n == k + 1 else [])
    bad = None
    for kind, base in (("f", f1), ("g", g1)):
        for x in pts:
            ref = brute_iterate(base, n, x)
            for form in forms:
                if strip_pow_closed(StripMapId(kind, k), n, x, form) != ref:
                    bad = {"map": kind, "form": form, "point": x}
                    break
            if bad:
                break
        if bad:
            break
    report.claims.append(claim("closed-forms", "closed forms of f_k^n and g_k^n", bad is None,
                               witness=bad, forms=forms))

    bad = None
    for m in (f1, g1, fn, gn):
        bad = _first(pts, lambda x: m.inverse(m.fn(x)) != x or m.fn(m.inverse(x)) != x)
        if bad is not None:
            bad = {"map": m.id, "point": bad}
            break
    report.claims.append(claim("bijective", "f_k and g_k are bijections", bad is None, witness=bad))

    if n <= k:
        bad = _first(pts, lambda x: fn.fn(x).r != gn.fn(x).r)
        report.claims.append(claim("first-coordinates-agree", "f_k^n and g_k^n differ only in the label",
                                   bad is None, witness=bad))
        sd = sup_distance(fn, gn, window, pts)
        report.claims.append(claim("close", "f_k^n and g_k^n are close", sd.value <= k,
                                   witness=sd.witness, bound=Fraction(k), value=sd.value))
        return report

    F, G = Fraction(2) ** n, Fraction(2) ** (n - 1)
    exps = {j: g_multiplier_exponent(k, n, j) for j in range(k + 1)}
    brute_ok = all(brute_iterate(g1, n, Strip(Fraction(1), j)).r == 2 ** e for j, e in exps.items())
    mult_ok = all(e <= n - 1 for e in exps.values())
    report.claims.append(claim("multiplier-bound", "g_k^n multiplies by at most 2^(n-1)", mult_ok and brute_ok,
                               witness=None if mult_ok and brute_ok else exps, bound=G,
                               exponents=exps))

    bad = _first([x for x in pts if x.j == k], lambda x: fn.fn(x) != Strip(x.r * F, k))
    report.claims.append(claim("doubling-ray", "f_k^n(r, k) = (2^n r, k)", bad is None, witness=bad))

    x0 = Strip(Fraction(1), k)
    orbit, x = [], x0
    for m in range(1, 17):
        x = brute_iterate(f1, n, x)
        orbit.append(x.r)
    bad = _first(range(len(orbit)), lambda i: orbit[i] < F ** (i + 1))
    report.claims.append(claim("orbit-growth", "r_m >= F^m along the orbit of (1, k)", bad is None,
                               witness=None if bad is None else bad + 1, bound=F))

    premises_ok = F > G > 1 and all(c.passed for c in report.claims[-3:])
    report.claims.append(claim("premises", "growth obstruction premises (F=2^n, G=2^(n-1), x0=(1,k))",
                               premises_ok, F=F, G=G, x0=x0))

    ncw = non_controlled_witness(fn, _strip_pair_family(k), _dyadic(), [10 ** i for i in range(1, 6)])
    report.claims.append(claim("f-not-controlled", "f_k^n is not controlled", ncw is not None,
                               witness=None if ncw is None else ncw.to_dict()))
    if n % (k + 1) == 0:
        lk = (n // (k + 1)) * k
        bad = _first(pts, lambda x: gn.fn(x) != Strip(x.r * 2 ** lk, x.j))
        none = non_controlled_witness(gn, _strip_pair_family(k), _dyadic(), [10 ** i for i in range(1, 6)])
        report.claims.append(claim("g-controlled", "g_k^(l(k+1)) is a scaling, hence controlled",
                                   bad is None and none is None, witness=bad, scale=2 ** lk))
    return report


# -- qwerty ------------------------------------------------------------------------


@_timed
def scenario_qwerty(F, G, C=1, A=0, D=1, s=1, N: int = 40) -> ScenarioReport:
    """The recurrence bound and its crossover with the exponential lower curve."""
    p = QwertyPremises(F, G, None, D, s, C, A)
    rb = qwerty_recurrence(p, N)
    report = ScenarioReport("qwerty", {"F": p.F, "G": p.G, "C": p.C, "A": p.A, "D": p.D, "s": p.s, "N": N})
    report.claims.append(claim("recurrence-bound", "s_n <= c G^n + a", rb.holds,
                               witness=rb.violation, value={"c": rb.c, "a": rb.a}, tight=rb.tight))
    if p.F > p.G:
        report.claims.append(claim("crossover", "F^n/C - A eventually exceeds c G^n + a",
                                   rb.crossover is not None, value=rb.crossover))
    return report


# -- grid ------------------------------------------------------------------------


def _exact_identity(lhs: CoarseMapSpec, rhs: CoarseMapSpec, pts) -> Optional[object]:
    return _first(pts, lambda x: lhs.fn(x) != rhs.fn(x))


@_timed
def grid_hypothesis_check(window: Window) -> ScenarioReport:
    """Both conjugating maps of the thick-halfline example are coarse
    equivalences and intertwine ``f`` and ``g`` exactly."""
    from .metric_core import GRID_X, GRID_Y

    if window.n_range is None:
        raise DomainError("grid window needs an index range")
    f, g = grid_map("f"), grid_map("g")
    phi, psi, Phi, Psi = grid_map("phi"), grid_map("psi"), grid_map("PhiInv"), grid_map("PsiInv")
    xs, ys = samples(GRID_X, window), samples(GRID_Y, window)
    report = ScenarioReport("grid", {"scenario": "hypothesis", "window": window})
    report.claims.append(_identity_claim("phi-intertwines", "phi o f = g o phi", compose(phi, f), compose(g, phi), xs))
    report.claims.append(_identity_claim("psi-intertwines", "psi o g = f o psi", compose(psi, g), compose(f, psi), ys))
    report.claims.append(_identity_claim("PsiInv-phi-identity", "PsiInv o phi = id",
                                         compose(Psi, phi), identity_map(GRID_X), xs))
    report.claims.append(_identity_claim("PhiInv-psi-identity", "PhiInv o psi = id",
                                         compose(Phi, psi), identity_map(GRID_Y), ys))
    windows = nested_windows(window)
    for cid, fwd, bwd, expected in (("phi-equivalence", phi, Psi, 3), ("psi-equivalence", psi, Phi, 1)):
        pair = coarse_inverse_check(fwd, bwd, windows)
        report.claims.append(claim(cid, f"{fwd.id} is a coarse equivalence with coarse inverse {bwd.id}",
                                   pair.ok and pair.B <= expected, bound=Fraction(expected), value=pair.B,
                                   witness=pair.forth_back.witnesses[-1] if pair.B == pair.forth_back.sup
                                   else pair.back_forth.witnesses[-1]))
    return report


def _identity_claim(cid, anchor, lhs, rhs, pts) -> Claim:
    bad = _exact_identity(lhs, rhs, pts)
    return claim(cid, anchor, bad is None, witness=bad, samples=len(pts))


@dataclass
class HalflineBijection:
    """Index bijection ``F`` between thick halflines induced by a coarse
    equivalence, with the neighbourhood radius ``B`` realizing it."""

    domain: list
    codomain: list
    F: dict
    B: Fraction
    ok: bool
    per_index: dict = field(default_factory=dict)
    failure: Optional[dict] = None

    def inverse(self) -> dict:
        return {v: k for k, v in self.F.items()}

    def to_dict(self) -> dict:
        return {"F": {str(k): v for k, v in self.F.items()}, "B": self.B, "ok": self.ok,
                "failure": self.failure}


def _thick_halfline(space, n: int, reals) -> list:
    return [Grid3(n * n, r, k) for r in reals for k in space.labels(n)]


def _cover_radius(A, targets) -> Fraction:
    return max(d for d, _ in nearest_distances(A, targets))


def halfline_decomposition(Phi: CoarseMapSpec, Psi: CoarseMapSpec, n_range=(2, 64),
                           r_window: Window = Window(0, 8, 1), B_max=8) -> HalflineBijection:
    """For each ``n`` in ``n_range`` find the unique ``m`` with
    ``N_B(Phi(H_n)) = H'_m`` and ``N_B(Psi(H'_m)) = H_n`` on samples."""
    B_max = as_fraction(B_max)
    reals = r_window.reals()
    F, per, B = {}, {}, Fraction(0)

    def fail(n, reason, witness=None):
        return HalflineBijection(sorted(F), sorted(F.values()), F, B, False, per,
                                 {"n": n, "reason": reason, "witness": witness})

    for n in range(n_range[0], n_range[1] + 1):
        H = _thick_halfline(Phi.domain, n, reals)
        images = [Phi.fn(x) for x in H]
        firsts = sorted({y.nsq for y in images})
        if len(firsts) != 1:
            a = _first(images, lambda y: y.nsq == firsts[0])
            b = _first(images, lambda y: y.nsq == firsts[1])
            return fail(n, "image splits across thick halflines", [a, b])
        m = math.isqrt(firsts[0])
        target = _thick_halfline(Phi.codomain, m, reals)
        b1 = _cover_radius(images, target)
        back = [Psi.fn(y) for y in target]
        if any(x.nsq != n * n for x in back):
            return fail(n, "Psi does not return the thick halfline", _first(back, lambda x: x.nsq != n * n))
        b2 = _cover_radius(back, H)
        per[n * n] = max(b1, b2)
        if per[n * n] > B_max:
            return fail(n, f"neighbourhood radius {per[n * n]} exceeds {B_max}")
        if m * m in F.values():
            return fail(n, "index map is not injective", m * m)
        F[n * n] = m * m
        B = max(B, per[n * n])
    return HalflineBijection(sorted(F), sorted(F.values()), F, B, True, per)


@dataclass
class MonotonicityVerdict:
    increasing: bool
    increasing_witness: Optional[int]
    non_decreasing: bool
    non_decreasing_witness: Optional[int]
    inverse_pair: bool
    contradiction: bool
    certificate: Optional[dict] = None

    @property
    def verdict(self) -> str:
        return "CONTRADICTION" if self.contradiction else "NO_CONTRADICTION"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "increasing": self.increasing,
                "increasing_witness": self.increasing_witness, "non_decreasing": self.non_decreasing,
                "non_decreasing_witness": self.non_decreasing_witness, "inverse_pair": self.inverse_pair,
                "certificate": self.certificate}


def monotonicity_contradiction(Fmap: dict, Gmap: dict) -> MonotonicityVerdict:
    """Check ``F(n^2) >= (n+1)^2`` and ``G(m^2) >= m^2``.

    When both hold, ``G(F(n^2)) >= (n+1)^2 > n^2`` for every ``n^2`` where the
    composite is defined, so ``F`` and ``G`` cannot be mutually inverse: the
    two halves cannot come from one conjugacy.  That is reported as
    ``CONTRADICTION`` with the first such ``n^2`` as certificate.
    """
    if not Fmap or not Gmap:
        raise DomainError("index maps must be non-empty")
    inc_bad = _first(sorted(Fmap), lambda n2: Fmap[n2] < (math.isqrt(n2) + 1) ** 2)
    nd_bad = _first(sorted(Gmap), lambda m2: Gmap[m2] < m2)
    overlap = [n2 for n2 in sorted(Fmap) if Fmap[n2] in Gmap]
    inverse_pair = bool(overlap) and all(Gmap[Fmap[n2]] == n2 for n2 in overlap)
    contradiction = inc_bad is None and nd_bad is None and bool(overlap)
    cert = None
    if contradiction:
        n2 = overlap[0]
        cert = {"n_sq": n2, "F": Fmap[n2], "G_of_F": Gmap[Fmap[n2]], "lower": (math.isqrt(n2) + 1) ** 2}
    return MonotonicityVerdict(inc_bad is None, inc_bad, nd_bad is None, nd_bad, inverse_pair, contradiction, cert)


@_timed
def scenario_decompose(n_range=(2, 64), r_window: Window = Window(0, 8, 1)) -> ScenarioReport:
    """Halfline bijections of both conjugating maps and the monotonicity contradiction."""
    phi, psi, Phi, Psi = grid_map("phi"), grid_map("psi"), grid_map("PhiInv"), grid_map("PsiInv")
    report = ScenarioReport("decompose", {"n_range": list(n_range), "r_window": r_window})
    hb_phi = halfline_decomposition(phi, Psi, n_range, r_window)
    shift_ok = hb_phi.ok and all(v == (math.isqrt(k) + 1) ** 2 for k, v in hb_phi.F.items())
    report.claims.append(claim("phi-halflines", "phi induces n^2 -> (n+1)^2 on thick halflines", shift_ok,
                               witness=hb_phi.failure, bound=hb_phi.B, value=hb_phi))
    hb_psi = halfline_decomposition(psi, Phi, n_range, r_window)
    id_ok = hb_psi.ok and all(v == k for k, v in hb_psi.F.items())
    report.claims.append(claim("psi-halflines", "psi induces the identity on thick halflines", id_ok,
                               witness=hb_psi.failure, bound=hb_psi.B, value=hb_psi))
    mv = monotonicity_contradiction(hb_phi.F, hb_psi.F)
    report.claims.append(claim("monotonicity-contradiction",
                               "F(n^2) >= (n+1)^2 and G(m^2) >= m^2 force G o F != id",
                               mv.contradiction, witness=mv.certificate, value=mv))
    return report


# -- sections ------------------------------------------------------------------------


@_timed
def scenario_section(kind: str = "grid", k: int = 2, window: Window | None = None) -> ScenarioReport:
    """Section of a surjective coarse equivalence and the closeness it transports."""
    if kind == "grid":
        window = window or Window(0, 16, Fraction(1, 2), (1, 16))
        phi, f, g = grid_map("PhiInv"), grid_map("f"), grid_map("g")
    elif kind == "strip":
        window = window or Window(0, 64, Fraction(1, 2))
        phi, f, g = label_collapse(k), strip_map("g", k), strip_map("g", k - 1)
    else:
        raise DomainError(f"unknown section example {kind!r}")
    res = section_of_surjection(phi, f, g, nested_windows(window), predict=kind == "strip")
    report = ScenarioReport("section", {"kind": kind, "k": k, "window": window})
    report.claims.append(claim("section", "phi o psi = id", res.section_exact))
    sup = max(res.report.sup_values)
    if kind == "grid":
        report.claims.append(claim("exact-intertwining", "psi o g = f o psi", res.intertwining_exact,
                                   value=sup, recovered=_recovers_inclusion(res.psi, window)))
    else:
        report.claims.append(claim("transported-closeness", "psi o g is close to f o psi",
                                   res.report.bounded and res.within_prediction,
                                   witness=res.report.witnesses[-1], bound=res.predicted_bound, value=sup,
                                   D=res.D, B_back=res.B_back, rho_psi_D=res.rho_psi_D,
                                   exact=res.intertwining_exact))
    return report


def _recovers_inclusion(psi: CoarseMapSpec, window: Window) -> bool:
    from .metric_core import GRID_Y

    inc = grid_map("psi")
    return all(psi.fn(y) == inc.fn(y) for y in samples(GRID_Y, window))


# -- registry -----------------------------------------------------------------------

SCENARIOS = {
    "squares": "powers of the squaring family: closeness for n <= k, lattice images and density failure for n > k",
    "strips": "powers of the invertible strip maps: closeness for n <= k, growth-obstruction premises for n > k",
    "qwerty": "exponential growth obstruction: recurrence bound and crossover with the lower curve",
    "grid": "thick-halfline example: exact intertwining and coarse inverses of phi and psi",
    "decompose": "halfline bijections induced by phi and psi and the monotonicity contradiction",
    "section": "sections of surjective coarse equivalences transport closeness",
}


def sup_table(a: CoarseMapSpec, b: CoarseMapSpec, window: Window) -> list:
    """Rows ``(point, a(x), b(x), dist)`` over the window, for CSV dumps."""
    return [(x, a.fn(x), b.fn(x), dist(a.fn(x), b.fn(x))) for x in samples(a.domain, window)]


__all__ = [
    "Claim",
    "ScenarioReport",
    "jsonable",
    "nested_windows",
    "scenario_squares",
    "scenario_strips",
    "scenario_qwerty",
    "scenario_decompose",
    "scenario_section",
    "grid_hypothesis_check",
    "QwertyPremises",
    "RecurrenceBound",
    "qwerty_recurrence",
    "HalflineBijection",
    "halfline_decomposition",
    "MonotonicityVerdict",
    "monotonicity_contradiction",
    "SCENARIOS",
    "sup_table",
]
