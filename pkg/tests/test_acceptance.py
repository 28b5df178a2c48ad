"""Acceptance criteria, one test per criterion at the stated scale."""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from coarse_dyn.coarse_maps import brute_iterate, iterate, non_controlled_witness, section_of_surjection
from coarse_dyn.constructions import (
    SquaresMapId,
    StripMapId,
    g_multiplier_exponent,
    grid_map,
    label_collapse,
    squares_pow,
    strip_map,
    strip_pow_closed,
    xk_membership,
)
from coarse_dyn.exact import ExactReal, iroot2
from coarse_dyn.metric_core import GRID_X, GRID_Y, Strip, Window, dist, samples, squares_halfline, strip_space
from coarse_dyn.verifier import (
    QwertyPremises,
    grid_hypothesis_check,
    halfline_decomposition,
    monotonicity_contradiction,
    nested_windows,
    qwerty_recurrence,
    scenario_decompose,
    scenario_squares,
    scenario_strips,
)

TOL = Fraction(1, 2 ** 64)


def test_1_squares_closeness(acceptance):
    w = Window(1, 1000, Fraction(1, 8))
    t0 = time.perf_counter()
    worst = []
    ok = True
    for k in (1, 2, 3):
        for n in range(1, k + 1):
            rep = scenario_squares(k, n, w)
            lower, upper = rep["lower-bound"], rep["upper-bound"]
            ok &= lower.passed and upper.passed
            # upper.value is an outward enclosure of the sup
            ok &= upper.value <= Fraction(2) ** (n - k) + TOL
            worst.append(f"k={k},n={n}:{float(upper.value):.6f}")
    elapsed = time.perf_counter() - t0
    acceptance(1, ok and elapsed < 10, f"{elapsed:.2f}s " + " ".join(worst))


def test_2_image_certificates(acceptance, monkeypatch):
    def no_floats(self):
        raise AssertionError("float materialization during a certificate check")

    monkeypatch.setattr(ExactReal, "__float__", no_floats)
    xs = [p.r for p in samples(squares_halfline(), Window(1, 200, Fraction(1, 8)))]
    ok, count = True, 0
    for k in (1, 2, 3):
        f = SquaresMapId("f", k)
        for n in range(1, k + 3):
            for x in xs:
                v = squares_pow(f, n, x)
                # integer certificate: v = M^(2^(n-k)) with M = ceil(x^(2^k)) an integer
                ok &= v.is_certified and v.m == x.ceil_pow2(k) and v.e == n - k
                ok &= xk_membership(k - n, v)
                count += 1
    acceptance(2, ok, f"{count} images")


def _nearest_lattice_distance(w: Fraction, p: int) -> Fraction:
    # lattice {m^p : m >= 1}; the nearest points bracket w
    m = iroot2(math.floor(w), p.bit_length() - 1) if w >= 1 else 1
    return min(abs(w - c ** p) for c in (max(1, m), m + 1))


def test_3_density_failure(acceptance):
    ok, details = True, []
    for k in (1, 2, 3):
        for n in (k + 1, k + 2):
            rep = scenario_squares(k, n, Window(1, 100, Fraction(1, 4)), C_schedule=range(1, 11))
            claim = rep["density-failure"]
            ok &= claim.passed and len(claim.witness) == 10
            p = 2 ** (n - k)
            for item in claim.witness:
                w = item["point"].r.as_fraction()
                d = _nearest_lattice_distance(w, p)
                ok &= d == item["distance"] and d > item["C"]
            details.append(f"k={k},n={n}")
    acceptance(3, ok, " ".join(details))


def test_4_strip_closeness_and_closed_forms(acceptance):
    w = Window(0, 64, Fraction(1, 4))
    ok = True
    for k in range(1, 5):
        pts = samples(strip_space(k), w)
        for kind in ("f", "g"):
            spec = strip_map(kind, k)
            for p in pts:
                ok &= spec.inverse(spec(p)) == p and spec(spec.inverse(p)) == p
                q = p
                for n in range(1, 13):
                    q = spec(q)
                    ok &= strip_pow_closed(StripMapId(kind, k), n, p, "general") == q
                    if n <= k:
                        ok &= strip_pow_closed(StripMapId(kind, k), n, p, "piecewise") == q
        for n in range(1, k + 1):
            rep = scenario_strips(k, n, w)
            ok &= rep.passed and rep["close"].value <= k
    acceptance(4, ok)


def test_5_non_controlled_witness(acceptance):
    ok = True
    ms = [2 ** i for i in range(21)]
    for k in range(1, 5):
        fk = iterate(strip_map("f", k), k + 1)
        fam = lambda m, k=k: (Strip(Fraction(m), 0), Strip(Fraction(m), k))
        wit = non_controlled_witness(fk, fam, ms, [10 ** i for i in range(1, 7)])
        expected = [max(3 * 2 ** (k - 1) * m, 1) for m in ms]
        ok &= wit is not None and wit.image_distances == expected and wit.input_bound == k
        base = strip_map("f", k)
        ok &= all(dist(brute_iterate(base, k + 1, x), brute_iterate(base, k + 1, y)) == e
                  for (x, y), e in zip(map(fam, ms), expected))
    acceptance(5, ok)


def test_6_multiplier_exponents(acceptance):
    ok, checked = True, 0
    for k in range(1, 5):
        g, f = strip_map("g", k), strip_map("f", k)
        for n in range(k + 1, 17):
            for j in range(k + 1):
                e = g_multiplier_exponent(k, n, j)
                ok &= e == n - -(-(n - j) // (k + 1)) and e <= n - 1
                ok &= brute_iterate(g, n, Strip(Fraction(1), j)).r == 2 ** e
                checked += 1
            ok &= brute_iterate(f, n, Strip(Fraction(1), k)) == Strip(Fraction(2 ** n), k)
    acceptance(6, ok, f"{checked} exponents")


def test_7_recurrence(acceptance):
    rng = random.Random(7)
    ok, tight_runs, crossovers = True, 0, []
    for i in range(200):
        G = 1 + Fraction(rng.randint(1, 300), 100)
        D = Fraction(rng.randint(0, 800), 100)
        s = D if i % 4 == 0 else Fraction(rng.randint(0, 800), 100)
        F = G + Fraction(rng.randint(6, 400), 100)
        p = QwertyPremises(F, G, None, D, s, Fraction(rng.randint(1, 8)), Fraction(rng.randint(0, 8)))
        rb = qwerty_recurrence(p, 40)
        M = max(D, s)
        ok &= rb.c == G * M / (G - 1) and rb.a == -M / (G - 1)
        ok &= rb.holds and all(v <= rb.c * G ** n + rb.a for n, v in enumerate(rb.trace))
        if D == s:
            ok &= rb.tight and all(v == rb.c * G ** n + rb.a for n, v in enumerate(rb.trace))
            tight_runs += 1
        ok &= rb.crossover is not None
        if rb.crossover is not None:
            n = rb.crossover
            ok &= F ** n / p.C - p.A > rb.c * G ** n + rb.a
            ok &= n == 0 or F ** (n - 1) / p.C - p.A <= rb.c * G ** (n - 1) + rb.a
            crossovers.append(n)
    acceptance(7, ok, f"{tight_runs} exact runs, max crossover {max(crossovers)}")


def _oracle_phi_psiinv(y) -> Fraction:
    # d(phi(Psi(y)), y) on Y: n = 1 moves the first coordinate 1 -> 4; otherwise only labels above 2n-1 move by 1
    n = math.isqrt(y.nsq)
    if n == 1:
        return Fraction(3)
    return Fraction(y.k - min(y.k, 2 * n - 1))


def _oracle_psi_phiinv(x) -> Fraction:
    n = math.isqrt(x.nsq)
    return Fraction(x.k - min(x.k, 2 * n))


def test_8_grid_example(acceptance):
    w = Window(0, 64, Fraction(1, 4), (1, 32))
    rep = grid_hypothesis_check(w)
    phi, psi, Phi, Psi = (grid_map(m) for m in ("phi", "psi", "PhiInv", "PsiInv"))
    ys, xs = samples(GRID_Y, w), samples(GRID_X, w)
    oracle_y = all(dist(phi(Psi(y)), y) == _oracle_phi_psiinv(y) for y in ys)
    oracle_x = all(dist(psi(Phi(x)), x) == _oracle_psi_phiinv(x) for x in xs)
    sup_y = max(_oracle_phi_psiinv(y) for y in ys)
    sup_x = max(_oracle_psi_phiinv(x) for x in xs)
    ok = rep.passed and oracle_x and oracle_y
    ok &= rep["phi-equivalence"].value == sup_y == 3 and rep["psi-equivalence"].value == sup_x <= 1
    acceptance(8, ok, f"{len(xs)} X points, {len(ys)} Y points, B = {rep['phi-equivalence'].value}, "
                      f"{rep['psi-equivalence'].value}")


def test_9_sections(acceptance):
    from test_coarse_maps import test_pre_and_post_composition_on_500_triples

    ws = nested_windows(Window(0, 16, Fraction(1, 2), (1, 16)))
    res = section_of_surjection(grid_map("PhiInv"), grid_map("f"), grid_map("g"), ws, predict=False)
    psi = grid_map("psi")
    ok = res.section_exact and res.intertwining_exact
    ok &= all(res.psi(y) == psi(y) for y in samples(GRID_Y, ws[-1]))
    bounds = []
    for k in (2, 3, 4):
        sres = section_of_surjection(label_collapse(k), strip_map("g", k), strip_map("g", k - 1),
                                     nested_windows(Window(0, 64, Fraction(1, 2))))
        ok &= sres.section_exact and sres.report.bounded and sres.within_prediction
        bounds.append(f"k={k}: {sres.report.sup} <= {sres.predicted_bound}")
    test_pre_and_post_composition_on_500_triples()
    acceptance(9, ok, "; ".join(bounds))


def test_10_decomposition_contradiction(acceptance):
    t0 = time.perf_counter()
    rep = scenario_decompose((2, 64))
    hb_phi = halfline_decomposition(grid_map("phi"), grid_map("PsiInv"), (2, 64))
    hb_psi = halfline_decomposition(grid_map("psi"), grid_map("PhiInv"), (2, 64))
    mv = monotonicity_contradiction(hb_phi.F, hb_psi.F)
    elapsed = time.perf_counter() - t0
    ok = rep.passed
    ok &= hb_phi.F == {n * n: (n + 1) ** 2 for n in range(2, 65)}
    ok &= hb_psi.F == {n * n: n * n for n in range(2, 65)}
    ok &= mv.verdict == "CONTRADICTION"
    acceptance(10, ok and elapsed < 30, f"{elapsed:.2f}s")
