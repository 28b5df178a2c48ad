"""The concrete dynamical systems and conjugating maps.

Three families live here.

Squares, on ``[1, oo)``:  ``g(x) = x**2``, ``phi_k(x) = ceil(x**(2**k)) ** (2**-k)``
and ``f_k = g o phi_k``.  Values stay in the certified-root family of
:class:`~coarse_dyn.exact.ExactReal`.

Strips, on ``[0, oo) x {0..k}``:  ``g_k`` doubles off ray 0 and cycles labels
downwards mod ``k+1``; ``f_k`` does the same on rays ``0..k-1`` (mod ``k``)
and doubles the fixed ray ``k``.

Grid, on thick halflines ``(n**2, r, k)`` in R^3: ``f`` multiplies ``r`` by the
label, ``g`` is its restriction to the thinner space ``Y``, ``phi`` shifts to
the next halfline, ``psi`` is the inclusion, and ``PsiInv`` / ``PhiInv`` are
their coarse inverses.

Map ids are stable strings such as ``"squares.f?k=2"``, ``"strip.g?k=3"``,
``"strip.f?k=2&n=3"`` or ``"grid.PsiInv"``; :func:`get_map` turns them into
:class:`~coarse_dyn.metric_core.CoarseMapSpec` objects.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import DomainError, PrecisionError
from .exact import ExactReal, as_fraction
from .metric_core import (
    GRID_X,
    GRID_Y,
    CoarseMapSpec,
    Grid3,
    Halfline,
    Strip,
    identity_map,
    squares_halfline,
    strip_space,
)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# -- squares -----------------------------------------------------------------


class SquaresMapId(NamedTuple):
    kind: str  # "g", "f" or "phi"
    k: Optional[int] = None


def _squares_input(x) -> ExactReal:
    if isinstance(x, float):
        raise PrecisionError(f"float input {x!r} is inexact")
    x = ExactReal.of(x)
    if x < 1:
        raise DomainError(f"{x!r} is not in [1, oo)")
    return x


def _check_squares_id(mid: SquaresMapId) -> None:
    if mid.kind not in ("g", "f", "phi"):
        raise DomainError(f"unknown squares map {mid.kind!r}")
    if mid.kind != "g" and (mid.k is None or mid.k < 1):
        raise DomainError(f"{mid.kind}_k needs an integer k >= 1")


def squares_eval(mid: SquaresMapId, x) -> ExactReal:
    """Evaluate ``g``, ``f_k`` or ``phi_k`` exactly.

    ``phi_k(x)`` is returned as the certificate ``(ceil(x**(2**k)), -k)`` and
    ``f_k(x)`` as ``(ceil(x**(2**k)), 1 - k)``.
    """
    _check_squares_id(mid)
    x = _squares_input(x)
    if mid.kind == "g":
        return x.pow2(1)
    m = x.ceil_pow2(mid.k)
    return ExactReal.root(m, -mid.k if mid.kind == "phi" else 1 - mid.k)


def squares_pow(mid: SquaresMapId, n: int, x) -> ExactReal:
    """Closed form of the ``n``-th iterate.

    Since ``phi_k`` fixes ``X_k`` and ``g`` maps ``X_k`` into ``X_{k-1}``, the
    iterate ``f_k**n`` equals ``g**n o phi_k`` and is the certificate
    ``(ceil(x**(2**k)), n - k)``.
    """
    _check_squares_id(mid)
    if n < 1:
        raise DomainError("iterate count must be >= 1")
    x = _squares_input(x)
    if mid.kind == "g":
        return x.pow2(n)
    if mid.kind == "phi":
        return squares_eval(mid, x)
    return ExactReal.root(x.ceil_pow2(mid.k), n - mid.k)


def xk_membership(k: int, v) -> bool:
    """Does ``v ** (2 ** k)`` land in the positive integers?  Decided from the
    integer certificate only."""
    v = ExactReal.of(v)
    if v <= 0:
        return False
    if v.is_rational:
        q = v.as_fraction()
        if k >= 0:
            return (q ** (2 ** k)).denominator == 1
        if q.denominator != 1:
            return False
    return v.pow2(k).is_integer()


# -- strips ------------------------------------------------------------------


class StripMapId(NamedTuple):
    kind: str  # "f", "g", "f_inv" or "g_inv"
    k: int
    n: int = 1


def _check_strip_id(mid: StripMapId) -> None:
    if mid.kind not in ("f", "g", "f_inv", "g_inv"):
        raise DomainError(f"unknown strip map {mid.kind!r}")
    if mid.kind.startswith("f") and mid.k < 1:
        raise DomainError("f_k needs k >= 1")
    if mid.k < 0:
        raise DomainError("g_k needs k >= 0")
    if mid.n < 1:
        raise DomainError("iterate count must be >= 1")


def _check_strip_point(p: Strip, k: int) -> Strip:
    if not isinstance(p, Strip):
        raise DomainError(f"{p!r} is not a strip point")
    if not 0 <= p.j <= k:
        raise DomainError(f"label {p.j} outside 0..{k}")
    if p.r < 0:
        raise DomainError(f"negative coordinate {p.r}")
    return p


def _g_step(r, j, k):
    return Strip(r * 2 if j >= 1 else r, (j - 1) % (k + 1))


def _g_back(r, j, k):
    j0 = (j + 1) % (k + 1)
    return Strip(r / 2 if j0 >= 1 else r, j0)


def _f_step(r, j, k):
    if j == k:
        return Strip(r * 2, k)
    return Strip(r * 2 if j >= 1 else r, (j - 1) % k)


def _f_back(r, j, k):
    if j == k:
        return Strip(r / 2, k)
    j0 = (j + 1) % k
    return Strip(r / 2 if j0 >= 1 else r, j0)


_STRIP_STEPS = {"f": _f_step, "g": _g_step, "f_inv": _f_back, "g_inv": _g_back}


def strip_eval(mid: StripMapId, p: Strip) -> Strip:
    """One application of ``f_k``, ``g_k`` or an inverse (``mid.n`` times if
    ``mid.n > 1``, by plain iteration)."""
    _check_strip_id(mid)
    _check_strip_point(p, mid.k)
    step = _STRIP_STEPS[mid.kind]
    r, j = Fraction(p.r), p.j
    for _ in range(mid.n):
        r, j = step(r, j, mid.k)
    return Strip(r, j)


def g_multiplier_exponent(k: int, n: int, j: int) -> int:
    """Exponent of 2 in the first coordinate of ``g_k**n(r, j)``: the orbit
    passes ray 0 (the only ray that does not double) ``ceil((n-j)/(k+1))``
    times in its first ``n`` steps."""
    return n - max(0, _ceil_div(n - j, k + 1))


def strip_pow_closed(mid: StripMapId, n: int, p: Strip, form: str = "auto") -> Strip:
    """Closed form of ``f_k**n`` or ``g_k**n``.

    ``form`` selects the formula:

    ``"piecewise"``  valid for ``n <= k``: multiplier ``2**(n-1)`` when ``j < n``
                     and ``2**n`` otherwise;
    ``"period"``     only ``n = k+1``: ``g`` is ``(2**k r, j)`` and ``f`` is
                     ``(2**(k-1+min(j,1)) r, j-1 mod k)`` off ray ``k``;
    ``"general"``    any ``n >= 1``, multiplier ``2**(n - ceil((n-j)/(k+1)))``
                     (for ``f`` off ray ``k`` the cycle length is ``k``);
    ``"auto"``       the narrowest form that applies.
    """
    if mid.kind not in ("f", "g"):
        raise DomainError("closed forms exist for f_k and g_k only")
    _check_strip_id(mid._replace(n=max(n, 1)))
    k = mid.k
    _check_strip_point(p, k)
    if form == "auto":
        form = "piecewise" if n <= k else ("period" if n == k + 1 else "general")
    r, j = Fraction(p.r), p.j
    if form == "piecewise":
        if not 1 <= n <= k:
            raise DomainError(f"piecewise closed form needs 1 <= n <= k, got n={n}, k={k}")
        if mid.kind == "f" and j == k:
            return Strip(r * 2 ** n, k)
        modulus = k + 1 if mid.kind == "g" else k
        return Strip(r * 2 ** (n - 1 if j < n else n), (j - n) % modulus)
    if form == "period":
        if n != k + 1:
            raise DomainError(f"period closed form needs n = k+1, got n={n}, k={k}")
        if mid.kind == "g":
            return Strip(r * 2 ** k, j)
        if j == k:
            return Strip(r * 2 ** (k + 1), k)
        return Strip(r * 2 ** (k - 1 + min(j, 1)), (j - 1) % k)
    if form == "general":
        if n < 1:
            raise DomainError("general closed form needs n >= 1")
        if mid.kind == "g":
            return Strip(r * 2 ** g_multiplier_exponent(k, n, j), (j - n) % (k + 1))
        if j == k:
            return Strip(r * 2 ** n, k)
        return Strip(r * 2 ** g_multiplier_exponent(k - 1, n, j), (j - n) % k)
    raise DomainError(f"unknown closed form {form!r}")


# -- grid ---------------------------------------------------------------------

GRID_MAPS = ("f", "f_inv", "g", "phi", "psi", "PhiInv", "PsiInv")

_GRID_DOMAINS = {
    "f": (GRID_X, GRID_X),
    "f_inv": (GRID_X, GRID_X),
    "g": (GRID_Y, GRID_Y),
    "phi": (GRID_X, GRID_Y),
    "psi": (GRID_Y, GRID_X),
    "PhiInv": (GRID_X, GRID_Y),
    "PsiInv": (GRID_Y, GRID_X),
}


def _psiinv(p: Grid3) -> Grid3:
    n1 = max(1, math.isqrt(p.nsq) - 1)
    return Grid3(n1 * n1, p.r, min(p.k, 2 * n1 + 1))


_GRID_IMPL = {
    "f": lambda p: Grid3(p.nsq, p.r * p.k, p.k),
    "g": lambda p: Grid3(p.nsq, p.r * p.k, p.k),
    "f_inv": lambda p: Grid3(p.nsq, Fraction(p.r) / p.k, p.k),
    "phi": lambda p: Grid3((math.isqrt(p.nsq) + 1) ** 2, p.r, p.k),
    "psi": lambda p: p,
    "PhiInv": lambda p: Grid3(p.nsq, p.r, min(p.k, 2 * math.isqrt(p.nsq))),
    "PsiInv": _psiinv,
}


def grid_eval(mid: str, p: Grid3) -> Grid3:
    if mid not in _GRID_DOMAINS:
        raise DomainError(f"unknown grid map {mid!r}")
    if not _GRID_DOMAINS[mid][0].contains(p):
        raise DomainError(f"{p!r} is not a point of {_GRID_DOMAINS[mid][0].name}")
    return _GRID_IMPL[mid](p)


def _grid_preimages(mid: str, y: Grid3) -> list:
    n = math.isqrt(y.nsq)
    if mid == "PhiInv":
        out = [y]
        if y.k == 2 * n:
            out.append(Grid3(y.nsq, y.r, 2 * n + 1))
        return out
    if mid == "psi":
        return [y] if y.k <= 2 * n else []
    if mid == "phi":
        if n < 2 or y.k > 2 * n - 1:
            return []
        return [Grid3((n - 1) ** 2, y.r, y.k)]
    if mid in ("f", "g"):
        return [Grid3(y.nsq, Fraction(y.r) / y.k, y.k)]
    return [p for p in _psiinv_fibre(y)]


def _psiinv_fibre(x: Grid3) -> list:
    # PsiInv: (n^2, r, k) -> (max(1,n-1)^2, r, min(k, 2 max(1,n-1) + 1)).
    n1 = math.isqrt(x.nsq)
    out = []
    for n in ({2, 1} if n1 == 1 else {n1 + 1}):
        for k in range(1, 2 * n + 1):
            if min(k, 2 * n1 + 1) == x.k:
                out.append(Grid3(n * n, x.r, k))
    return sorted(out)


# -- registry ---------------------------------------------------------------


def parse_map_id(text: str) -> tuple[str, str, dict]:
    """``"strip.f?k=2&n=3"`` -> ``("strip", "f", {"k": 2, "n": 3})``."""
    head, _, query = text.partition("?")
    family, _, name = head.partition(".")
    params = {}
    if query:
        for part in query.split("&"):
            key, _, value = part.partition("=")
            params[key] = int(value)
    return family, name, params


def map_id(family: str, name: str, **params) -> str:
    query = "&".join(f"{k}={v}" for k, v in params.items() if v is not None)
    return f"{family}.{name}" + (f"?{query}" if query else "")


def squares_map(kind: str, k: int | None = None) -> CoarseMapSpec:
    mid = SquaresMapId(kind, k)
    _check_squares_id(mid)
    X = squares_halfline()
    return CoarseMapSpec(
        map_id("squares", kind, k=k),
        X,
        X,
        lambda p: Halfline(squares_eval(mid, p.r)),
        power=lambda n, p: Halfline(squares_pow(mid, n, p.r)),
    )


def strip_map(kind: str, k: int) -> CoarseMapSpec:
    mid = StripMapId(kind, k)
    _check_strip_id(mid)
    S = strip_space(k)
    inverse_kind = kind[:-4] if kind.endswith("_inv") else kind + "_inv"
    inv = StripMapId(inverse_kind, k)
    power = None
    if kind in ("f", "g"):
        power = lambda n, p: strip_pow_closed(mid, n, p, "general")
    return CoarseMapSpec(
        map_id("strip", kind, k=k),
        S,
        S,
        lambda p: strip_eval(mid, p),
        inverse=lambda p: strip_eval(inv, p),
        power=power,
        preimages=lambda p: [strip_eval(inv, p)],
    )


def _checked(space, impl):
    contains = space.contains

    def fn(p):
        if not contains(p):
            raise DomainError(f"{p!r} is not a point of {space.name}")
        return impl(p)

    return fn


def grid_map(name: str) -> CoarseMapSpec:
    if name not in _GRID_DOMAINS:
        raise DomainError(f"unknown grid map {name!r}")
    dom, cod = _GRID_DOMAINS[name]
    inverse = None
    if name in ("f", "g"):
        inverse = lambda p: grid_eval("f_inv", p)
    elif name == "f_inv":
        inverse = lambda p: grid_eval("f", p)
    return CoarseMapSpec(
        map_id("grid", name),
        dom,
        cod,
        _checked(dom, _GRID_IMPL[name]),
        inverse=inverse,
        preimages=lambda y: _grid_preimages(name, y),
    )


def label_collapse(k: int) -> CoarseMapSpec:
    """Surjection ``[0,oo) x {0..k} -> [0,oo) x {0..k-1}`` merging ray ``k``
    into ray ``k-1``."""
    if k < 1:
        raise DomainError("label collapse needs k >= 1")
    X, Y = strip_space(k), strip_space(k - 1)

    def fn(p):
        X.check(p)
        return Strip(p.r, min(p.j, k - 1))

    def fibre(y):
        Y.check(y)
        return [y, Strip(y.r, k)] if y.j == k - 1 else [y]

    return CoarseMapSpec(f"strip.collapse?k={k}", X, Y, fn, preimages=fibre)


def get_map(text: str) -> CoarseMapSpec:
    """Resolve a stable map id."""
    family, name, params = parse_map_id(text)
    n = params.pop("n", None)
    if family == "squares":
        spec = squares_map(name, params.get("k"))
    elif family == "strip":
        if name == "collapse":
            spec = label_collapse(params["k"])
        else:
            spec = strip_map(name, params["k"])
    elif family == "grid":
        spec = grid_map(name)
    elif family == "id":
        spaces = {"squares": squares_halfline(), "grid_x": GRID_X, "grid_y": GRID_Y}
        if name.startswith("strip("):
            spec = identity_map(strip_space(int(name[6:-1])))
        else:
            spec = identity_map(spaces[name])
    else:
        raise DomainError(f"unknown map family {family!r}")
    if n is not None and n != 1:
        from .coarse_maps import iterate

        spec = iterate(spec, n)
    return spec


__all__ = [
    "SquaresMapId",
    "StripMapId",
    "GRID_MAPS",
    "squares_eval",
    "squares_pow",
    "xk_membership",
    "strip_eval",
    "strip_pow_closed",
    "g_multiplier_exponent",
    "grid_eval",
    "squares_map",
    "strip_map",
    "grid_map",
    "label_collapse",
    "get_map",
    "parse_map_id",
    "map_id",
    "as_fraction",
]
