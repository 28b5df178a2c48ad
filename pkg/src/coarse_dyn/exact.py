"""Exact reals for the squaring family.

Every value the squaring maps produce is either a rational number or a
number of the form ``m ** (2 ** e)`` with ``m`` a positive integer and
``e`` an integer (possibly negative).  :class:`ExactReal` stores the
latter as the integer certificate ``(m, e)`` so that lattice membership
and ordering are decided with integer arithmetic only.  Floating point is
used for nothing except reporting.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import PrecisionError

DEFAULT_PRECISION = 128
MIN_PRECISION = 64
PRECISION_ENV = "COARSE_DYN_PRECISION"

_precision: ContextVar[Union[int, None]] = ContextVar("coarse_dyn_precision", default=None)

Rational = Union[int, Fraction]


def working_precision() -> int:
    """Mantissa bits used when a certified root has to be materialized."""
    bits = _precision.get()
    if bits is None:
        env = os.environ.get(PRECISION_ENV)
        bits = int(env) if env else DEFAULT_PRECISION
    if bits < MIN_PRECISION:
        raise PrecisionError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    return bits


@contextmanager
def precision(bits: int):
    if bits < MIN_PRECISION:
        raise PrecisionError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    token = _precision.set(bits)
    try:
        yield bits
    finally:
        _precision.reset(token)


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions and rational literals ("3/2", "0.125") exactly.

    Floats are refused: a float has already been rounded, and the ceiling
    in the squaring maps is discontinuous.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, ExactReal):
        return x.as_fraction()
    if isinstance(x, float):
        raise PrecisionError(f"float input {x!r} is inexact; pass a Fraction or a string literal")
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


def iroot2(n: int, j: int) -> int:
    """floor(n ** (1 / 2**j)) for n >= 0, j >= 0, by repeated isqrt."""
    if n < 0 or j < 0:
        raise ValueError("iroot2 needs n >= 0 and j >= 0")
    for _ in range(j):
        n = math.isqrt(n)
    return n


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _canonical_root(m: int, e: int) -> tuple[int, int]:
    # Pull square roots out while the exponent is negative; afterwards a
    # negative exponent means the value is irrational.
    while e < 0 and m > 1 and is_square(m):
        m = math.isqrt(m)
        e += 1
    if m == 1:
        e = 0
    return m, e


@total_ordering
class ExactReal:
    """A rational ``q`` or a certified root ``m ** (2 ** e)``.

    >>> ExactReal.root(3, 1) == 9
    True
    >>> ExactReal.root(16, -2) == 2
    True
    """

    __slots__ = ("q", "m", "e", "_canon")

    def __init__(self, q=None, *, m: int | None = None, e: int | None = None):
        if (q is None) == (m is None):
            raise ValueError("give either a rational or a certificate (m, e)")
        if q is not None:
            self.q = as_fraction(q)
            self.m = self.e = None
        else:
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise ValueError(f"certificate base must be a positive integer, got {m!r}")
            if not isinstance(e, int):
                raise ValueError("certificate exponent must be an integer")
            self.q = None
            self.m, self.e = m, e
        self._canon = None

    @classmethod
    def root(cls, m: int, e: int) -> "ExactReal":
        return cls(m=m, e=e)

    @classmethod
    def of(cls, x) -> "ExactReal":
        return x if isinstance(x, ExactReal) else cls(x)

    # -- structure -------------------------------------------------------

    @property
    def is_certified(self) -> bool:
        return self.q is None

    def canonical(self) -> tuple:
        """``("q", Fraction)`` for rational values, ``("root", m, e)`` otherwise.

        In the root form ``e < 0`` and ``m`` is not a perfect square, which
        makes the representation unique.
        """
        if self._canon is None:
            if self.q is not None:
                self._canon = ("q", self.q)
            else:
                m, e = _canonical_root(self.m, self.e)
                if e >= 0:
                    self._canon = ("q", Fraction(m ** (2 ** e)))
                else:
                    self._canon = ("root", m, e)
        return self._canon

    @property
    def is_rational(self) -> bool:
        return self.canonical()[0] == "q"

    def is_integer(self) -> bool:
        c = self.canonical()
        return c[0] == "q" and c[1].denominator == 1

    def as_fraction(self) -> Fraction:
        c = self.canonical()
        if c[0] != "q":
            raise PrecisionError(f"{self!r} is irrational")
        return c[1]

    # -- arithmetic that stays inside the family --------------------------

    def pow2(self, n: int) -> "ExactReal":
        """``self ** (2 ** n)``.  Negative ``n`` is a root and needs an integer or certified value."""
        if self.q is None:
            return ExactReal.root(self.m, self.e + n)
        if n >= 0:
            return ExactReal(self.q ** (2 ** n))
        if self.q.denominator == 1 and self.q > 0:
            return ExactReal.root(int(self.q), n)
        raise PrecisionError(f"root of non-integer rational {self.q} is not representable")

    def ceil_pow2(self, k: int) -> int:
        """Exact ``ceil(self ** (2 ** k))``."""
        if self.q is not None and k < 0 and self.q.denominator != 1:
            # Roots of a non-integer rational: bracket it by integer roots.
            lo = math.floor(self.q)
            return iroot2(lo, -k) + 1 if lo >= 1 else 1
        w = self.pow2(k).canonical()
        if w[0] == "q":
            return math.ceil(w[1])
        _, m, e = w
        return iroot2(m, -e) + 1

    # -- comparisons --------------------------------------------------------

    def _lt(self, other: "ExactReal") -> bool:
        a, b = self.canonical(), other.canonical()
        if a[0] == "q" and b[0] == "q":
            return a[1] < b[1]
        # Roots are positive, so a non-positive rational settles it by sign.
        if a[0] == "q" and a[1] <= 0:
            return True
        if b[0] == "q" and b[1] <= 0:
            return False
        E = max(-a[2] if a[0] == "root" else 0, -b[2] if b[0] == "root" else 0)

        def lifted(c):
            if c[0] == "q":
                return c[1] ** (2 ** E)
            return Fraction(c[1] ** (2 ** (c[2] + E)))

        return lifted(a) < lifted(b)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = self.canonical()
            return c[0] == "q" and c[1] == other
        if not isinstance(other, ExactReal):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __lt__(self, other) -> bool:
        if isinstance(other, bool) or not isinstance(other, (int, Fraction, ExactReal)):
            return NotImplemented
        return self._lt(ExactReal.of(other))

    def __hash__(self) -> int:
        c = self.canonical()
        return hash(c[1]) if c[0] == "q" else hash(c)

    # -- materialization ----------------------------------------------------

    def enclose(self, bits: int | None = None) -> tuple[Fraction, Fraction]:
        """Rational ``(lo, hi)`` with ``lo <= self <= hi`` and ``hi - lo <= 2**-bits``."""
        c = self.canonical()
        if c[0] == "q":
            return c[1], c[1]
        bits = working_precision() if bits is None else bits
        _, m, e = c
        j = -e
        r = iroot2(m << (bits * 2 ** j), j)
        scale = 1 << bits
        return Fraction(r, scale), Fraction(r + 1, scale)

    def __float__(self) -> float:
        lo, hi = self.enclose(MIN_PRECISION)
        return float((lo + hi) / 2)

    def to_json(self):
        if self.q is not None:
            return str(self.q)
        return {"m": self.m, "e": self.e, "approx": float(self)}

    def __str__(self) -> str:
        c = self.canonical()
        if c[0] == "q":
            return str(c[1])
        return f"{c[1]}^(2^{c[2]})"

    def __repr__(self) -> str:
        if self.q is not None:
            return f"ExactReal({str(self.q)!r})"
        return f"ExactReal.root({self.m}, {self.e})"
