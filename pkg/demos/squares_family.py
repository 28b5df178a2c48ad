"""
The squaring family on [1, oo)
==============================

``g(x) = x**2`` and ``f_k = g o phi_k`` where ``phi_k`` rounds ``x`` up to the
lattice ``X_k = {m ** (2 ** -k)}``.  Powers ``f_k**n`` stay close to ``g**n``
while ``n <= k`` and lose coarse density once ``n > k``.
"""

from fractions import Fraction

import numpy as np

from coarse_dyn.constructions import SquaresMapId, squares_eval, squares_pow
from coarse_dyn.exact import ExactReal
from coarse_dyn.metric_core import Window, density_witness, lattice_points
from coarse_dyn.verifier import scenario_squares

# Values are exact.  f_1(3/2) = ceil(9/4) = 3, and f_1 applied twice lands on 9.
x = ExactReal(Fraction(3, 2))
print("f_1(3/2)   =", squares_eval(SquaresMapId("f", 1), x))
print("f_1^2(3/2) =", squares_pow(SquaresMapId("f", 1), 2, x))

# Irrational values keep an integer certificate (m, e) meaning m ** (2 ** e).
v = squares_eval(SquaresMapId("f", 2), ExactReal(Fraction(5, 4)))
print("f_2(5/4)   =", v, "~", float(v))

# For n <= k the gap f_k^n - g^n sits in [0, 2^(n-k)].
for k, n in [(2, 1), (3, 2), (3, 3)]:
    rep = scenario_squares(k, n, Window.parse("1:200", "1/8"))
    c = rep["upper-bound"]
    print(f"k={k} n={n}: sup gap {float(c.value):.6f} <= {c.bound}  {c.verdict}")

# For n > k the image is the lattice X_(k-n); its C-neighbourhood misses points.
# With k=1, n=2 that lattice is the squares: between 25 and 36 the midpoint is 5.5 away.
squares = lattice_points(-1, 1, 36)
print("isolated point for C=5 on [1, 36]:", density_witness(squares, Window.parse("1:36"), 5).r)

rep = scenario_squares(1, 2, Window.parse("1:100", "1/4"), C_schedule=range(1, 6))
for item in rep["density-failure"].witness:
    print(f"C={item['C']}: {item['point'].r} is {item['distance']} away from every square")

# The sup gap grows with the window: a quick look at the fitted exponent.
trend = rep["not-close"].details["trend"]
radii = np.array([float(w.hi) for w in trend.windows])
sups = np.array([float(s) for s in trend.sup_values])
print("window radii", radii, "sup gaps", sups.round(2), "exponent", trend.verdict.exponent)
