"""
Invertible maps on a strip of rays
==================================

On ``[0, oo) x {0..k}`` the map ``g_k`` walks down the labels and doubles ``r``
each time it wraps around; ``f_k`` does the same on the first ``k`` rays but
doubles the last ray every step.  Their powers agree up to the label for
``n <= k``.  Past that, ``f_k**n`` grows like ``2**n`` on the last ray while
``g_k**n`` never multiplies by more than ``2**(n-1)``.
"""

from fractions import Fraction

from coarse_dyn.coarse_maps import iterate, non_controlled_witness
from coarse_dyn.constructions import strip_map
from coarse_dyn.metric_core import Strip, Window
from coarse_dyn.verifier import QwertyPremises, qwerty_recurrence, scenario_strips

k = 2
f, g = strip_map("f", k), strip_map("g", k)
p = Strip(Fraction(3), 0)
print("orbit of (3, 0) under g_2:", [iterate(g, n)(p) for n in range(1, 5)])
print("orbit of (3, 2) under f_2:", [iterate(f, n)(Strip(Fraction(3), 2)) for n in range(1, 5)])

# n <= k: same first coordinate, labels within k
rep = scenario_strips(k, 2, Window.parse("0:32", "1/2"))
print("n=2:", rep["close"].verdict, "sup", rep["close"].value)

# n > k: every premise of the growth obstruction is checked exactly
rep = scenario_strips(k, 3, Window.parse("0:32", "1/2"))
for c in rep.claims:
    print(f"  {c.verdict} {c.id}")

# f_k^(k+1) tears apart the pairs (m, 0), (m, k), which sit k apart
fk = iterate(f, k + 1)
w = non_controlled_witness(fk, lambda m: (Strip(Fraction(m), 0), Strip(Fraction(m), k)),
                           [2 ** i for i in range(8)], [100])
print("image distances:", [int(d) for d in w.image_distances])

# The recurrence bound and where the exponential lower curve overtakes it
rb = qwerty_recurrence(QwertyPremises(F=8, G=4, D=1, s=1), 10)
print(f"s_n <= {rb.c} * 4^n + ({rb.a}); crossover at n = {rb.crossover}")
