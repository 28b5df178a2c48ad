"""
Sup-distance tables as CSV
==========================

Every check is a sup over a sample grid.  The tables behind them can be
dumped for plotting elsewhere, here summarised with numpy.
"""

import contextlib
import csv
import io

import numpy as np

from coarse_dyn.cli import main

buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    main(["dump-grid", "--a", "grid.phi*grid.PsiInv", "--b", "id.grid_y", "--n-range", "1:6", "--window", "0:4"])
rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
d = np.array([float(r["dist"]) for r in rows])
n = np.sqrt(np.array([float(r["x.nsq"]) for r in rows])).astype(int)
for value in np.unique(n):
    print(f"n={value}: max distance {d[n == value].max():g}")
