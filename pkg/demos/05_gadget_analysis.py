"""
Can anything beat greedy on the line?
=====================================

From an "unfavourable" configuration (both servers near the left end) a
3-request gadget tries to beat greedy on average: move the left server to a
request slightly right of the midpoint, then grab far requests with the
right server. Here the average over all 3-request continuations is computed
exactly: on a 201-point grid for one start, then on a coarser 101-point grid
for every unfavourable start.
"""

from fractions import Fraction

import numpy as np

from bijective.analysis import total_cost
from bijective.kserver import is_unfavourable
from bijective.metric import unit_path

m, t, n = 201, Fraction(1, 10), 3
M = unit_path(m)
N = m - 1

C0 = (6, 14)
g = total_cost("greedy", M, C0, n)
a = total_cost("gadget", M, C0, n, t=t)
where = ", ".join(str(M.position(p)) for p in C0)
print(f"start ({where}): mean(gadget) - mean(greedy) = {(a - g) / m ** n}")

# every unfavourable start on a coarser grid
m = 101
M = unit_path(m)
N = m - 1
starts = [(i, j) for i in range(N + 1) for j in range(i + 1, N + 1)
          if is_unfavourable(M.position(i), M.position(j), t)]
gaps = np.array([float(total_cost("gadget", M, s, n, t=t) - total_cost("greedy", M, s, n)) for s in starts])
print(f"{len(starts)} unfavourable starts on {m} points; total-cost gap min {gaps.min():.4g}, max {gaps.max():.4g}")
print("starts where the gadget is cheaper on average:", int((gaps < 0).sum()))
