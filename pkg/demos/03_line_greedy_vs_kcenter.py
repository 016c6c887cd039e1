"""
Greedy and k-Center on the line
===============================

On the unit interval greedy can be dragged into a bad cluster: an adversary
pulls k-1 servers towards 0 and then alternates two far requests, so greedy
pays almost 1/2 each time while k-Center pays about 1/k.
"""

from fractions import Fraction

from bijective.adversaries import line_clustering_adversary
from bijective.analysis import asymptotic_constant, bijective_ratio, cost_profile
from bijective.kserver import kcenter_anchors, simulate
from bijective.metric import path

k, eps, m, n = 2, Fraction(1, 5), 101, 60
adv = line_clustering_adversary(k, eps, m, n)
M = adv.metric
A = kcenter_anchors(M, k)
print("first requests:", adv.requests[:8], "...")
print("alternation between", adv.x, "and", M.m - 1, "from step", adv.suffix_start)

g = simulate("greedy", M, A, adv.requests)
kc = simulate("kcenter", M, A, adv.requests)
print("cheapest greedy step in the suffix:", min(s.cost for s in g.steps[adv.suffix_start:]))
print("greedy total:", g.total_cost, " k-Center total:", kc.total_cost)

# Exhaustive comparison on small paths: strict ratios and the additive constant
for m in (5, 7):
    M = path(m)
    A = kcenter_anchors(M, 2)
    for n in (3, 4, 5):
        G, K, O = (cost_profile(a, M, A, n) for a in ("greedy", "kcenter", "opt"))
        print(f"path:{m} n={n}: greedy/OPT strict={bijective_ratio(G, O).strict_rho}  "
              f"c(4/3) vs k-Center = {asymptotic_constant(G, K, Fraction(4, 3))}")
