"""
Counting certificates for lower bounds
======================================

A bijection with A(s) <= rho * B(pi(s)) cannot exist when fewer sequences
cost A less than rho*c than cost B at most c. This is checked here for every
online algorithm on three points, and for k-Center on a spider.
"""

from bijective.adversaries import star_lowerbound_instance, three_point_adversary, three_point_metric
from bijective.analysis import certified_ratio, cost_profile
from bijective.oracle import KServerGame, count_algorithms, frontier

M = three_point_metric(1)
C0 = (0, 2)
n = 4
opt = cost_profile("opt", M, C0, n)
need = opt.count_at_most(1)
game = KServerGame(M, C0, n)
worst = max(sum(1 for v in p if v < 2) for p in frontier(game))
print(f"{count_algorithms(game)} online algorithms; sequences OPT serves for <= 1: {need}")
print(f"most sequences any algorithm serves for < 2: {worst}  -> ratio >= 2 certified: {worst < need}")
print("adaptive sequence against greedy:", three_point_adversary("greedy", n))

# k-Center against a rival that keeps one server at the centre of a spider
for d in (3, 6, 9):
    inst = star_lowerbound_instance(2, d)
    kc = cost_profile("kcenter", inst.metric, inst.anchors_kc, 4, budget=None, anchors=inst.anchors_kc)
    rival = cost_profile("kcenter", inst.metric, inst.anchors_a, 4, budget=None, anchors=inst.anchors_a)
    rho, c = certified_ratio(kc, rival)
    print(f"d={d}: {inst.rays} rays, {inst.metric.m} points, certified ratio {rho} at threshold {c}")
