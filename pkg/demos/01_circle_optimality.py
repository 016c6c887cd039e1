"""
Greedy against every online algorithm on a small circle
=======================================================

Two servers on a 4-point cycle, three requests. The oracle builds the game
tree of all lazy deterministic online algorithms and checks that greedy's
sorted cost vector is pointwise below every one of them.
"""

from bijective.analysis import bijective_ratio, cost_profile
from bijective.metric import cycle
from bijective.oracle import kserver_oracle

M = cycle(4)
C0 = (0, 2)

verdict = kserver_oracle(M, C0, 3)
print("algorithms enumerated:", verdict.tree_count)
print("sequences per algorithm:", verdict.sequences)
print("greedy dominates all of them:", verdict.dominates)
print("greedy's sorted costs:", verdict.policy_profile)

# The same comparison against specific rivals, via their exact profiles
greedy = cost_profile("greedy", M, C0, 3)
for rival in ("kcenter", "wfa", "opt"):
    rep = bijective_ratio(greedy, cost_profile(rival, M, C0, 3))
    print(f"greedy vs {rival:8s} dominance={rep.dominance:12s} strict ratio={rep.strict_rho}")

# Larger circles: the strict ratio against the optimum stays within k
for m, k in ((6, 2), (8, 3)):
    M = cycle(m)
    C0 = tuple(range(0, m, m // k))[:k]
    worst = max(bijective_ratio(cost_profile("greedy", M, C0, n), cost_profile("opt", M, C0, n)).strict_rho
                for n in range(1, 5))
    print(f"cycle:{m} k={k}: worst strict ratio over n<=4 is {worst} (bound {k})")
