"""
Weighted paging and reordering buffers
======================================

Weighted paging is 2-server-like on a star whose leaves sit at half the
eviction cost. Evicting the cheapest page is optimal under bijective
analysis; the same holds for the reordering buffer when we always switch to
the colour with the most buffered items.
"""

from bijective.analysis import stochastic_dominance
from bijective.paging import PagingInstance, offline_opt_paging, paging_oracle, paging_profile, paging_run
from bijective.reorder import rbm_oracle, rbm_profile, rbm_run

inst = PagingInstance.from_pairs([("p", 2), ("q", 2), ("r", 20)], 2)
seq = ["r", "p"]
for policy in ("greedy_min_cost", "max_cost", "fifo", "lru"):
    print(f"{policy:16s} pays {paging_run(policy, inst, seq)} on {seq}")
print("offline optimum pays", offline_opt_paging(inst, seq))

# Every lazy online paging algorithm at once
v = paging_oracle(PagingInstance((1, 1, 4), 2), 3)
print("paging oracle:", v.tree_count, "algorithms, greedy dominates:", v.dominates)

inst = PagingInstance((1, 2, 2, 5), 2)
g = paging_profile("greedy_min_cost", inst, 5)
for rival in ("max_cost", "fifo", "lru"):
    print(f"greedy_min_cost vs {rival}: {stochastic_dominance(g, paging_profile(rival, inst, 5))}")

# Reordering buffer: colour switches
for seq in ("aaaa", "aabb", "abab", "abcabc"):
    switches, trace = rbm_run("greedy_max_block", 2, seq)
    print(f"{seq:7s} -> {switches} switches: {' '.join(ev[-1] if ev[0] == 'switch' else '.' for ev in trace)}")

print("buffer oracle dominates:", rbm_oracle(2, 2, 4).dominates)
g = rbm_profile("greedy_max_block", 3, 3, 6)
for rival in ("min_block", "fifo_colour"):
    print(f"greedy_max_block vs {rival}: {stochastic_dominance(g, rbm_profile(rival, 3, 3, 6))}")
