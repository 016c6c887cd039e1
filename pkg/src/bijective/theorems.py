"""Desk-scale verification suites, one per claim being checked.

Each suite returns :class:`Row` objects ``(theorem, instance, bound,
measured, passed)``; a suite passes when all its rows do. All numbers are
exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .adversaries import line_clustering_adversary, star_lowerbound_instance, three_point_metric
from .analysis import (asymptotic_constant, bijective_ratio, certified_ratio, cost_profile,
                       scalar_ratios, stochastic_dominance, total_cost)
from .kserver import kcenter_anchors, simulate
from .metric import cycle, path, spider, unit_path
from .oracle import KServerGame, count_algorithms, frontier, kserver_oracle
from .ordered import (best_conf_holds, bimatch_holds, btw2servers_holds, spider_centre_holds,
                      uniform_configuration)
from .paging import PagingInstance, paging_oracle, paging_profile
from .reorder import rbm_oracle, rbm_profile


@dataclass
class Row:
    theorem: str
    instance: str
    bound: str
    measured: str
    passed: bool

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "instance": self.instance, "bound": self.bound,
                "measured": self.measured, "passed": self.passed}


# ---------------------------------------------------------------- optimality

def circle_optimality(tie: str = "lowest_point", m: int = 4, n: int = 3, min_trees: int = 8192):
    """Greedy against every lazy online 2-server algorithm on a small cycle."""
    M = cycle(m)
    rows = []
    for C0 in itertools.combinations_with_replacement(range(m), 2):
        v = kserver_oracle(M, C0, n, tie)
        rows.append(Row("circle-2-server-optimal", f"cycle:{m} k=2 n={n} C0={C0} tie={tie}",
                        f"greedy <= all, trees >= {min_trees}",
                        f"dominates={v.dominates} trees={v.tree_count} sequences={v.sequences}",
                        v.dominates and v.tree_count >= min_trees))
    return rows


def paging_optimality(tie: str = "lowest_id"):
    """greedy_min_cost against every lazy algorithm, then against named rivals."""
    rows = []
    small = PagingInstance((1, 1, 4), 2)
    for cache in itertools.combinations(range(small.size), 2):
        v = paging_oracle(small, 3, cache, tie)
        rows.append(Row("weighted-paging-optimal", f"costs=(1,1,4) k=2 n=3 cache={cache} tie={tie}",
                        "greedy <= all", f"dominates={v.dominates} trees={v.tree_count}", v.dominates))
    for costs in ((1, 1, 4, 2), (1, 2, 2, 5)):
        inst = PagingInstance(costs, 2)
        g = paging_profile("greedy_min_cost", inst, 5, tie=tie)
        for rival in ("max_cost", "fifo", "lru"):
            verdict = stochastic_dominance(g, paging_profile(rival, inst, 5, tie=tie))
            rows.append(Row("weighted-paging-optimal", f"costs={costs} k=2 n=5 vs {rival}",
                            "greedy pointwise <=", verdict, verdict in ("equal", "A_dominates")))
    return rows


def buffer_optimality():
    """greedy_max_block against every lazy algorithm, then against named rivals."""
    v = rbm_oracle(2, 2, 4)
    rows = [Row("buffer-optimal", "colours=2 k=2 n=4", "greedy <= all",
                f"dominates={v.dominates} trees={v.tree_count}", v.dominates)]
    for colours, k in itertools.product((3,), (2, 3)):
        g = rbm_profile("greedy_max_block", k, colours, 6)
        for rival in ("min_block", "fifo_colour"):
            verdict = stochastic_dominance(g, rbm_profile(rival, k, colours, 6))
            rows.append(Row("buffer-optimal", f"colours={colours} k={k} n=6 vs {rival}",
                            "greedy pointwise <=", verdict, verdict in ("equal", "A_dominates")))
    return rows


# ---------------------------------------------------------------- upper bounds

def circle_bounds(tie: str = "lowest_point", ms=(6, 8), ks=(2, 3), n_max: int = 5):
    """Strict ratios of greedy against OPT (<= k) and k-Center (<= k/2) on cycles.

    Against OPT every start with a server on point 0 is tried (rotations
    cover the rest); against k-Center the run starts on its anchors.
    """
    rows = []
    for m, k in itertools.product(ms, ks):
        M = cycle(m)
        worst_opt = Fraction(0)
        for C0 in itertools.combinations_with_replacement(range(m), k):
            if C0[0] != 0:
                continue
            for n in range(1, n_max + 1):
                r = bijective_ratio(cost_profile("greedy", M, C0, n, tie=tie),
                                    cost_profile("opt", M, C0, n)).strict_rho
                worst_opt = max(worst_opt, r)
        rows.append(Row("circle-k-bound", f"cycle:{m} k={k} n<={n_max} greedy/OPT all C0", f"<= {k}",
                        str(worst_opt), worst_opt <= k))
        A = kcenter_anchors(M, k)
        worst_kc = max(bijective_ratio(cost_profile("greedy", M, A, n, tie=tie),
                                       cost_profile("kcenter", M, A, n)).strict_rho
                       for n in range(1, n_max + 1))
        rows.append(Row("circle-k-bound", f"cycle:{m} k={k} n<={n_max} greedy/k-Center C0={A}",
                        f"<= {Fraction(k, 2)}", str(worst_kc), worst_kc <= Fraction(k, 2)))
    return rows


def line_bounds(tie: str = "lowest_point", m_max: int = 7, ks=(2, 3), n_max: int = 5):
    """Greedy on paths: strict ratio <= 2k, and c(4k/3), c(2k/3) not growing past n=3.

    Starts range over every configuration of distinct points.
    """
    rows = []
    for k in ks:
        for m in range(k, m_max + 1):
            M = path(m)
            worst, grow = Fraction(0), []
            for C0 in itertools.combinations(range(m), k):
                curve = {}
                for n in range(1, n_max + 1):
                    rep = bijective_ratio(cost_profile("greedy", M, C0, n, tie=tie),
                                          cost_profile("opt", M, C0, n), [Fraction(4 * k, 3)])
                    worst = max(worst, rep.strict_rho)
                    curve[n] = rep.asymptotic_curve[0][1]
                if any(curve[n] > curve[3] for n in range(3, n_max + 1)):
                    grow.append(C0)
            rows.append(Row("line-2k-strict", f"path:{m} k={k} n<={n_max} greedy/OPT", f"<= {2 * k}",
                            str(worst), worst <= 2 * k))
            rows.append(Row("line-4k/3-asymptotic", f"path:{m} k={k} n=3..{n_max} greedy/OPT",
                            "c(4k/3) <= value at n=3", f"starts exceeding: {len(grow)}", not grow))
            A = kcenter_anchors(M, k)
            cs = [asymptotic_constant(cost_profile("greedy", M, A, n, tie=tie),
                                      cost_profile("kcenter", M, A, n), Fraction(2 * k, 3))
                  for n in range(3, n_max + 1)]
            rows.append(Row("line-2k/3-vs-kcenter", f"path:{m} k={k} n=3..{n_max} C0={A}",
                            "c(2k/3) <= value at n=3", " ".join(map(str, cs)), max(cs) <= cs[0]))
    return rows


def kcenter_bound(m_max: int = 8, n_max: int = 5, k: int = 2):
    """k-Center against OPT from the anchors: c(2) stays within the diameter."""
    rows = []
    for kind, maker in (("path", path), ("cycle", cycle)):
        for m in range(k, m_max + 1):
            M = maker(m)
            A = kcenter_anchors(M, k)
            cs = [asymptotic_constant(cost_profile("kcenter", M, A, n), cost_profile("opt", M, A, n), 2)
                  for n in range(1, n_max + 1)]
            rows.append(Row("kcenter-2-asymptotic", f"{kind}:{m} k={k} n<={n_max} C0={A}",
                            f"c(2) <= diameter {M.diameter}", " ".join(map(str, cs)),
                            max(cs) <= M.diameter))
    return rows


def star_bound(tie: str = "lowest_point", n_max: int = 4, k: int = 2):
    """Greedy against OPT on a 3-ray spider: c(4k) stays within the diameter."""
    M = spider([(3, 1)] * 3)
    rows = []
    worst = {n: Fraction(0) for n in range(1, n_max + 1)}
    for C0 in itertools.combinations_with_replacement(range(M.m), k):
        for n in worst:
            c = asymptotic_constant(cost_profile("greedy", M, C0, n, tie=tie),
                                    cost_profile("opt", M, C0, n), 4 * k)
            worst[n] = max(worst[n], c)
    rows.append(Row("star-4k-asymptotic", f"spider:3x3 k={k} n<={n_max} all C0",
                    f"c({4 * k}) <= diameter {M.diameter}",
                    " ".join(str(worst[n]) for n in sorted(worst)), max(worst.values()) <= M.diameter))
    return rows


# ---------------------------------------------------------------- lower bounds

def lower_bound(n: int = 4, d=1):
    """Counting certificate rho >= 2 against OPT for every lazy online algorithm."""
    M = three_point_metric(d)
    C0 = (0, 2)
    opt = cost_profile("opt", M, C0, n)
    game = KServerGame(M, C0, n)
    d = Fraction(d)
    need = opt.count_at_most(d)
    worst = max(sum(1 for v in p if v * M.unit < 2 * d) for p in frontier(game))
    return [Row("offline-ratio-at-least-2", f"three points d={d} C0={C0} n={n}",
                f"#{{A < 2d}} < #{{OPT <= d}} = {need} for all algorithms",
                f"max #{{A < 2d}} = {worst} over {count_algorithms(game)} algorithms", worst < need)]


def greedy_nonoptimal(m: int = 201, t=Fraction(1, 10), x=(Fraction(3, 100), Fraction(7, 100)), n: int = 3):
    """Average cost of the gadget algorithm against greedy from an unfavourable start."""
    M = unit_path(m)
    C0 = tuple(int(v * (m - 1)) for v in x)
    g = total_cost("greedy", M, C0, n)
    a = total_cost("gadget", M, C0, n, t=t)
    size = m ** n
    diff = (a - g) / size
    return [Row("greedy-not-optimal-line", f"path:{m} C0={C0} t={t} n={n}",
                "mean(gadget) < mean(greedy)", f"mean difference {diff} ({float(diff):.3g})", a < g)]


def line_adversary(k: int = 2, eps=Fraction(1, 5), m: int = 101, n: int = 60):
    """Greedy pays more than 1/2 - eps/k per alternating request; k-Center pays about 1/k."""
    seq = line_clustering_adversary(k, eps, m, n)
    M = seq.metric
    A = kcenter_anchors(M, k)
    g = simulate("greedy", M, A, seq.requests)
    kc = simulate("kcenter", M, A, seq.requests)
    low = min(s.cost for s in g.steps[seq.suffix_start:])
    bound = Fraction(1, 2) - Fraction(eps) / k
    return [Row("greedy-line-lower-bound", f"k={k} eps={eps} m={m} n={n} C0={A}",
                f"suffix steps > {bound}", f"min suffix step {low}", low > bound),
            Row("greedy-line-lower-bound", f"k={k} eps={eps} m={m} n={n} C0={A}",
                f"k-Center total <= {Fraction(n, k) + 1}", str(kc.total_cost),
                kc.total_cost <= Fraction(n, k) + 1)]


def star_kcenter(k: int = 2, ds=(3, 6, 9), n: int = 4):
    """Certified ratio of k-Center against a centre-anchored rival grows with d."""
    rows, rhos = [], []
    for d in ds:
        inst = star_lowerbound_instance(k, d)
        M = inst.metric
        pk = cost_profile("kcenter", M, inst.anchors_kc, n, budget=None, anchors=inst.anchors_kc)
        pa = cost_profile("kcenter", M, inst.anchors_a, n, budget=None, anchors=inst.anchors_a)
        rho, c = certified_ratio(pk, pa)
        rhos.append(rho)
        rows.append(Row("kcenter-unbounded-star", f"k={k} d={d} points={M.m} n={n}",
                        "certificate holds", f"rho={rho} at c={c}", rho is not None))
    increasing = all(a < b for a, b in zip(rhos, rhos[1:]))
    rows.append(Row("kcenter-unbounded-star", f"d in {tuple(ds)}", "certified rho strictly increasing",
                    " ".join(map(str, rhos)), increasing))
    return rows


# ---------------------------------------------------------------- ordered bijection

def ob_lemmas(m_max: int = 9, k_max: int = 3):
    """Ordered-bijection lemmas over all pairs of distinct-point configurations."""
    counts = {"biMatch": [0, 0], "btw2servers": [0, 0], "bestConf": [0, 0], "spiderGraph": [0, 0]}

    def tally(name, ok):
        counts[name][0] += 1
        counts[name][1] += not ok

    for m in range(2, m_max + 1):
        for kind, maker in (("path", path), ("cycle", cycle)):
            M = maker(m)
            for k in range(1, min(k_max, m) + 1):
                confs = list(itertools.combinations(range(m), k))
                uniform = uniform_configuration(M, k)
                for C1 in confs:
                    if kind == "path":
                        for C2 in confs:
                            tally("biMatch", bimatch_holds(M, C1, C2))
                            tally("btw2servers", btw2servers_holds(M, C1, C2))
                    if uniform is not None:
                        tally("bestConf", best_conf_holds(M, k, C1))
    for rays in ([(4, 1), (4, 1)], [(2, 1)] * 3, [(1, 1), (2, 1), (3, 1)]):
        S = spider(rays)
        for k in range(1, k_max + 1):
            confs = list(itertools.combinations(range(S.m), k))
            for C in confs:
                if 0 in C:
                    for C2 in confs:
                        tally("spiderGraph", spider_centre_holds(S, C, C2))
    factors = {"biMatch": "2k", "btw2servers": "k", "bestConf": "1", "spiderGraph": "2k"}
    return [Row(name, f"paths/cycles m<={m_max}, spiders, k<={k_max}", f"factor {factors[name]}",
                f"{bad} violations in {total} pairs", bad == 0 and total > 0)
            for name, (total, bad) in counts.items()]


# ---------------------------------------------------------------- engine

def engine():
    """Generalisation chain strict >= maxmax >= 1 against OPT on small instances."""
    rows = []
    for M, C0 in ((cycle(6), (0, 3)), (path(5), (1, 3)), (cycle(8), (1, 4, 6))):
        ok, checked = True, 0
        for alg in ("greedy", "kcenter", "wfa"):
            for n in (1, 2, 3):
                A, B = cost_profile(alg, M, C0, n), cost_profile("opt", M, C0, n)
                rep = bijective_ratio(A, B)
                maxmax, average = scalar_ratios(A, B)
                ok &= rep.strict_rho >= maxmax >= 1 and rep.strict_rho >= average
                checked += 1
        rows.append(Row("engine-chain", f"{M.label} C0={C0}", "strict >= maxmax >= 1, strict >= average",
                        f"{checked} comparisons", ok))
    return rows


SUITES = {
    "circle-optimality": circle_optimality,
    "paging-optimality": paging_optimality,
    "buffer-optimality": buffer_optimality,
    "circle-bounds": circle_bounds,
    "line-bounds": line_bounds,
    "kcenter-bound": kcenter_bound,
    "star-bound": star_bound,
    "lower-bound": lower_bound,
    "greedy-nonoptimal": greedy_nonoptimal,
    "line-adversary": line_adversary,
    "star-kcenter": star_kcenter,
    "ob-lemmas": ob_lemmas,
    "engine": engine,
}

# suites whose greedy runs take a k-server tie rule
TIE_AWARE = {"circle-optimality", "circle-bounds", "line-bounds", "star-bound"}


def run_suite(name: str, tie: str | None = None) -> list:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    if tie is not None and name in TIE_AWARE:
        return SUITES[name](tie=tie)
    return SUITES[name]()
