"""Command line runner: ``bijective {profile,compare,verify,adversary,oracle}``.

Reports go to stdout (and to ``--out`` when given). Failures print a JSON
error object and exit nonzero: 2 for invalid input, 3 for a refused budget.
Exit code 1 means a requested check ran and failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .adversaries import (line_clustering_adversary, star_lowerbound_instance, three_point_adversary,
                          three_point_metric)
from .analysis import (DEFAULT_BUDGET, BudgetExceeded, bijective_ratio, certified_ratio, cost_profile,
                       sample_profiles)
from .kserver import ALGORITHMS, TIE_RULES, kcenter_anchors, make_config, offline_opt, simulate
from .metric import MetricError, build_metric
from .oracle import DEFAULT_TREE_BUDGET, kserver_oracle
from .paging import PAGE_TIES, PagingInstance, paging_oracle
from .reorder import rbm_oracle
from .theorems import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _budget(text: str):
    return None if text.lower() in ("none", "inf") else int(text)


def _points(text: str) -> tuple:
    return tuple(int(p) for p in text.split(",") if p.strip())


def _load_metric(text: str):
    if text.endswith(".json") and Path(text).is_file():
        text = Path(text).read_text()
    return build_metric(text)


def _start(M, k: int, c0):
    if c0:
        return make_config(M, c0, k)
    return kcenter_anchors(M, k)


class Output:
    """Single writer for stdout and the optional output directory."""

    def __init__(self, out: str | None):
        self.dir = Path(out) if out else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def file(self, name: str, text: str):
        if self.dir:
            (self.dir / name).write_text(text)

    def report(self, name: str, obj):
        text = formats.dumps(obj)
        self.file(name, text)
        sys.stdout.write(text)


def _run_record(args, M=None, C0=None) -> dict:
    rec = {"tie": getattr(args, "tie", None), "seed": getattr(args, "seed", None)}
    if M is not None:
        rec["metric"] = M.to_dict()
    if C0 is not None:
        rec["C0"] = list(C0)
    return rec


# ---------------------------------------------------------------- subcommands

def cmd_profile(args, out: Output) -> int:
    M = _load_metric(args.metric)
    C0 = _start(M, args.k, args.c0)
    params = dict(tie=args.tie, t=args.t)
    if args.samples:
        prof = sample_profiles(args.alg, M, C0, args.n, args.samples, args.seed, **params)
    else:
        prof = cost_profile(args.alg, M, C0, args.n, budget=args.budget, **params)
    text = formats.profile_csv(prof)
    out.file("profile.csv", text)
    out.file("run.json", formats.dumps({"run": _run_record(args, M, C0), "algorithm": args.alg,
                                        "n": args.n, "approximate": prof.approximate}))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args, out: Output) -> int:
    M = _load_metric(args.metric)
    C0 = _start(M, args.k, args.c0)
    params = dict(tie=args.tie, t=args.t)
    pa = cost_profile(args.a, M, C0, args.n, budget=args.budget, **params)
    pb = cost_profile(args.b, M, C0, args.n, budget=args.budget, **params)
    rep = bijective_ratio(pa, pb, args.rho)
    out.file("profile_a.csv", formats.profile_csv(pa))
    out.file("profile_b.csv", formats.profile_csv(pb))
    body = rep.to_dict()
    body.update(a=args.a, b=args.b, n=args.n, run=_run_record(args, M, C0))
    ok = True
    if args.max_rho is not None:
        ok = rep.strict_rho <= args.max_rho
        body["check"] = {"strict_rho_at_most": str(args.max_rho), "passed": ok}
    out.report("report.json", body)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_verify(args, out: Output) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        for row in run_suite(name, args.tie):
            rows.append(dict(row.to_dict(), suite=name))
    ok = all(r["passed"] for r in rows)
    out.file("verify.json", formats.dumps({"rows": rows, "passed": ok}))
    w = sys.stdout.write
    w(f"{'verdict':7}  {'theorem':28}  {'instance':48}  {'bound':40}  measured\n")
    for r in rows:
        verdict = "PASS" if r["passed"] else "FAIL"
        w(f"{verdict:7}  {r['theorem']:28}  {r['instance']:48}  {r['bound']:40}  {r['measured']}\n")
    w(f"{'PASS' if ok else 'FAIL'}: {sum(r['passed'] for r in rows)}/{len(rows)} rows\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_adversary(args, out: Output) -> int:
    if args.kind == "three-point":
        M = three_point_metric(args.d)
        seq = three_point_adversary(args.alg, args.n, args.d, tie=args.tie)
        a = simulate(args.alg, M, (0, 2), seq, tie=args.tie).total_cost
        opt = offline_opt(M, (0, 2), seq)[0]
        body = {"kind": args.kind, "sequence": list(seq), "alg": args.alg, "alg_cost": a, "opt_cost": opt,
                "ratio_at_least_2": a >= 2 * opt}
        ok = a >= 2 * opt
    elif args.kind == "line":
        res = line_clustering_adversary(args.k, args.eps, args.m, args.n, tie=args.tie)
        M = res.metric
        A = kcenter_anchors(M, args.k)
        g = simulate("greedy", M, A, res.requests, tie=args.tie)
        kc = simulate("kcenter", M, A, res.requests)
        low = min((s.cost for s in g.steps[res.suffix_start:]), default=None)
        bound = Fraction(1, 2) - args.eps / args.k
        ok = low is not None and low > bound
        body = {"kind": args.kind, "sequence": list(res.requests), "x": res.x, "clustering": res.clustering,
                "suffix_start": res.suffix_start, "greedy_cost": g.total_cost, "kcenter_cost": kc.total_cost,
                "min_suffix_step": low, "suffix_bound": bound, "C0": list(A)}
    else:
        inst = star_lowerbound_instance(args.k, args.d)
        M = inst.metric
        pk = cost_profile("kcenter", M, inst.anchors_kc, args.n, budget=None, anchors=inst.anchors_kc)
        pa = cost_profile("kcenter", M, inst.anchors_a, args.n, budget=None, anchors=inst.anchors_a)
        rho, c = certified_ratio(pk, pa)
        ok = rho is not None
        body = {"kind": args.kind, "points": M.m, "rays": inst.rays, "anchors_kcenter": list(inst.anchors_kc),
                "anchors_rival": list(inst.anchors_a), "n": args.n, "certified_rho": rho, "at_cost": c}
    body["run"] = _run_record(args)
    out.report("adversary.json", body)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_oracle(args, out: Output) -> int:
    if args.problem == "kserver":
        M = _load_metric(args.metric)
        C0 = _start(M, args.k, args.c0)
        v = kserver_oracle(M, C0, args.n, args.tie, budget=args.budget)
        run = _run_record(args, M, C0)
    elif args.problem == "paging":
        tie = args.tie if args.tie in PAGE_TIES else "lowest_id"
        inst = PagingInstance(tuple(args.costs), args.k)
        v = paging_oracle(inst, args.n, args.c0 or None, tie, budget=args.budget)
        run = {"costs": [str(c) for c in inst.costs], "k": args.k, "tie": tie}
    else:
        v = rbm_oracle(args.k, args.colours, args.n, budget=args.budget)
        run = {"colours": args.colours, "k": args.k}
    body = v.to_dict()
    body.update(problem=args.problem, n=args.n, run=run)
    out.report("oracle.json", body)
    return EXIT_OK if v.dominates else EXIT_FAILED


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for report files")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET,
                        help="max sequences (m^n) or oracle states; 'none' disables")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--metric", required=True, help="kind:m[:delta], JSON text, or a .json file")
    alg.add_argument("--k", type=int, required=True)
    alg.add_argument("--n", type=int, required=True)
    alg.add_argument("--c0", type=_points, help="initial configuration, e.g. 0,3 (default: k-Center anchors)")
    alg.add_argument("--tie", choices=TIE_RULES, default="lowest_point")
    alg.add_argument("--t", type=_fraction, default=Fraction(1, 10), help="gadget threshold")

    p = argparse.ArgumentParser(prog="bijective", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", parents=[common, alg], help="sorted cost profile as CSV")
    sp.add_argument("--alg", choices=ALGORITHMS + ("opt",), required=True)
    sp.add_argument("--samples", type=int, help="Monte Carlo mode with this many samples")

    sc = sub.add_parser("compare", parents=[common, alg], help="comparison report as JSON")
    sc.add_argument("--a", choices=ALGORITHMS + ("opt",), required=True)
    sc.add_argument("--b", choices=ALGORITHMS + ("opt",), required=True)
    sc.add_argument("--rho", type=_fraction, action="append", default=[],
                    help="add a point of the asymptotic curve (repeatable)")
    sc.add_argument("--max-rho", type=_fraction, help="fail unless strict_rho is at most this")

    sv = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sv.add_argument("--suite", choices=sorted(SUITES) + ["all"], required=True)
    sv.add_argument("--tie", choices=TIE_RULES, default=None)

    sa = sub.add_parser("adversary", parents=[common], help="generate a lower-bound sequence")
    sa.add_argument("--kind", choices=("three-point", "line", "star"), required=True)
    sa.add_argument("--alg", choices=("greedy", "kcenter", "wfa"), default="greedy")
    sa.add_argument("--k", type=int, default=2)
    sa.add_argument("--n", type=int, default=4)
    sa.add_argument("--m", type=int, default=101)
    sa.add_argument("--d", type=_fraction, default=Fraction(1))
    sa.add_argument("--eps", type=_fraction, default=Fraction(1, 5))
    sa.add_argument("--tie", choices=TIE_RULES, default="lowest_point")

    so = sub.add_parser("oracle", parents=[common], help="check greedy against all online algorithms")
    so.add_argument("--problem", choices=("kserver", "paging", "buffer"), default="kserver")
    so.add_argument("--metric", help="k-server metric")
    so.add_argument("--k", type=int, default=2)
    so.add_argument("--n", type=int, default=3)
    so.add_argument("--c0", type=_points, help="initial configuration or cache")
    so.add_argument("--costs", type=lambda s: [_fraction(x) for x in s.split(",")], help="page costs")
    so.add_argument("--colours", type=int, default=2)
    so.add_argument("--tie", default="lowest_point", choices=TIE_RULES + PAGE_TIES)
    so.set_defaults(budget=DEFAULT_TREE_BUDGET)
    return p


COMMANDS = {"profile": cmd_profile, "compare": cmd_compare, "verify": cmd_verify,
            "adversary": cmd_adversary, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = None
    try:
        out = Output(args.out)
        if args.command == "oracle":
            if args.problem == "kserver" and not args.metric:
                raise UsageError("--metric is required for the k-server oracle")
            if args.problem == "paging" and not args.costs:
                raise UsageError("--costs is required for the paging oracle")
        return COMMANDS[args.command](args, out)
    except BudgetExceeded as exc:
        return _fail(out, "budget_exceeded", str(exc), EXIT_BUDGET)
    except (UsageError, MetricError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail(out, "invalid_input", str(exc), EXIT_INVALID)


def _fail(out, kind, message, code) -> int:
    text = formats.dumps(formats.error_object(kind, message))
    if out is not None:
        out.file("error.json", text)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
