"""Command-line front end.  Reports are ``key=value`` lines under ``[config N]`` headers.

Exit status: 0 when every check passes, 1 on a failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import __version__
from .network import AdversaryPlacement, channel_params, derive_transfer, node_to_edge, parse_network
from .privacy import HashSpec, rates, universal2_check


def _emit(lines, out):
    out.write("\n".join(lines) + "\n")


def _section(n: int, lines: list[str]) -> list[str]:
    return [f"[config {n}]"] + lines + [""]


def cmd_params(args, out) -> int:
    nf = parse_network(Path(args.network).read_text())
    if args.wiretap is not None or args.inject is not None:
        adv = AdversaryPlacement(tuple(sorted(set(args.wiretap or ()))), tuple(sorted(set(args.inject or ()))))
    else:
        adv = nf.placement(args.attack_nodes)
    tm = derive_transfer(nf.network, adv)
    p = channel_params(tm)
    r = rates(p.m0, p.m1, p.m2)
    lines = [f"wiretap={' '.join(map(str, adv.wiretap))}", f"inject={' '.join(map(str, adv.inject))}"]
    lines += [f"{k}={v}" for k, v in p.as_dict().items()]
    lines += [f"rate_robust={r.robust_secure}", f"rate_secrecy={r.secrecy_only}", f"causal={'yes' if tm.causal(adv) else 'no'}"]
    _emit(_section(1, lines), out)
    return 0


def cmd_table2(args, out) -> int:
    from .scenarios import parse_expect, shipped_table2, table2_validate

    net_text, exp_text = shipped_table2()
    if args.network:
        net_text = Path(args.network).read_text()
    if args.expect:
        exp_text = Path(args.expect).read_text()
    rep = table2_validate(net_text, parse_expect(exp_text))
    _emit(_section(1, rep.lines()), out)
    return 0 if rep.ok else 1


def cmd_circle(args, out) -> int:
    from .scenarios import circle_network

    net = circle_network(args.k, args.l, args.alice, args.bob)
    base = channel_params(derive_transfer(net, AdversaryPlacement((), ())))
    blocks = [[f"adversary=none", f"m0={base.m0}", f"check_m0={'pass' if base.m0 == 2 * args.l else 'fail'}"]]
    ok = base.m0 == 2 * args.l
    inter = net.intermediate_nodes
    for size in range(1, args.attack_size + 1):
        for nodes in itertools.combinations(inter, size):
            p = channel_params(derive_transfer(net, node_to_edge(net, nodes)))
            r = rates(p.m0, p.m1, p.m2)
            good = p.m1 <= size and p.m2 <= size
            ok &= good
            blocks.append(
                [f"adversary={' & '.join(nodes)}"]
                + [f"{k}={v}" for k, v in p.as_dict().items()]
                + [f"rate_robust={r.robust_secure}", f"rate_secrecy={r.secrecy_only}", f"check_ranks={'pass' if good else 'fail'}"]
            )
    for n, b in enumerate(blocks, start=1):
        _emit(_section(n, b), out)
    return 0 if ok else 1


def cmd_simulate(args, out) -> int:
    from .scenarios import ScenarioConfig, run_experiment

    cfg = ScenarioConfig.load(args.config)
    rep = run_experiment(cfg, timing=args.timing)
    text = rep.format()
    target = args.report or cfg.run.get("report")
    if target:
        path = Path(target) if args.report else cfg.base_dir / target
        path.write_text(text)
    out.write(text)
    return 0 if rep.ok else 1


def cmd_mi_audit(args, out) -> int:
    from .scenarios import load_audit

    jobs = load_audit(Path(args.config))
    ok = True
    for n, (label, rep) in enumerate(jobs, start=1):
        ok &= rep.ok
        _emit(_section(n, [f"instance={label}"] + rep.lines()), out)
    return 0 if ok else 1


def cmd_hash_check(args, out) -> int:
    rep = universal2_check(HashSpec(args.kn, args.kbar), args.q)
    lines = [
        f"kn={args.kn}",
        f"kbar={args.kbar}",
        f"q={args.q}",
        f"seeds={args.q ** (args.kn - 1)}",
        f"max_collision={rep.max_collision.numerator}/{rep.max_collision.denominator}",
        f"bound={rep.bound.numerator}/{rep.bound.denominator}",
        f"result={'pass' if rep.ok else 'fail'}",
    ]
    _emit(_section(1, lines), out)
    return 0 if rep.ok else 1


def cmd_rates(args, out) -> int:
    r = rates(args.m0, args.m1, args.m2)
    lines = [
        f"m0={args.m0}",
        f"m1={args.m1}",
        f"m2={args.m2}",
        f"rate_robust={r.robust_secure}",
        f"robust_feasible={'yes' if r.robust_feasible else 'no'}",
        f"rate_secrecy={r.secrecy_only}",
        f"secrecy_feasible={'yes' if r.secrecy_feasible else 'no'}",
    ]
    _emit(_section(1, lines), out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="securenc", description="Secure network coding simulator")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="channel parameters of a network and adversary")
    p.add_argument("--network", required=True)
    p.add_argument("--attack-nodes", nargs="*", default=None)
    p.add_argument("--wiretap", nargs="*", type=int, default=None)
    p.add_argument("--inject", nargs="*", type=int, default=None)
    p.set_defaults(fn=cmd_params)

    p = sub.add_parser("table2", help="compare per-node-set ranks with an expectation file")
    p.add_argument("--network", help="network file (default: bundled reconstruction)")
    p.add_argument("--expect", help="expectation file (default: bundled table)")
    p.set_defaults(fn=cmd_table2)

    p = sub.add_parser("circle", help="circle network parameters under node attacks")
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--alice", type=int, default=1)
    p.add_argument("--bob", type=int, default=8)
    p.add_argument("--attack-size", type=int, default=1)
    p.set_defaults(fn=cmd_circle)

    p = sub.add_parser("simulate", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--report", help="also write the report here")
    p.add_argument("--timing", action="store_true", help="add wall-clock lines (breaks byte-identical output)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("mi-audit", help="exact active-vs-passive leakage audit")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_mi_audit)

    p = sub.add_parser("hash-check", help="exhaustive universal_2 check of the Toeplitz hash")
    p.add_argument("--kn", type=int, required=True)
    p.add_argument("--kbar", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(fn=cmd_hash_check)

    p = sub.add_parser("rates", help="achievable rates for given ranks")
    p.add_argument("--m0", type=int, required=True)
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)
    p.set_defaults(fn=cmd_rates)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args, out)
    except (OSError, ValueError, KeyError) as exc:
        print(f"securenc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
