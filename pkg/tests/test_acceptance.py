"""Acceptance suite.  Each test records one ``ACCEPT`` line, printed in the
terminal summary (run ``pytest tests/test_acceptance.py -v``)."""

import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from securenc.attack import FunctionStrategy, ReplaceStrategy, simulate
from securenc.cli import main as cli_main
from securenc.field import make_extension_field, make_prime_field
from securenc.linalg import FqMatrix, parse_matrix
from securenc.network import AdversaryPlacement, channel_params, derive_transfer, node_to_edge
from securenc.privacy import (
    HashSpec,
    SecureCode,
    SystematicCode,
    ToeplitzSeed,
    check_tag,
    rates,
    tag_seed_length,
    universal2_check,
    verify_tag,
)
from securenc.robust import (
    DecodeFailure,
    RobustCodeParams,
    check_conditions,
    collision_oracle,
    decode,
    encode,
    keygen,
    reduce_HZ,
)
from securenc.scenarios import circle_network, parse_expect, seed_search, shipped_table2, table2_validate
from securenc.secrecy import (
    AuditCode,
    JointPMF,
    LogValue,
    empirical_mi,
    leakage_of_secure_code,
    linear_leakage_rank,
    secure_code_maps,
    theorem1_audit,
)

from helpers import line, two_paths

GF2 = make_prime_field(2)
RESULTS: list = []


@contextmanager
def criterion(num: int, name: str, limit_s: float):
    """Time the body; the body fills ``info`` and sets ``info['ok']``."""
    info: dict = {"ok": False, "detail": ""}
    t0 = time.perf_counter()
    try:
        yield info
    finally:
        dt = time.perf_counter() - t0
        ok = info["ok"] and dt < limit_s
        RESULTS.append(f"ACCEPT {num:>2} {name}: {'PASS' if ok else 'FAIL'} {info['detail']} time={dt:.2f}s limit={limit_s:g}s")
    assert dt < limit_s, f"took {dt:.1f}s, limit {limit_s}s"


# 1 ---------------------------------------------------------------------------


def test_c01_active_equals_passive_leakage():
    with criterion(1, "active-vs-passive leakage", 10) as info:
        arrangements = {
            "read<inject": AdversaryPlacement((1,), (2,)),
            "inject<read": AdversaryPlacement((2,), (1,)),
            "same-edge": AdversaryPlacement((2,), (2,)),
        }
        encoders = {"masked": "1", "plain": "0"}
        total = 0
        bad = []
        for (aname, adv), (ename, gl) in itertools.product(arrangements.items(), encoders.items()):
            tm = derive_transfer(line(GF2, hops=3), adv)
            code = AuditCode.linear(GF2, parse_matrix("1", GF2), parse_matrix(gl, GF2))
            rep = theorem1_audit(code, tm, adv, n=1)
            total += len(rep.records)
            if not rep.ok or not rep.records:
                bad.append(f"{aname}/{ename}")
        info["ok"] = not bad
        info["detail"] = f"instances=6 strategies={total} violations={len(bad)}"
        assert not bad


# 2 ---------------------------------------------------------------------------


def test_c02_circle_network_rates():
    with criterion(2, "circle network rates", 1) as info:
        net = circle_network(12, 2, 1, 8)
        m0 = channel_params(derive_transfer(net, AdversaryPlacement((), ()))).m0
        singles = set()
        for v in net.intermediate_nodes:
            p = channel_params(derive_transfer(net, node_to_edge(net, [v])))
            r = rates(p.m0, p.m1, p.m2)
            singles.add((p.m1, p.m2, r.secrecy_only, r.robust_secure))
        pair_m1 = pair_m2 = 0
        for pair in itertools.combinations(net.intermediate_nodes, 2):
            p = channel_params(derive_transfer(net, node_to_edge(net, pair)))
            pair_m1, pair_m2 = max(pair_m1, p.m1), max(pair_m2, p.m2)
        guaranteed = m0 - pair_m2
        info["ok"] = m0 == 4 and singles == {(1, 1, 3, 2)} and pair_m1 <= 2 and pair_m2 <= 2 and guaranteed == 2
        info["detail"] = f"m0={m0} single={sorted(singles)} pair_max_m1={pair_m1} pair_max_m2={pair_m2} secrecy_rate_pairs={guaranteed}"
        assert info["ok"]


# 3 ---------------------------------------------------------------------------


def test_c03_robust_code_exhaustive_gate():
    with criterion(3, "robust code exhaustive gate", 60) as info:
        E = make_extension_field(GF2, 4)
        net = two_paths()
        adv = AdversaryPlacement((3,), (3,))  # read and add on one of two paths
        tm = derive_transfer(net, adv).lift(E)
        p = channel_params(tm)
        params = RobustCodeParams(E, 2, p.m0, p.m1, p.m3, p.m4)
        assert (params.m0, params.m1, params.m3, params.m4) == (2, 1, 2, 2)
        inst = keygen(params, np.random.default_rng(3))
        gated = wrong = 0
        for a, b in itertools.product(range(16), repeat=2):
            M = FqMatrix(E, [[a, b]], 2)
            X, side = encode(M, inst, params)
            for z in itertools.product(range(16), repeat=2):
                # each deterministic strategy yields some Z for this message;
                # the script below realizes every such Z
                out = simulate(tm, adv, X, FunctionStrategy(lambda slot, pre, z=z: z[slot[0] - 1]))
                H_hat, Z_hat = reduce_HZ(tm.H_B, out.Z)
                if not check_conditions(inst, params, tm.K_B, H_hat, M, Z_hat).all:
                    continue
                gated += 1
                try:
                    wrong += decode(out.Y_B, side, params) != M
                except DecodeFailure:
                    wrong += 1
        info["ok"] = gated > 0 and wrong == 0
        info["detail"] = f"pairs=65536 gated={gated} wrong={wrong}"
        assert info["ok"]


# 4 ---------------------------------------------------------------------------


def _monte_carlo(q_bits: int, trials: int, seed: int):
    E = make_extension_field(GF2, q_bits)
    net = two_paths()
    adv = AdversaryPlacement((3,), (3,))
    tm = derive_transfer(net, adv).lift(E)
    n = 4
    params = RobustCodeParams(E, n, 2, 1, 2, 2)
    fails = 0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        inst = keygen(params, rng)
        M = FqMatrix.random(E, 1, n, rng)
        X, side = encode(M, inst, params)
        out = simulate(tm, adv, X, ReplaceStrategy(adv, n, E, int(rng.integers(2**63))))
        try:
            fails += decode(out.Y_B, side, params) != M
        except DecodeFailure:
            fails += 1
    bound = n ** (params.m0 + 1) / E.order
    sigma = math.sqrt(bound * (1 - bound) / trials)
    return fails / trials, bound, sigma


@pytest.mark.slow
def test_c04_monte_carlo_success_bound():
    with criterion(4, "decode-failure bound (Monte Carlo)", 300) as info:
        trials = 10_000
        rate10, bound10, sig10 = _monte_carlo(10, trials, 10)
        rate16, bound16, sig16 = _monte_carlo(16, trials, 16)
        ok10 = rate10 <= bound10 + 3 * sig10
        ok16 = rate16 <= bound16 + 3 * sig16
        info["ok"] = ok10 and ok16
        info["detail"] = (
            f"trials={trials} q'=2^10: fail={rate10:.4f} bound={bound10:.4f}+3sigma={3 * sig10:.4f}; "
            f"q'=2^16: fail={rate16:.5f} bound={bound16:.5f}+3sigma={3 * sig16:.5f}"
        )
        assert info["ok"]


# 5 ---------------------------------------------------------------------------


def test_c05_collision_oracle():
    with criterion(5, "Vandermonde collision bound", 30) as info:
        F = make_extension_field(GF2, 3)
        rng = np.random.default_rng(5)
        bound = Fraction(3, 8) ** 2
        worst = Fraction(0)
        pairs = 0
        while pairs < 100:
            x = [F.random(rng) for _ in range(3)]
            y = [F.random(rng) for _ in range(3)]
            if x == y:
                continue
            worst = max(worst, collision_oracle(x, y, 3, 2, F))
            pairs += 1
        info["ok"] = worst <= bound
        info["detail"] = f"pairs={pairs} max_prob={worst} bound={bound}"
        assert info["ok"]


# 6 ---------------------------------------------------------------------------


def test_c06_universal2_exhaustive():
    with criterion(6, "universal2 Toeplitz family", 60) as info:
        checked = failed = 0
        for k in range(1, 13):
            for kbar in range(1, min(4, k) + 1):
                rep = universal2_check(HashSpec(k, kbar), 2)
                checked += 1
                failed += not rep.ok
        info["ok"] = failed == 0
        info["detail"] = f"specs={checked} (k<=12, kbar<=4) failures={failed}"
        assert info["ok"]


# 7 ---------------------------------------------------------------------------


def test_c07_zero_leakage_seed():
    with criterion(7, "zero-leakage seed search", 120) as info:
        m3, l = 2, 4
        inner = SystematicCode(GF2, m3, l)
        k = inner.k
        spec = HashSpec(k, k - l - 2)
        details = []
        ok = True
        for K_E in (parse_matrix("1 0", GF2), parse_matrix("0 1", GF2), parse_matrix("1 1", GF2)):
            seed, _ = seed_search(lambda s: SecureCode(inner, spec, s), spec, GF2, K_E, np.random.default_rng(7))
            found = seed is not None and leakage_of_secure_code(SecureCode(inner, spec, seed), K_E) == 0.0
            bad = sum(
                linear_leakage_rank(*secure_code_maps(SecureCode(inner, spec, ToeplitzSeed(GF2, S)), K_E)) > 0
                for S in itertools.product(range(2), repeat=spec.seed_length)
            )
            frac = Fraction(bad, 2**spec.seed_length)
            ok &= found and frac <= Fraction(1, 2)
            details.append(f"K_E={K_E.row(0)} bad={frac}")
        info["ok"] = ok
        info["detail"] = f"k={k} kbar={spec.kbar} " + " ".join(details)
        assert ok


# 8 ---------------------------------------------------------------------------


def test_c08_rank_leakage_equals_enumerated_mi():
    with criterion(8, "rank leakage = enumerated MI", 60) as info:
        rng = np.random.default_rng(8)
        agree = 0
        for i in range(200):
            F = make_prime_field(2 if i % 2 == 0 else 3)
            r, a, b = (int(v) for v in rng.integers(1, 5, 3))
            A, B = FqMatrix.random(F, r, a, rng), FqMatrix.random(F, r, b, rng)
            outcomes = []
            for m in itertools.product(range(F.order), repeat=a):
                am = A.apply(m)
                for l_ in itertools.product(range(F.order), repeat=b):
                    outcomes.append((m, tuple(F.add(u, v) for u, v in zip(am, B.apply(l_)))))
            mi = empirical_mi(JointPMF.from_outcomes(outcomes))
            agree += mi == LogValue.log_q_units(linear_leakage_rank(A, B), F.order)
        info["ok"] = agree == 200
        info["detail"] = f"instances=200 exact_agreements={agree}"
        assert info["ok"]


# 9 ---------------------------------------------------------------------------


def test_c09_tag_false_accept():
    with criterion(9, "tag false-accept rate", 10) as info:
        b, msg = 4, [1, 0, 1, 1, 0, 0, 1, 0]
        seeds = list(itertools.product(range(2), repeat=tag_seed_length(len(msg), b)))
        tags = [verify_tag(msg, s, b) for s in seeds]
        worst = Fraction(0)
        for e in itertools.product(range(2), repeat=len(msg)):
            if not any(e):
                continue
            bad = [m ^ x for m, x in zip(msg, e)]
            worst = max(worst, Fraction(sum(check_tag(bad, t) for t in tags), len(tags)))
        info["ok"] = worst <= Fraction(1, 2**b) and all(check_tag(msg, t) for t in tags)
        info["detail"] = f"tamperings=255 seeds={len(seeds)} max_false_accept={worst} bound=1/{2**b}"
        assert info["ok"]


# 10 --------------------------------------------------------------------------


def test_c10_table2_harness(tmp_path, capsys):
    with criterion(10, "rank-table harness", 10) as info:
        net, exp = shipped_table2()
        rows = parse_expect(exp)
        # a file that matches the rows it is given reports all-pass
        matching = [r for r in rows if table2_validate(net, [r]).ok]
        f_exp = tmp_path / "exp.txt"
        f_exp.write_text("".join(f"{r.label()}: {r.rank_KE}, {r.rank_HB}\n" for r in matching))
        code_match = cli_main(["table2", "--expect", str(f_exp)])
        # the bundled reconstruction against the full table
        code_full = cli_main(["table2"])
        out = capsys.readouterr().out
        verdicts = out.count("verdict=")
        full = table2_validate(net, rows)
        passed = sum(r[3] for r in full.rows)
        info["ok"] = code_match == 0 and code_full in (0, 1) and verdicts == len(matching) + len(rows)
        info["detail"] = f"matching_rows_exit={code_match} full_table_rows={len(rows)} reconstruction_pass={passed}/{len(rows)}"
        assert info["ok"]
