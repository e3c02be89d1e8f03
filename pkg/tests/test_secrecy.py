import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from securenc.attack import EnumerationCapExceeded
from securenc.field import make_prime_field
from securenc.linalg import FqMatrix, parse_matrix
from securenc.network import AdversaryPlacement, derive_transfer
from securenc.privacy import HashSpec, SecureCode, SystematicCode, ToeplitzSeed
from securenc.secrecy import (
    AuditCode,
    JointPMF,
    LogValue,
    empirical_mi,
    kron_identity,
    leakage_of_secure_code,
    linear_leakage,
    linear_leakage_rank,
    secure_code_maps,
    theorem1_audit,
)

from helpers import line, two_paths

GF2 = make_prime_field(2)


def _float_mi(table):
    """Plain floating-point mutual information, as an independent oracle."""
    pm, py = {}, {}
    for (m, y), p in table.items():
        pm[m] = pm.get(m, 0.0) + float(p)
        py[y] = py.get(y, 0.0) + float(p)
    return sum(float(p) * math.log2(float(p) / (pm[m] * py[y])) for (m, y), p in table.items() if p)


def _linear_pmf(A, B):
    F = A.field
    q = F.order
    out = []
    for m in itertools.product(range(q), repeat=A.ncols):
        for l in itertools.product(range(q), repeat=B.ncols):
            y = tuple(F.add(a, b) for a, b in zip(A.apply(m), B.apply(l)))
            out.append((m, y))
    return JointPMF.from_outcomes(out)


# -- LogValue ----------------------------------------------------------------------


def test_logvalue_exact_algebra():
    a = LogValue.log2(Fraction(12, 5))
    assert a == LogValue({2: 2, 3: 1, 5: -1})
    assert a + LogValue.log2(5) - LogValue.log2(3) == LogValue.log2(4)
    assert LogValue.log2(1) == 0 and LogValue() == LogValue.log2(1)
    assert LogValue.log2(9).in_log_q(3) == 2
    assert LogValue.log2(8).in_log_q(4) == Fraction(3, 2)
    assert LogValue.log2(6).in_log_q(2) is None
    assert LogValue.log2(27).bits == pytest.approx(math.log2(27))
    assert LogValue.log_q_units(3, 4).nats == pytest.approx(3 * math.log(4))
    with pytest.raises(ValueError):
        LogValue.log2(0)
    assert len({LogValue.log2(4), LogValue.log2(2).scale(2)}) == 1


# -- empirical MI ---------------------------------------------------------------------


def test_empirical_mi_examples():
    ind = JointPMF({(m, y): Fraction(1, 4) for m in range(2) for y in range(2)})
    assert empirical_mi(ind) == 0
    same = JointPMF({(v, v): Fraction(1, 4) for v in range(4)})
    assert empirical_mi(same) == LogValue.log2(4) and empirical_mi(same).bits == 2
    bsc = JointPMF({(0, 0): Fraction(3, 8), (0, 1): Fraction(1, 8), (1, 0): Fraction(1, 8), (1, 1): Fraction(3, 8)})
    h = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
    assert empirical_mi(bsc).bits == pytest.approx(1 - h, abs=1e-12)
    assert empirical_mi(bsc).bits == pytest.approx(0.18872, abs=1e-5)


def test_pmf_must_sum_to_one():
    with pytest.raises(ValueError):
        JointPMF({(0, 0): Fraction(1, 2)})


@given(st.integers(0, 2**32 - 1))
def test_empirical_mi_matches_float_oracle(seed):
    rng = np.random.default_rng(seed)
    w = rng.integers(0, 5, size=(3, 3))
    if w.sum() == 0:
        return
    total = int(w.sum())
    table = {(i, j): Fraction(int(w[i, j]), total) for i in range(3) for j in range(3) if w[i, j]}
    assert empirical_mi(JointPMF(table)).bits == pytest.approx(_float_mi(table), abs=1e-9)


# -- linear leakage --------------------------------------------------------------------


def test_linear_leakage_examples(F2, rng):
    A = parse_matrix("1 0; 0 1; 1 1", F2)
    assert linear_leakage(A, FqMatrix.zeros(F2, 3, 1)) == 2.0
    assert linear_leakage(parse_matrix("1", F2), parse_matrix("1", F2)) == 0.0
    A, B = FqMatrix.random(F2, 3, 2, rng), FqMatrix.random(F2, 3, 2, rng)
    assert linear_leakage(A, B) == pytest.approx(empirical_mi(_linear_pmf(A, B)).bits, abs=1e-9)


def test_linear_leakage_agrees_with_enumeration_exactly():
    rng = np.random.default_rng(8)
    for trial in range(60):
        F = make_prime_field(2 if trial % 2 else 3)
        r, a, b = (int(v) for v in rng.integers(1, 4, 3))
        A, B = FqMatrix.random(F, r, a, rng), FqMatrix.random(F, r, b, rng)
        mi = empirical_mi(_linear_pmf(A, B))
        units = linear_leakage_rank(A, B)
        assert mi == LogValue.log_q_units(units, F.order)
        assert mi.in_log_q(F.order) == units >= 0


# -- audit ---------------------------------------------------------------------------

ARRANGEMENTS = {
    "read-then-inject": AdversaryPlacement((1,), (2,)),
    "inject-then-read": AdversaryPlacement((2,), (1,)),
    "same-edge": AdversaryPlacement((2,), (2,)),
}


@pytest.mark.parametrize("name", list(ARRANGEMENTS))
@pytest.mark.parametrize("otp", [True, False], ids=["masked", "plain"])
def test_audit_all_strategies_match_passive(name, otp):
    adv = ARRANGEMENTS[name]
    tm = derive_transfer(line(GF2, hops=3), adv)
    code = AuditCode.linear(GF2, parse_matrix("1", GF2), parse_matrix("1" if otp else "0", GF2))
    rep = theorem1_audit(code, tm, adv)
    assert rep.ok and not rep.violations
    assert len(rep.records) >= 2
    assert rep.passive_leakage == (LogValue() if otp else LogValue.log2(2))
    lines = rep.lines()
    assert lines[-1] == "result=pass" and lines[0] == f"strategies={len(rep.records)}"


def test_audit_same_edge_has_four_strategies():
    adv = ARRANGEMENTS["same-edge"]
    rep = theorem1_audit(AuditCode.linear(GF2, parse_matrix("1", GF2), parse_matrix("1", GF2)), derive_transfer(line(GF2, hops=3), adv), adv)
    assert len(rep.records) == 4


def test_audit_without_feedback():
    adv = AdversaryPlacement((3,), (4,))
    net = two_paths()
    tm = derive_transfer(net, adv)
    assert tm.H_E.is_zero()
    code = AuditCode.linear(GF2, parse_matrix("1; 0", GF2), parse_matrix("1; 1", GF2))
    rep = theorem1_audit(code, tm, adv)
    assert rep.ok and rep.passive_leakage == LogValue()


def test_audit_two_transmissions_and_edge_order():
    adv = AdversaryPlacement((1,), (2,))
    tm = derive_transfer(line(GF2, hops=3), adv)
    code = AuditCode.linear(GF2, parse_matrix("1", GF2), parse_matrix("1", GF2), n=2)
    for order in ("transmission", "edge"):
        rep = theorem1_audit(code, tm, adv, n=2, order=order)
        assert rep.ok and rep.order == order


def test_audit_detects_a_non_causal_view():
    # a view where Z is NOT a function of Y_E must show as a violation
    from securenc.secrecy import AuditReport, AuditRecord

    rec = AuditRecord("x", LogValue.log2(2), Fraction(1), False)
    rep = AuditReport(LogValue(), [rec], 2, "transmission")
    assert not rep.ok and rep.violations == [rec] and rep.lines()[-1] == "result=fail"


def test_audit_cap():
    adv = AdversaryPlacement((1,), (2,))
    tm = derive_transfer(line(GF2, hops=3), adv)
    code = AuditCode.linear(GF2, parse_matrix("1", GF2), parse_matrix("1", GF2), n=3)
    with pytest.raises(EnumerationCapExceeded):
        theorem1_audit(code, tm, adv, n=3, cap=100)


# -- secure-code leakage -----------------------------------------------------------------


def test_kron_identity(F2):
    K = parse_matrix("1 1", F2)
    assert kron_identity(K, 2).to_ints() == [[1, 0, 1, 0], [0, 1, 0, 1]]


def test_secure_code_leakage_examples(F2):
    inner = SystematicCode(F2, 2, 4)
    spec = HashSpec(8, 4)
    code = SecureCode(inner, spec, ToeplitzSeed.zero(F2, spec))
    assert leakage_of_secure_code(code, FqMatrix.zeros(F2, 1, 2)) == 0.0
    # Eve sees only the scramble half
    assert leakage_of_secure_code(code, parse_matrix("0 1", F2)) == 0.0
    full = HashSpec(8, 8)
    code = SecureCode(inner, full, ToeplitzSeed.zero(F2, full))
    assert leakage_of_secure_code(code, parse_matrix("1 0", F2)) == 4.0


def test_secure_code_maps_match_encoder(F3, rng):
    inner = SystematicCode(F3, 2, 3)
    spec = HashSpec(6, 2)
    code = SecureCode(inner, spec, ToeplitzSeed.random(F3, spec, rng))
    K_E = parse_matrix("1 2", F3)
    A, B = secure_code_maps(code, K_E)
    from securenc.privacy import secure_encode

    for _ in range(10):
        Mbar = [F3.random(rng) for _ in range(2)]
        L = [F3.random(rng) for _ in range(4)]
        X, _ = secure_encode(Mbar, L, code)
        y = (K_E @ X).flat()
        assert y == [F3.add(a, b) for a, b in zip(A.apply(Mbar), B.apply(L))]


def test_secure_code_rejects_wrong_width(F2):
    inner = SystematicCode(F2, 2, 2)
    spec = HashSpec(4, 2)
    with pytest.raises(ValueError):
        leakage_of_secure_code(SecureCode(inner, spec, ToeplitzSeed.zero(F2, spec)), parse_matrix("1 0 0", F2))


@given(st.integers(0, 2**32 - 1))
def test_hashing_never_increases_leakage(seed):
    rng = np.random.default_rng(seed)
    F = make_prime_field(2)
    inner = SystematicCode(F, 3, 3)
    K_E = FqMatrix.random(F, 1, 3, rng)
    spec = HashSpec(9, 4)
    hashed = SecureCode(inner, spec, ToeplitzSeed.random(F, spec, rng))
    full = HashSpec(9, 9)
    plain = SecureCode(inner, full, ToeplitzSeed.zero(F, full))
    lh = leakage_of_secure_code(hashed, K_E)
    assert lh <= leakage_of_secure_code(plain, K_E)
    assert float(lh).is_integer()
