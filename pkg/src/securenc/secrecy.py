"""Exact leakage oracles.

Mutual information is kept exact as a rational combination of ``log2`` of
primes (:class:`LogValue`).  Logarithms of distinct primes are linearly
independent over the rationals, so two such values are equal as real
numbers exactly when their coefficient maps agree.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

import sympy

from .attack import DEFAULT_ENUMERATION_CAP, TableStrategy, enumerate_strategies, passive, simulate, strategy_count
from .field import FieldSpec
from .linalg import FqMatrix, rank
from .network import AdversaryPlacement, TransferMatrices

__all__ = [
    "LogValue",
    "JointPMF",
    "linear_leakage",
    "linear_leakage_rank",
    "empirical_mi",
    "AuditCode",
    "AuditRecord",
    "AuditReport",
    "theorem1_audit",
    "secure_code_maps",
    "leakage_of_secure_code",
    "kron_identity",
]


@functools.lru_cache(maxsize=4096)
def _factor(n: int) -> tuple:
    return tuple(sorted(sympy.factorint(n).items()))


class LogValue:
    """``sum_p c_p log2(p)`` with rational ``c_p``."""

    __slots__ = ("terms",)

    def __init__(self, terms: "dict | None" = None):
        self.terms = {p: Fraction(c) for p, c in (terms or {}).items() if c != 0}

    @classmethod
    def log2(cls, r) -> "LogValue":
        r = Fraction(r)
        if r <= 0:
            raise ValueError("log of a non-positive number")
        out: dict = defaultdict(Fraction)
        for p, e in _factor(r.numerator):
            out[p] += e
        for p, e in _factor(r.denominator):
            out[p] -= e
        return cls(out)

    @classmethod
    def log_q_units(cls, units, q: int) -> "LogValue":
        """``units * log2(q)``."""
        return cls.log2(q).scale(units)

    def __add__(self, other: "LogValue") -> "LogValue":
        out = defaultdict(Fraction, self.terms)
        for p, c in other.terms.items():
            out[p] += c
        return LogValue(out)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + other.scale(-1)

    def scale(self, c) -> "LogValue":
        c = Fraction(c)
        return LogValue({p: v * c for p, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return isinstance(other, LogValue) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    @property
    def bits(self) -> float:
        return float(sum(float(c) * math.log2(p) for p, c in self.terms.items()))

    @property
    def nats(self) -> float:
        return self.bits * math.log(2)

    def in_log_q(self, q: int) -> "Fraction | None":
        """Return ``r`` with ``self == r log2 q``, or None if not of that form."""
        if not self.terms:
            return Fraction(0)
        base = LogValue.log2(q).terms
        ratios = {self.terms.get(p, Fraction(0)) / c for p, c in base.items()}
        if len(ratios) != 1 or set(self.terms) - set(base):
            return None
        return ratios.pop()

    def __repr__(self):
        if not self.terms:
            return "LogValue(0)"
        inner = " + ".join(f"{c}*log2({p})" for p, c in sorted(self.terms.items()))
        return f"LogValue({inner})"


@dataclass
class JointPMF:
    """Exact joint distribution of ``(message, observation)``."""

    table: dict = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.table.values(), Fraction(0))
        if self.table and total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    @classmethod
    def from_outcomes(cls, outcomes: Iterable[tuple]) -> "JointPMF":
        """Equally likely ``(m, y)`` outcomes (repeats accumulate)."""
        counts: dict = defaultdict(int)
        n = 0
        for m, y in outcomes:
            counts[(m, y)] += 1
            n += 1
        return cls({k: Fraction(c, n) for k, c in counts.items()})

    def marginals(self) -> tuple[dict, dict]:
        pm: dict = defaultdict(Fraction)
        py: dict = defaultdict(Fraction)
        for (m, y), p in self.table.items():
            pm[m] += p
            py[y] += p
        return pm, py


def empirical_mi(pmf: JointPMF) -> LogValue:
    """``I(M; Y)`` exactly.  Use ``.bits`` for a float."""
    pm, py = pmf.marginals()
    out = LogValue()
    for (m, y), p in pmf.table.items():
        if p:
            out = out + LogValue.log2(p / (pm[m] * py[y])).scale(p)
    return out


def linear_leakage_rank(A: FqMatrix, B: FqMatrix) -> int:
    """``rank[A | B] - rank B``: leakage of ``Y = A M + B L`` in units of ``log q``."""
    return rank(FqMatrix.hstack(A, B)) - rank(B)


def linear_leakage(A: FqMatrix, B: FqMatrix) -> float:
    """Leakage in bits of ``Y = A M + B L`` for independent uniform ``M``, ``L``."""
    return linear_leakage_rank(A, B) * math.log2(A.field.order)


# ---------------------------------------------------------------------------
# active-vs-passive audit


@dataclass
class AuditCode:
    """Uniform message and scramble spaces plus an encoder ``(m, l) -> X``."""

    messages: Sequence[Hashable]
    scrambles: Sequence[Hashable]
    encode: Callable[[Hashable, Hashable], FqMatrix]
    name: str = "code"

    @classmethod
    def linear(cls, field: FieldSpec, Gm: FqMatrix, Gl: FqMatrix, n: int = 1, name: str = "linear") -> "AuditCode":
        """``X = Gm m + Gl l`` column by column, with ``m``, ``l`` ranging over all vectors."""
        q = field.order
        mdim, ldim = Gm.ncols, Gl.ncols
        msgs = list(itertools.product(range(q), repeat=mdim * n))
        scr = list(itertools.product(range(q), repeat=ldim * n))

        def enc(m, l):
            cols = []
            for u in range(n):
                a = Gm.apply(m[u * mdim : (u + 1) * mdim])
                b = Gl.apply(l[u * ldim : (u + 1) * ldim])
                cols.append([field.add(x, y) for x, y in zip(a, b)])
            return FqMatrix.from_columns(field, cols, Gm.nrows)

        return cls(msgs, scr, enc, name)


@dataclass(frozen=True)
class AuditRecord:
    strategy_id: str
    leakage: LogValue
    units: "Fraction | None"
    passed: bool

    def line(self) -> str:
        u = "na" if self.units is None else f"{self.units.numerator}/{self.units.denominator}"
        return (
            f"strategy={self.strategy_id} leakage_bits={self.leakage.bits:.12f} "
            f"leakage_logq={u} pass={'yes' if self.passed else 'no'}"
        )


@dataclass
class AuditReport:
    passive_leakage: LogValue
    records: list
    q: int
    order: str

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def violations(self) -> list:
        return [r for r in self.records if not r.passed]

    def lines(self) -> list[str]:
        u = self.passive_leakage.in_log_q(self.q)
        head = [
            f"strategies={len(self.records)}",
            f"order={self.order}",
            f"passive_leakage_bits={self.passive_leakage.bits:.12f}",
            f"passive_leakage_logq={'na' if u is None else f'{u.numerator}/{u.denominator}'}",
        ]
        return head + [r.line() for r in self.records] + [f"result={'pass' if self.ok else 'fail'}"]


def _strategy_id(idx: int, s) -> str:
    if isinstance(s, TableStrategy):
        h = hashlib.sha256(repr(s.key()).encode()).hexdigest()[:8]
        return f"{idx}:{h}"
    return f"{idx}:{type(s).__name__}"


def _eve_pmf(code: AuditCode, tm: TransferMatrices, adv: AdversaryPlacement, strategy, order: str, with_z: bool) -> JointPMF:
    def outcomes():
        for m in code.messages:
            for l in code.scrambles:
                out = simulate(tm, adv, code.encode(m, l), strategy, order)
                view = (out.Y_E.flat(), out.Z.flat()) if with_z else out.Y_E.flat()
                yield m, repr(view)

    return JointPMF.from_outcomes(outcomes())


def theorem1_audit(
    code: AuditCode,
    tm: TransferMatrices,
    adv: AdversaryPlacement,
    n: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
    order: str = "transmission",
) -> AuditReport:
    """Compare every deterministic strategy's leakage with the passive one.

    For each strategy the exact ``I(M; Y_E, Z)`` is computed by enumerating
    all uniform ``(M, L)``; a record passes when it equals the passive
    ``I(M; Y_E)`` exactly.  All slots are enumerated, including injections
    that Eve never gets to see the effect of.
    """
    q = tm.field.order
    count = strategy_count(adv, n, q, order, include_uncounted=True)
    states = len(code.messages) * len(code.scrambles)
    if count * states > cap:
        from .attack import EnumerationCapExceeded

        raise EnumerationCapExceeded(count * states, cap)
    base = empirical_mi(_eve_pmf(code, tm, adv, passive(), order, with_z=False))
    records = []
    for idx, s in enumerate(enumerate_strategies(adv, n, tm.field, order, include_uncounted=True, cap=cap)):
        leak = empirical_mi(_eve_pmf(code, tm, adv, s, order, with_z=True))
        records.append(AuditRecord(_strategy_id(idx, s), leak, leak.in_log_q(q), leak == base))
    return AuditReport(base, records, q, order)


# ---------------------------------------------------------------------------
# leakage of the composed secure code


def kron_identity(K: FqMatrix, l: int) -> FqMatrix:
    """``K (x) I_l`` acting on row-major ``vec`` of an ``ncols(K) x l`` matrix."""
    F = K.field
    rows = []
    for j in range(K.nrows):
        for u in range(l):
            r = [0] * (K.ncols * l)
            for i, c in enumerate(K.row(j)):
                r[i * l + u] = c
            rows.append(r)
    return FqMatrix(F, rows, K.ncols * l)


def secure_code_maps(code, K_E: FqMatrix) -> tuple[FqMatrix, FqMatrix]:
    """Eve's view as ``A Mbar + B L`` for a :class:`~securenc.privacy.SecureCode`."""
    from .privacy import toeplitz_matrix

    inner = code.inner
    if not getattr(inner, "linear", False):
        raise TypeError("leakage oracle needs a linear inner encoder")
    F = inner.field
    if K_E.field != F:
        raise ValueError("K_E must be over the inner code's field")
    if K_E.ncols * inner.l != inner.generator().nrows:
        raise ValueError("K_E width does not match the inner code's input dimension")
    spec = code.spec
    T = toeplitz_matrix(code.seed, spec) if spec.d else FqMatrix.zeros(F, spec.kbar, 0)
    A_M = FqMatrix.vstack(FqMatrix.identity(F, spec.kbar), FqMatrix.zeros(F, spec.d, spec.kbar))
    A_L = FqMatrix.vstack(-T, FqMatrix.identity(F, spec.d))
    E = kron_identity(K_E, inner.l) @ inner.generator()
    return E @ A_M, E @ A_L


def leakage_of_secure_code(code, K_E: FqMatrix) -> float:
    """``I(Mbar; Y_E)`` in bits for the code's fixed seed."""
    A, B = secure_code_maps(code, K_E)
    return linear_leakage(A, B)
