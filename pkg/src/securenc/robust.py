"""Randomized robust code against rank-limited error injection.

Alice mixes the message with a random invertible pre-coder, and hands Bob a
small secret side channel: ``m = m0 + 1`` random evaluation points and the
message's image under their Vandermonde matrix.  Bob picks independent rows
of what he received and solves one linear system for the recovery matrix.
It works over a large extension field ``F_{q'}`` so that random collisions
(the failure events) are unlikely.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .field import FieldSpec, make_extension_field
from .linalg import FqMatrix, NoSolution, independent_rows, random_invertible, rank, rref, solve_left

__all__ = [
    "DecodeFailure",
    "RobustCodeParams",
    "RobustCodeInstance",
    "SideInfo",
    "Conditions",
    "vandermonde",
    "keygen",
    "encode",
    "decode",
    "reduce_HZ",
    "check_conditions",
    "lift_block",
    "collision_oracle",
    "collision_bound",
    "failure_bound",
]


class DecodeFailure(Exception):
    """Bob's recovery system ``U3 (Ybar U1) = U2`` has no solution."""


@dataclass(frozen=True)
class RobustCodeParams:
    field: FieldSpec
    n: int
    m0: int
    m1: int
    m3: int
    m4: int

    def __post_init__(self):
        if not self.m0 > self.m1 >= 0:
            raise ValueError(f"need m0 > m1 >= 0 (got m0={self.m0}, m1={self.m1})")
        if self.m3 < self.m0 - self.m1:
            raise ValueError("m3 must be at least m0 - m1")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def m(self) -> int:
        return self.m0 + 1

    @property
    def message_rows(self) -> int:
        return self.m0 - self.m1

    @property
    def side_info_size(self) -> int:
        """Field elements sent over the secret side channel."""
        return self.m + self.message_rows * self.m


@dataclass(frozen=True)
class RobustCodeInstance:
    U0: FqMatrix
    V: tuple
    U1: FqMatrix


@dataclass(frozen=True)
class SideInfo:
    V: tuple
    U2: FqMatrix

    _MAGIC = b"SNCSIDE"
    _VERSION = 1

    def to_bytes(self) -> bytes:
        """Versioned header, then a length-prefixed element array (V, then U2 row-major)."""
        F = self.U2.field
        order = F.order.to_bytes((F.order.bit_length() + 7) // 8, "big")
        width = max(1, ((F.order - 1).bit_length() + 7) // 8)
        elems = list(self.V) + self.U2.flat()
        out = [
            self._MAGIC,
            bytes([self._VERSION, len(order)]),
            order,
            struct.pack(">III", len(self.V), self.U2.nrows, len(elems)),
        ]
        out.extend(v.to_bytes(width, "big") for v in elems)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes, field: FieldSpec) -> "SideInfo":
        if not data.startswith(cls._MAGIC):
            raise ValueError("not a side-info blob")
        pos = len(cls._MAGIC)
        version, olen = data[pos], data[pos + 1]
        if version != cls._VERSION:
            raise ValueError(f"unsupported side-info version {version}")
        pos += 2
        order = int.from_bytes(data[pos : pos + olen], "big")
        if order != field.order:
            raise ValueError(f"side info is for a field of order {order}, not {field.order}")
        pos += olen
        m, rows, count = struct.unpack(">III", data[pos : pos + 12])
        pos += 12
        width = max(1, ((order - 1).bit_length() + 7) // 8)
        if count != m + rows * m or len(data) != pos + count * width:
            raise ValueError("side-info length mismatch")
        elems = [int.from_bytes(data[pos + k * width : pos + (k + 1) * width], "big") for k in range(count)]
        V = tuple(elems[:m])
        U2 = FqMatrix(field, [elems[m + r * m : m + (r + 1) * m] for r in range(rows)], m)
        return cls(V, U2)


@dataclass(frozen=True)
class Conditions:
    F1: bool
    F1p: bool
    F1pp: bool
    F2: bool

    @property
    def all(self) -> bool:
        return self.F1 and self.F1p and self.F1pp and self.F2


def vandermonde(field: FieldSpec, V: Sequence[int], n: int) -> FqMatrix:
    """``n x m`` matrix with entry ``(i, j) = V_j ** i`` for ``i = 1..n``."""
    return FqMatrix(field, [[field.pow(v, i) for v in V] for i in range(1, n + 1)], len(V))


def keygen(params: RobustCodeParams, rng) -> RobustCodeInstance:
    F = params.field
    U0 = random_invertible(F, params.m3, rng)
    V = tuple(F.random(rng) for _ in range(params.m))
    return RobustCodeInstance(U0, V, vandermonde(F, V, params.n))


def _embed(params: RobustCodeParams, M: FqMatrix) -> FqMatrix:
    pad = FqMatrix.zeros(params.field, params.m3 - params.message_rows, params.n)
    return FqMatrix.vstack(M, pad)


def encode(M: FqMatrix, inst: RobustCodeInstance, params: RobustCodeParams) -> tuple[FqMatrix, SideInfo]:
    """Channel input ``U0 [M; 0]`` and the side information ``(V, M U1)``."""
    if M.shape != (params.message_rows, params.n):
        raise ValueError(f"message must be {params.message_rows}x{params.n}, got {M.shape}")
    X = inst.U0 @ _embed(params, M)
    return X, SideInfo(inst.V, M @ inst.U1)


def decode(Y_B: FqMatrix, side: SideInfo, params: RobustCodeParams) -> FqMatrix:
    if Y_B.shape != (params.m4, params.n):
        raise ValueError(f"received matrix must be {params.m4}x{params.n}, got {Y_B.shape}")
    _, Ybar = independent_rows(Y_B)
    U1 = vandermonde(params.field, side.V, params.n)
    try:
        U3 = solve_left(Ybar @ U1, side.U2)
    except NoSolution as exc:
        raise DecodeFailure(str(exc)) from None
    return U3 @ Ybar


def reduce_HZ(H_B: FqMatrix, Z: FqMatrix) -> tuple[FqMatrix, FqMatrix]:
    """Rank factorization: ``H_hat`` = pivot columns of ``H_B``, ``Z_hat = C Z``.

    ``H_B = H_hat C`` where ``C`` is the nonzero part of ``rref(H_B)``, so
    ``H_hat Z_hat == H_B Z`` exactly.
    """
    R, piv = rref(H_B)
    H_hat = H_B.select_cols(piv)
    C = R.select_rows(range(len(piv)))
    return H_hat, C @ Z


def _trivially_meet(A: FqMatrix, B: FqMatrix) -> bool:
    return rank(FqMatrix.hstack(A, B)) == rank(A) + rank(B)


def check_conditions(
    inst: RobustCodeInstance,
    params: RobustCodeParams,
    K_B: FqMatrix,
    H_hat: FqMatrix,
    M: FqMatrix,
    Z_hat: FqMatrix,
) -> Conditions:
    """Evaluate the sufficient conditions for exact decoding.

    ``F1p``: images of ``K_B U0 P`` and ``H_hat`` meet only in zero.
    ``F1pp``: ``K_B U0 P`` is injective on the column space of ``M``.
    ``F1``: both of the above for the rows Bob actually selects.
    ``F2``: ``U1`` keeps the rank of ``[M; Z_hat]``.
    """
    A1 = (K_B @ inst.U0).select_cols(range(params.message_rows))
    f1p = _trivially_meet(A1, H_hat)
    f1pp = rank(A1 @ M) == rank(M)
    Y = A1 @ M + H_hat @ Z_hat
    idx, _ = independent_rows(Y)
    Kbar, Hbar = A1.select_rows(idx), H_hat.select_rows(idx)
    f1 = _trivially_meet(Kbar, Hbar) and rank(Kbar @ M) == rank(M)
    S = FqMatrix.vstack(M, Z_hat)
    f2 = rank(S @ inst.U1) == rank(S)
    return Conditions(f1, f1p, f1pp, f2)


def lift_block(base: FieldSpec, n: int, m0: int) -> tuple[int, int, FieldSpec]:
    """``t = ceil((m0+1) log n / log q)``, ``l = t n`` and ``GF(q^t)``.

    Computed in integers as the least ``t`` with ``q^t >= n^(m0+1)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    target = n ** (m0 + 1)
    t = 1
    while base.order**t < target:
        t += 1
    return t, t * n, make_extension_field(base, t)


def collision_bound(n: int, q: int, m: int) -> Fraction:
    return Fraction(n, q) ** m


def collision_oracle(x: Sequence[int], x2: Sequence[int], n: int, m: int, field: FieldSpec, cap: int = 2**20) -> Fraction:
    """Exact ``Pr{x U1 = x' U1}`` over uniform ``V`` by enumeration."""
    if len(x) != n or len(x2) != n:
        raise ValueError("vectors must have length n")
    if list(x) == list(x2):
        raise ValueError("x and x' must differ")
    q = field.order
    if q**m > cap:
        raise ValueError(f"q^m = {q**m} exceeds the enumeration cap")
    F = field
    powers = [[F.pow(v, i) for i in range(1, n + 1)] for v in range(q)]

    def image(vec, v):
        acc = 0
        for a, p in zip(vec, powers[v]):
            acc = F.add(acc, F.mul(a, p))
        return acc

    hits = 0
    for V in _product(range(q), m):
        if all(image(x, v) == image(x2, v) for v in V):
            hits += 1
    p = Fraction(hits, q**m)
    if n <= q and p > collision_bound(n, q, m):
        raise AssertionError(f"collision probability {p} exceeds (n/q)^m")
    return p


def _product(values, m):
    import itertools

    return itertools.product(values, repeat=m)


def failure_bound(n: int, m0: int, m1: int, q: int) -> float:
    """Union bound on decoding failure over fresh keygen randomness.

    Sum of the rank-loss bound ``n^(m0+1)/q`` and the two pre-coder
    collision terms ``1 - prod(1 - q^k)``.
    """
    f2 = n ** (m0 + 1) / q
    f1p = 1 - math.prod(1 - q**k for k in range(m1 - m0, 0))
    f1pp = 1 - math.prod(1 - q ** (-m0 + k) for k in range(m0 - m1))
    return f2 + f1p + f1pp
