"""Privacy amplification with modified Toeplitz hashing.

The hash family is ``f_S(x) = x_head + T(S) x_tail`` where ``x`` is split
into its first ``kbar`` and last ``d = k - kbar`` coordinates and ``T(S)``
is the ``kbar x d`` Toeplitz matrix built from a seed of ``k - 1`` symbols.
The identity block makes every member surjective, and the inverse-side map
``(M, L) -> (M - T(S) L, L)`` gives an encoder with ``f_S(encode) = M``.

Inner codes expose a fixed linear generator so that leakage can be computed
from ranks alone (see :mod:`securenc.secrecy`).
"""

from __future__ import annotations

import itertools
import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .field import FieldSpec, make_prime_field
from .linalg import FqMatrix, solve_left
from .robust import RobustCodeInstance, RobustCodeParams, SideInfo, decode as robust_decode, encode as robust_encode

__all__ = [
    "HashSpec",
    "ToeplitzSeed",
    "toeplitz_matrix",
    "hash_matrix",
    "hash_apply",
    "scramble",
    "Universal2Report",
    "universal2_check",
    "SystematicCode",
    "RobustInnerCode",
    "SecureCode",
    "secure_encode",
    "secure_decode",
    "leakage_bound",
    "leakage_bound_whp",
    "Rates",
    "rates",
    "Tag",
    "verify_tag",
    "check_tag",
    "significance_level",
    "tag_seed_length",
]


@dataclass(frozen=True)
class HashSpec:
    """Input length ``k``, output length ``kbar``; redundancy ``d = k - kbar``."""

    k: int
    kbar: int

    def __post_init__(self):
        if not 0 < self.kbar <= self.k:
            raise ValueError(f"need 0 < kbar <= k (got k={self.k}, kbar={self.kbar})")

    @property
    def d(self) -> int:
        return self.k - self.kbar

    @property
    def seed_length(self) -> int:
        return self.k - 1

    @classmethod
    def for_channel(cls, k: int, l: int, m2: int) -> "HashSpec":
        """Output length ``k - m2 l - ceil(sqrt l)``: what survives Eve's view."""
        kbar = k - m2 * l - math.isqrt(l - 1) - 1 if l > 0 else k
        if kbar <= 0:
            raise ValueError(f"k={k} too short to hash away m2*l + ceil(sqrt(l)) = {k - kbar} symbols")
        return cls(k, kbar)


@dataclass(frozen=True)
class ToeplitzSeed:
    field: FieldSpec
    S: tuple

    @classmethod
    def random(cls, field: FieldSpec, spec: HashSpec, rng) -> "ToeplitzSeed":
        return cls(field, tuple(field.random(rng) for _ in range(spec.seed_length)))

    @classmethod
    def zero(cls, field: FieldSpec, spec: HashSpec) -> "ToeplitzSeed":
        return cls(field, (0,) * spec.seed_length)

    def check(self, spec: HashSpec):
        if len(self.S) != spec.seed_length:
            raise ValueError(f"seed must have {spec.seed_length} symbols, got {len(self.S)}")


def toeplitz_matrix(seed: ToeplitzSeed, spec: HashSpec) -> FqMatrix:
    """``T[a][b] = S[a - b + d - 1]`` (0-based), constant along diagonals."""
    seed.check(spec)
    d, S = spec.d, seed.S
    return FqMatrix(seed.field, [[S[a - b + d - 1] for b in range(d)] for a in range(spec.kbar)], d)


def hash_matrix(seed: ToeplitzSeed, spec: HashSpec) -> FqMatrix:
    """The full ``kbar x k`` matrix ``(I, T(S))``."""
    return FqMatrix.hstack(FqMatrix.identity(seed.field, spec.kbar), toeplitz_matrix(seed, spec))


def hash_apply(seed: ToeplitzSeed, spec: HashSpec, x: Sequence[int]) -> list[int]:
    if len(x) != spec.k:
        raise ValueError(f"input must have length {spec.k}, got {len(x)}")
    F = seed.field
    head, tail = list(x[: spec.kbar]), list(x[spec.kbar :])
    if spec.d == 0:
        return [F.coerce(v) for v in head]
    t = toeplitz_matrix(seed, spec).apply(tail)
    return [F.add(F.coerce(a), b) for a, b in zip(head, t)]


def scramble(Mbar: Sequence[int], L: Sequence[int], seed: ToeplitzSeed, spec: HashSpec) -> list[int]:
    """``(Mbar - T(S) L, L)``, the right inverse of :func:`hash_apply` for fixed ``L``."""
    if len(Mbar) != spec.kbar or len(L) != spec.d:
        raise ValueError(f"need |Mbar| = {spec.kbar} and |L| = {spec.d}")
    F = seed.field
    t = toeplitz_matrix(seed, spec).apply(list(L)) if spec.d else [0] * spec.kbar
    return [F.sub(F.coerce(m), v) for m, v in zip(Mbar, t)] + [F.coerce(v) for v in L]


# ---------------------------------------------------------------------------
# universal_2 check


@dataclass(frozen=True)
class Universal2Report:
    spec: HashSpec
    q: int
    max_collision: Fraction
    bound: Fraction
    worst: tuple

    @property
    def ok(self) -> bool:
        return self.max_collision <= self.bound


def universal2_check(spec: HashSpec, q: int = 2, cap: int = 2**20) -> Universal2Report:
    """Exhaustive worst-case collision probability over seeds.

    By linearity ``f_S(x) = f_S(x')`` iff ``f_S(z) = 0`` with ``z = x - x'``.
    A nonzero ``z`` with zero tail never collides, so the worst case is
    ``max_{tail != 0, y} Pr_S[T(S) tail = y]``: we tabulate the distribution
    of ``T(S) tail`` over all seeds for every nonzero tail.
    """
    make_prime_field(q)  # rejects non-prime q: the vectorised path is mod-q integer arithmetic
    seeds = q ** spec.seed_length
    if seeds > cap or q**spec.k > cap:
        raise ValueError(f"enumeration of q^k = {q**spec.k} inputs / {seeds} seeds exceeds cap {cap}")
    bound = Fraction(1, q**spec.kbar)
    if spec.d == 0:
        return Universal2Report(spec, q, Fraction(0), bound, ())
    d, kb = spec.d, spec.kbar
    S = np.array(list(itertools.product(range(q), repeat=spec.seed_length)), dtype=np.int64).reshape(seeds, -1)
    idx = np.arange(kb)[:, None] - np.arange(d)[None, :] + d - 1
    T = S[:, idx]  # seeds x kbar x d
    tails = np.array(list(itertools.product(range(q), repeat=d))[1:], dtype=np.int64)
    out = np.einsum("sab,tb->tsa", T, tails) % q  # tails x seeds x kbar
    weights = q ** np.arange(kb)[::-1]
    codes = out @ weights  # tails x seeds
    best, worst = 0, ()
    for ti in range(codes.shape[0]):
        counts = np.bincount(codes[ti], minlength=q**kb)
        c = int(counts.max())
        if c > best:
            best = c
            y = int(counts.argmax())
            worst = (tuple(int(v) for v in tails[ti]), y)
    return Universal2Report(spec, q, Fraction(best, seeds), bound, worst)


# ---------------------------------------------------------------------------
# inner codes


class SystematicCode:
    """Send the message as-is: ``k = m3 * l`` symbols laid out row-major in ``X``.

    Bob inverts ``K_B`` when it is given and has full column rank.
    """

    linear = True

    def __init__(self, field: FieldSpec, m3: int, l: int, K_B: "FqMatrix | None" = None):
        self.field = field
        self.m3 = m3
        self.l = l
        self.K_B = K_B

    @property
    def k(self) -> int:
        return self.m3 * self.l

    def encode(self, w: Sequence[int]):
        if len(w) != self.k:
            raise ValueError(f"message must have {self.k} symbols")
        rows = [list(w[r * self.l : (r + 1) * self.l]) for r in range(self.m3)]
        return FqMatrix(self.field, rows, self.l), None

    def decode(self, Y: FqMatrix, aux=None) -> list[int]:
        if self.K_B is None:
            X = Y
        else:
            # K_B X = Y  <=>  X^T K_B^T = Y^T
            X = solve_left(self.K_B.T, Y.T).T
        return X.flat()

    def generator(self) -> FqMatrix:
        """Matrix ``G`` with ``vec(X) = G w`` (row-major ``vec``)."""
        return FqMatrix.identity(self.field, self.k)


class RobustInnerCode:
    """The randomized robust code over ``GF(q^t)``, seen over ``GF(q)``.

    Each extension symbol is expanded into its ``t`` base coordinates and
    sent over ``t`` consecutive uses, so ``n`` extension-field uses become
    ``l = t n`` uses of the base network.  For a fixed key the encoder is
    linear over the base field.
    """

    linear = True

    def __init__(self, params: RobustCodeParams, base: FieldSpec, inst: RobustCodeInstance):
        if not params.field.extends(base) and params.field != base:
            raise ValueError("code field must be an extension of the base field")
        self.params = params
        self.base = base
        self.inst = inst
        self.t = 1 if params.field == base else params.field.degree

    @property
    def field(self) -> FieldSpec:
        return self.base

    @property
    def l(self) -> int:
        return self.t * self.params.n

    @property
    def k(self) -> int:
        return self.params.message_rows * self.params.n * self.t

    def _pack(self, w: Sequence[int]) -> FqMatrix:
        P, t, n = self.params, self.t, self.params.n
        E = P.field
        rows = []
        for r in range(P.message_rows):
            rows.append([E.from_coeffs(w[(r * n + u) * t : (r * n + u + 1) * t]) if t > 1 else w[r * n + u] for u in range(n)])
        return FqMatrix(E, rows, n)

    def _unpack(self, M: FqMatrix) -> list[int]:
        E = M.field
        out: list[int] = []
        for row in M.to_ints():
            for v in row:
                out.extend(E.coeffs(v) if self.t > 1 else [v])
        return out

    def expand(self, A: FqMatrix) -> FqMatrix:
        """Extension-field matrix ``r x n`` to base-field matrix ``r x (t n)``."""
        if self.t == 1:
            return A
        return FqMatrix(self.base, [[c for v in row for c in A.field.coeffs(v)] for row in A.to_ints()], self.l)

    def contract(self, A: FqMatrix) -> FqMatrix:
        if self.t == 1:
            return A
        E, t = self.params.field, self.t
        rows = [[E.from_coeffs(row[u * t : (u + 1) * t]) for u in range(self.params.n)] for row in A.to_ints()]
        return FqMatrix(E, rows, self.params.n)

    def encode(self, w: Sequence[int]):
        if len(w) != self.k:
            raise ValueError(f"message must have {self.k} symbols")
        X, side = robust_encode(self._pack(w), self.inst, self.params)
        return self.expand(X), side

    def decode(self, Y: FqMatrix, aux: SideInfo) -> list[int]:
        return self._unpack(robust_decode(self.contract(Y), aux, self.params))

    def generator(self) -> FqMatrix:
        cols = []
        for i in range(self.k):
            e = [0] * self.k
            e[i] = 1
            cols.append(self.encode(e)[0].flat())
        return FqMatrix.from_columns(self.base, cols, self.params.m3 * self.l)


@dataclass(frozen=True)
class SecureCode:
    inner: object
    spec: HashSpec
    seed: ToeplitzSeed

    def __post_init__(self):
        if self.spec.k != self.inner.k:
            raise ValueError(f"hash input length {self.spec.k} != inner message length {self.inner.k}")
        self.seed.check(self.spec)


def secure_encode(Mbar: Sequence[int], L: Sequence[int], code: SecureCode):
    """Inner encoding of ``(Mbar - T(S) L, L)``; returns ``(X, aux)``."""
    return code.inner.encode(scramble(Mbar, L, code.seed, code.spec))


def secure_decode(Y: FqMatrix, code: SecureCode, aux=None) -> list[int]:
    return hash_apply(code.seed, code.spec, code.inner.decode(Y, aux))


# ---------------------------------------------------------------------------
# bounds and rates


def leakage_bound(s: float, kbar: int, k: int, l: int, m2: int, q: int) -> float:
    """Exponential bound on Eve's information, in nats.

    ``min(q^{s(kbar - k + l m2)}/s, q^{-s ceil(sqrt l)}/s)``; the two agree
    when ``kbar`` is the channel-matched output length.
    """
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    root = math.isqrt(l - 1) + 1 if l > 0 else 0
    if kbar > k - l * m2:
        raise ValueError("kbar leaves fewer than m2*l symbols hashed away")
    a = q ** (s * (kbar - k + l * m2)) / s
    b = q ** (-s * root) / s
    return min(a, b)


def leakage_bound_whp(l: int, m6: int, m3: int, q: int) -> float:
    """Leakage bound ``q^{-ceil(sqrt l) + m6 m3 + 1}`` for a typical seed."""
    root = math.isqrt(l - 1) + 1 if l > 0 else 0
    return float(q) ** (-root + m6 * m3 + 1)


@dataclass(frozen=True)
class Rates:
    robust_secure: int
    secrecy_only: int
    robust_feasible: bool
    secrecy_feasible: bool


def rates(m0: int, m1: int, m2: int) -> Rates:
    """Asymptotic rates per network use; an infeasible rate is reported as 0."""
    rf = m1 + m2 < m0
    sf = m2 < m0
    return Rates(m0 - m1 - m2 if rf else 0, m0 - m2 if sf else 0, rf, sf)


# ---------------------------------------------------------------------------
# verification tags over GF(2)


def significance_level(b: int) -> float:
    return 1.0 - 2.0**-b


def _tag_spec(nbits: int, b: int) -> HashSpec:
    return HashSpec(max(nbits, b + 1), b)


@dataclass(frozen=True)
class Tag:
    b: int
    seed: tuple
    bits: tuple

    def to_bytes(self) -> bytes:
        """``b`` (1 byte), seed length in bits (4 bytes, big-endian), seed, tag bits."""
        seed = np.packbits(np.array(self.seed, dtype=np.uint8)).tobytes() if self.seed else b""
        tag = np.packbits(np.array(self.bits, dtype=np.uint8)).tobytes()
        return bytes([self.b]) + struct.pack(">I", len(self.seed)) + seed + tag

    @classmethod
    def from_bytes(cls, data: bytes) -> "Tag":
        b = data[0]
        (ns,) = struct.unpack(">I", data[1:5])
        sb = (ns + 7) // 8
        seed = np.unpackbits(np.frombuffer(data[5 : 5 + sb], dtype=np.uint8))[:ns]
        bits = np.unpackbits(np.frombuffer(data[5 + sb :], dtype=np.uint8))[:b]
        if len(bits) != b:
            raise ValueError("truncated tag")
        return cls(b, tuple(int(v) for v in seed), tuple(int(v) for v in bits))


def verify_tag(message: Sequence[int], tag_seed: Sequence[int], b: int) -> Tag:
    """Tag a bit string with the Toeplitz hash of the given seed.

    Short messages are zero-padded to ``b + 1`` bits so the hash keeps its
    identity block.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    spec = _tag_spec(len(message), b)
    if len(tag_seed) != spec.seed_length:
        raise ValueError(f"tag seed must have {spec.seed_length} bits")
    x = [int(v) & 1 for v in message] + [0] * (spec.k - len(message))
    bits = hash_apply(ToeplitzSeed(make_prime_field(2), tuple(tag_seed)), spec, x)
    return Tag(b, tuple(int(v) for v in tag_seed), tuple(bits))


def tag_seed_length(nbits: int, b: int) -> int:
    return _tag_spec(nbits, b).seed_length


def check_tag(message: Sequence[int], tag: Tag) -> bool:
    return verify_tag(message, tag.seed, tag.b).bits == tag.bits
