"""Dense matrices over a :class:`~securenc.field.FieldSpec`.

Entries are stored as int encodings (see :mod:`securenc.field`); indexing
returns :class:`~securenc.field.FieldElement`.  All routines are exact
Gaussian elimination.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import FieldElement, FieldMismatchError, FieldSpec

__all__ = [
    "FqMatrix",
    "NoSolution",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "solve_left",
    "random_invertible",
    "independent_rows",
    "lift_matrix",
    "parse_matrix",
    "format_matrix",
]


class NoSolution(ValueError):
    """The linear system has no solution."""


def _as_int(F: FieldSpec, v) -> int:
    if isinstance(v, FieldElement):
        if v.field != F:
            raise FieldMismatchError(f"{v.field} entry in {F} matrix")
        return v.value
    return F.coerce(v)


class FqMatrix:
    """An ``nrows x ncols`` matrix over ``field``.

    Treated as an immutable value: operations return new matrices and the
    row lists handed out by :meth:`to_ints` are copies.
    """

    __slots__ = ("field", "_rows", "ncols")

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable] = (), ncols: "int | None" = None):
        self.field = field
        data = [[_as_int(field, v) for v in r] for r in rows]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self._rows = data
        self.ncols = ncols

    @classmethod
    def _wrap(cls, field: FieldSpec, rows: list[list[int]], ncols: int) -> "FqMatrix":
        # trusted constructor: rows already reduced ints
        m = cls.__new__(cls)
        m.field = field
        m._rows = rows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "FqMatrix":
        return cls._wrap(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "FqMatrix":
        return cls._wrap(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Sequence[Sequence], nrows: "int | None" = None) -> "FqMatrix":
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def random(cls, field: FieldSpec, nrows: int, ncols: int, rng) -> "FqMatrix":
        rows = [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)]
        return cls._wrap(field, rows, ncols)

    # ------------------------------------------------------------ accessors
    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return FieldElement(self.field, self._rows[i][j])

    def entry(self, i: int, j: int) -> int:
        return self._rows[i][j]

    def row(self, i: int) -> list[int]:
        return list(self._rows[i])

    def col(self, j: int) -> list[int]:
        return [r[j] for r in self._rows]

    def to_ints(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def flat(self) -> list[int]:
        """Row-major entries."""
        return [v for r in self._rows for v in r]

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.field, self.ncols, tuple(map(tuple, self._rows))))

    def __repr__(self):
        return f"FqMatrix({self.field!r}, {self.nrows}x{self.ncols}, [{format_matrix(self)}])"

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._rows for v in r)

    # ----------------------------------------------------------- arithmetic
    def _check(self, other: "FqMatrix"):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        add = self.field.add
        return FqMatrix._wrap(
            self.field,
            [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
            self.ncols,
        )

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        sub = self.field.sub
        return FqMatrix._wrap(
            self.field,
            [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
            self.ncols,
        )

    def __neg__(self) -> "FqMatrix":
        neg = self.field.neg
        return FqMatrix._wrap(self.field, [[neg(a) for a in r] for r in self._rows], self.ncols)

    def scale(self, c) -> "FqMatrix":
        c = _as_int(self.field, c)
        mul = self.field.mul
        return FqMatrix._wrap(self.field, [[mul(c, a) for a in r] for r in self._rows], self.ncols)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        add, mul = F.add, F.mul
        out = []
        brows = other._rows
        for r in self._rows:
            acc = [0] * other.ncols
            for k, a in enumerate(r):
                if a == 0:
                    continue
                brow = brows[k]
                if a == 1:
                    acc = [add(x, y) for x, y in zip(acc, brow)]
                else:
                    acc = [add(x, mul(a, y)) if y else x for x, y in zip(acc, brow)]
            out.append(acc)
        return FqMatrix._wrap(F, out, other.ncols)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix times column vector (ints in, ints out)."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        add, mul = self.field.add, self.field.mul
        out = []
        for r in self._rows:
            acc = 0
            for a, x in zip(r, vec):
                if a and x:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return out

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix._wrap(
            self.field, [list(c) for c in zip(*self._rows)] if self._rows and self.ncols else [[] for _ in range(self.ncols)], self.nrows
        )

    def transpose(self) -> "FqMatrix":
        return self.T

    def select_rows(self, idx: Sequence[int]) -> "FqMatrix":
        return FqMatrix._wrap(self.field, [list(self._rows[i]) for i in idx], self.ncols)

    def select_cols(self, idx: Sequence[int]) -> "FqMatrix":
        return FqMatrix._wrap(self.field, [[r[j] for j in idx] for r in self._rows], len(idx))

    @staticmethod
    def vstack(*mats: "FqMatrix") -> "FqMatrix":
        F = mats[0].field
        ncols = mats[0].ncols
        rows = []
        for m in mats:
            m._check(mats[0])
            if m.ncols != ncols:
                raise ValueError("vstack column mismatch")
            rows.extend(list(r) for r in m._rows)
        return FqMatrix._wrap(F, rows, ncols)

    @staticmethod
    def hstack(*mats: "FqMatrix") -> "FqMatrix":
        F = mats[0].field
        nrows = mats[0].nrows
        for m in mats:
            m._check(mats[0])
            if m.nrows != nrows:
                raise ValueError("hstack row mismatch")
        rows = [sum((list(m._rows[i]) for m in mats), []) for i in range(nrows)]
        return FqMatrix._wrap(F, rows, sum(m.ncols for m in mats))

    def rank(self) -> int:
        return rank(self)

    def lift(self, target: FieldSpec) -> "FqMatrix":
        return lift_matrix(self, target)


# ---------------------------------------------------------------------------


def _rref_rows(F: FieldSpec, rows: list[list[int]], ncols: int, limit: "int | None" = None):
    """In-place reduced row echelon form; returns pivot columns.

    Only the first ``limit`` columns are used as pivots (the rest ride
    along, as in an augmented system).
    """
    limit = ncols if limit is None else limit
    sub, mul, inv = F.sub, F.mul, F.inv
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        if prow[c] != 1:
            s = inv(prow[c])
            prow = [mul(s, v) for v in prow]
            rows[r] = prow
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                if F.p == 2 and F.base is None:
                    rows[i] = [x ^ y for x, y in zip(ri, prow)]
                else:
                    rows[i] = [sub(x, mul(f, y)) if y else x for x, y in zip(ri, prow)]
        pivots.append(c)
        r += 1
    return pivots


def rref(A: FqMatrix) -> tuple[FqMatrix, list[int]]:
    """Reduced row echelon form and the pivot column list."""
    rows = A.to_ints()
    piv = _rref_rows(A.field, rows, A.ncols)
    return FqMatrix._wrap(A.field, rows, A.ncols), piv


def rank(A: FqMatrix) -> int:
    if A.nrows == 0 or A.ncols == 0:
        return 0
    if A.nrows > A.ncols:
        A = A.T
    return len(_rref_rows(A.field, A.to_ints(), A.ncols))


def kernel_basis(A: FqMatrix) -> list[tuple[int, ...]]:
    """Basis of ``{v : A v = 0}`` as int tuples of length ``A.ncols``."""
    F = A.field
    rows = A.to_ints()
    piv = _rref_rows(F, rows, A.ncols)
    free = [c for c in range(A.ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [0] * A.ncols
        v[f] = 1
        for r, pc in enumerate(piv):
            v[pc] = F.neg(rows[r][f])
        basis.append(tuple(v))
    return basis


def image_basis(A: FqMatrix) -> list[tuple[int, ...]]:
    """Basis of the column space: the pivot columns of ``A`` itself."""
    _, piv = rref(A)
    return [tuple(A.col(c)) for c in piv]


def solve_left(A: FqMatrix, B: FqMatrix) -> FqMatrix:
    """One ``X`` with ``X @ A == B`` (free variables set to zero).

    Raises :class:`NoSolution` when some row of ``B`` is outside the row
    space of ``A``.
    """
    if A.field != B.field:
        raise FieldMismatchError(f"{A.field} vs {B.field}")
    if A.ncols != B.ncols:
        raise ValueError(f"column mismatch {A.shape} vs {B.shape}")
    F = A.field
    r, s = A.nrows, B.nrows
    # A^T Y = B^T, augmented [A^T | B^T]
    At, Bt = A.T.to_ints(), B.T.to_ints()
    aug = [a + b for a, b in zip(At, Bt)] if A.ncols else []
    piv = _rref_rows(F, aug, r + s, limit=r)
    for row in aug[len(piv):]:
        if any(row[r:]):
            raise NoSolution("rows of B are not in the row space of A")
    Y = [[0] * s for _ in range(r)]
    for i, pc in enumerate(piv):
        Y[pc] = aug[i][r:]
    X = FqMatrix._wrap(F, [list(c) for c in zip(*Y)] if r else [[] for _ in range(s)], r)
    if X @ A != B:
        raise AssertionError("solve_left verification failed")  # pragma: no cover
    return X


def random_invertible(field: FieldSpec, n: int, rng) -> FqMatrix:
    """Uniform draw from GL(n, q) by rejection sampling."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        M = FqMatrix.random(field, n, n, rng)
        if rank(M) == n:
            return M


def independent_rows(A: FqMatrix) -> tuple[list[int], FqMatrix]:
    """Greedy first-wins selection of a maximal independent set of rows."""
    F = A.field
    chosen: list[int] = []
    basis: list[list[int]] = []  # reduced rows, each with a leading pivot
    pivots: list[int] = []
    for i in range(A.nrows):
        v = A.row(i)
        for b, pc in zip(basis, pivots):
            if v[pc]:
                f = v[pc]
                v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, b)]
        lead = next((c for c, x in enumerate(v) if x), None)
        if lead is None:
            continue
        s = F.inv(v[lead])
        v = [F.mul(s, x) for x in v]
        # keep basis fully reduced on existing pivots
        for k, b in enumerate(basis):
            if b[lead]:
                f = b[lead]
                basis[k] = [F.sub(x, F.mul(f, y)) for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(lead)
        chosen.append(i)
    return chosen, A.select_rows(chosen)


def lift_matrix(A: FqMatrix, target: FieldSpec) -> FqMatrix:
    """Entrywise embedding of ``A`` into the extension ``target``."""
    if not target.extends(A.field):
        raise FieldMismatchError(f"{target} is not an extension of {A.field}")
    return FqMatrix._wrap(target, A.to_ints(), A.ncols)


def parse_matrix(text: str, field: FieldSpec) -> FqMatrix:
    """Parse ``"1 0; 0 1"`` style literals (entries are int encodings)."""
    text = text.strip()
    if not text:
        return FqMatrix(field, [])
    rows = [[int(tok) for tok in r.split()] for r in text.split(";")]
    return FqMatrix(field, rows)


def format_matrix(A: FqMatrix) -> str:
    return "; ".join(" ".join(str(v) for v in r) for r in A._rows)
