import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from securenc.field import FieldMismatchError, make_extension_field, make_prime_field
from securenc.linalg import (
    FqMatrix,
    NoSolution,
    format_matrix,
    image_basis,
    independent_rows,
    kernel_basis,
    lift_matrix,
    parse_matrix,
    random_invertible,
    rank,
    rref,
    solve_left,
)


def sympy_rank(A: FqMatrix) -> int:
    p = A.field.p
    if A.nrows == 0 or A.ncols == 0:
        return 0
    dm = DomainMatrix([[GF(p)(v) for v in r] for r in A.to_ints()], A.shape, GF(p))
    return dm.rank()


@st.composite
def matrices(draw, p=None, max_dim=5):
    p = p or draw(st.sampled_from([2, 3, 5]))
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return FqMatrix(make_prime_field(p), rows, c)


# -- rank ------------------------------------------------------------------


def test_rank_examples(F2):
    assert rank(FqMatrix.identity(F2, 4)) == 4
    assert rank(FqMatrix.zeros(F2, 3, 2)) == 0
    assert rank(parse_matrix("1 1; 1 1", F2)) == 1


@given(matrices())
def test_rank_matches_sympy_and_transpose(A):
    assert rank(A) == sympy_rank(A) == rank(A.T)


def test_rank_over_extension_field_by_brute_force():
    E = make_extension_field(make_prime_field(2), 2)
    rng = np.random.default_rng(3)
    for _ in range(40):
        A = FqMatrix.random(E, 3, 3, rng)
        # oracle: rank = log_q |row space|, spanned by all combinations
        span = set()
        for coeffs in itertools.product(range(4), repeat=3):
            v = [0, 0, 0]
            for c, r in zip(coeffs, A.to_ints()):
                v = [E.add(a, E.mul(c, b)) for a, b in zip(v, r)]
            span.add(tuple(v))
        assert 4 ** rank(A) == len(span)


# -- kernel / image ---------------------------------------------------------


def test_kernel_examples(F2):
    assert kernel_basis(FqMatrix.identity(F2, 3)) == []
    assert len(kernel_basis(FqMatrix.zeros(F2, 2, 2))) == 2
    assert kernel_basis(parse_matrix("1 1", F2)) == [(1, 1)]


@given(matrices())
def test_rank_nullity_and_kernel_vectors(A):
    K = kernel_basis(A)
    assert len(K) + rank(A) == A.ncols
    for v in K:
        assert all(x == 0 for x in A.apply(list(v)))
    if K:
        assert rank(FqMatrix(A.field, K, A.ncols)) == len(K)


@given(matrices())
def test_image_basis_spans_column_space(A):
    B = image_basis(A)
    assert len(B) == rank(A)
    if B:
        Bm = FqMatrix.from_columns(A.field, B, A.nrows)
        assert rank(Bm) == len(B) == rank(FqMatrix.hstack(Bm, A))


# -- solve_left -------------------------------------------------------------


def test_solve_left_examples(F2):
    B = parse_matrix("1 0 1; 0 1 1", F2)
    assert solve_left(FqMatrix.identity(F2, 3), B) == B
    Z = FqMatrix.zeros(F2, 2, 2)
    assert solve_left(Z, Z) == Z
    X = solve_left(parse_matrix("1; 1", F2), parse_matrix("1", F2))
    assert X.to_ints() in ([[1, 0]], [[0, 1]])
    assert X @ parse_matrix("1; 1", F2) == parse_matrix("1", F2)
    with pytest.raises(NoSolution):
        solve_left(parse_matrix("1 0", F2), parse_matrix("0 1", F2))


@given(matrices(p=2, max_dim=3), st.data())
def test_solve_left_exhaustive_oracle(A, data):
    F = A.field
    s = data.draw(st.integers(1, 2))
    B = FqMatrix(F, [data.draw(st.lists(st.integers(0, 1), min_size=A.ncols, max_size=A.ncols)) for _ in range(s)], A.ncols)
    exists = any(
        FqMatrix(F, [list(x[i * A.nrows : (i + 1) * A.nrows]) for i in range(s)], A.nrows) @ A == B
        for x in itertools.product(range(2), repeat=s * A.nrows)
    )
    try:
        X = solve_left(A, B)
    except NoSolution:
        assert not exists
    else:
        assert exists and X @ A == B


def test_solve_left_field_mismatch(F2, F3):
    with pytest.raises(FieldMismatchError):
        solve_left(FqMatrix.identity(F2, 1), FqMatrix.identity(F3, 1))


# -- random_invertible -------------------------------------------------------


def test_random_invertible_gf2_n1(F2, rng):
    for _ in range(20):
        assert random_invertible(F2, 1, rng).to_ints() == [[1]]


def test_random_invertible_uniform_on_gl22(F2):
    rng = np.random.default_rng(11)
    N = 60000
    counts = Counter(tuple(map(tuple, random_invertible(F2, 2, rng).to_ints())) for _ in range(N))
    assert len(counts) == 6
    sigma = (N * (1 / 6) * (5 / 6)) ** 0.5
    for c in counts.values():
        assert abs(c - N / 6) <= 3 * sigma


@pytest.mark.parametrize("p,n", [(2, 3), (3, 4), (5, 2)])
def test_random_invertible_full_rank(p, n, rng):
    F = make_prime_field(p)
    for _ in range(30):
        assert rank(random_invertible(F, n, rng)) == n


# -- independent rows --------------------------------------------------------


def test_independent_rows_examples(F2):
    idx, A = independent_rows(FqMatrix.identity(F2, 3))
    assert idx == [0, 1, 2]
    idx, A = independent_rows(parse_matrix("1 0; 1 0; 0 1", F2))
    assert idx == [0, 2] and A == parse_matrix("1 0; 0 1", F2)
    assert independent_rows(FqMatrix.zeros(F2, 3, 3))[0] == []


@given(matrices())
def test_independent_rows_properties(A):
    idx, Ab = independent_rows(A)
    assert len(idx) == rank(A) == rank(Ab) == Ab.nrows
    if idx:
        assert rank(FqMatrix.vstack(Ab, A)) == rank(A)
    # greedy: each skipped row depends on the chosen rows before it
    for i in range(A.nrows):
        if i not in idx:
            prior = [j for j in idx if j < i]
            assert rank(A.select_rows(prior + [i])) == len(prior)


# -- lifting -----------------------------------------------------------------


def test_lift_preserves_rank_gf2_to_gf16(F2):
    E = make_extension_field(F2, 4)
    rng = np.random.default_rng(5)
    for _ in range(100):
        A = FqMatrix.random(F2, 4, 4, rng)
        assert rank(lift_matrix(A, E)) == rank(A)
    assert lift_matrix(FqMatrix.identity(F2, 3), E) == FqMatrix.identity(E, 3)


def test_lift_is_multiplicative_gf3(F3):
    E = make_extension_field(F3, 2)
    rng = np.random.default_rng(6)
    for _ in range(30):
        A, B = FqMatrix.random(F3, 3, 3, rng), FqMatrix.random(F3, 3, 3, rng)
        assert lift_matrix(A @ B, E) == lift_matrix(A, E) @ lift_matrix(B, E)
    with pytest.raises(FieldMismatchError):
        lift_matrix(A, make_extension_field(make_prime_field(2), 2))


# -- plumbing -----------------------------------------------------------------


def test_matrix_literals_round_trip(F3):
    A = parse_matrix("1 2 0; 0 1 1", F3)
    assert A.shape == (2, 3) and parse_matrix(format_matrix(A), F3) == A
    assert A[0, 1] == F3(2)


def test_arithmetic_and_stacking(F3):
    A = parse_matrix("1 2; 0 1", F3)
    I = FqMatrix.identity(F3, 2)
    assert A + (-A) == FqMatrix.zeros(F3, 2, 2)
    assert A - A == FqMatrix.zeros(F3, 2, 2)
    assert A.scale(2) == A + A
    assert (A @ I) == A and A.T.T == A
    assert FqMatrix.vstack(A, I).shape == (4, 2)
    assert FqMatrix.hstack(A, I).shape == (2, 4)
    R, piv = rref(parse_matrix("2 1; 1 2", F3))
    assert piv == [0] and R == parse_matrix("1 2; 0 0", F3)
    with pytest.raises(ValueError):
        FqMatrix(F3, [[1, 2], [1]])
