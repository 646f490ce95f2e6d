from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from operadforge.linalg import (
    DEFAULT_PRIMES,
    DimensionMismatch,
    IncrementalEchelon,
    SparseMatrix,
    in_row_space,
    matvec,
    multimodular_rank,
    nullspace_basis,
    rank,
    row_reduce,
)

P1, P2 = DEFAULT_PRIMES


def dense(rows, cols):
    return st.lists(st.lists(st.integers(-9, 9), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(lambda c: dense(r, c)))


def sympy_rank(data):
    return sympy.Matrix(data).rank()


def test_identity_and_zero():
    assert rank(SparseMatrix.identity(3)) == 3
    assert rank(SparseMatrix.zero(4, 5)) == 0
    assert rank(SparseMatrix.zero(0, 5)) == 0


def test_jacobi_orbit_rank_one():
    from operadforge.engine import compile_operad
    from operadforge.presets import operad

    op = compile_operad(operad("lie"))
    orbit = op._seed()
    M = SparseMatrix((op.vector(w, 3) for w in orbit), op.free.dimension(3))
    assert op.free.dimension(3) == 3
    assert rank(M) == 1


def test_row_reduce_examples():
    R, piv = row_reduce(SparseMatrix.from_dense([[2, 4], [1, 2]]))
    assert R.to_dense() == [[1, 2]]
    assert piv == [0]
    I = SparseMatrix.identity(3)
    R, piv = row_reduce(I)
    assert R == I and piv == [0, 1, 2]


def test_row_reduce_rank_three():
    M = SparseMatrix.from_dense([
        [1, 2, 0, Fraction(1, 2), 3, 1],
        [0, 1, 1, 0, 0, 2],
        [1, 3, 1, Fraction(1, 2), 3, 3],
        [2, 0, -1, 1, 1, 0],
    ])
    R, piv = row_reduce(M)
    assert len(piv) == 3 == rank(M) == sympy_rank(M.to_dense())


def test_in_row_space_examples():
    M = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert in_row_space(M, {0: 1, 1: 1})
    assert in_row_space(M, [1, 2, 1])
    assert not in_row_space(M, [1, -1, 1])
    with pytest.raises(DimensionMismatch):
        in_row_space(M, [1, 2])


def test_nullspace_examples():
    assert nullspace_basis(SparseMatrix.identity(4)) == []
    assert len(nullspace_basis(SparseMatrix.zero(3, 3))) == 3
    M = SparseMatrix.from_dense([[1, 1, 1]])
    null = nullspace_basis(M)
    assert len(null) == 2
    assert all(not any(matvec(M, v)) for v in null)


def test_multimodular_examples():
    r = multimodular_rank(SparseMatrix.identity(3))
    assert (r.rank, r.stable) == (3, True)
    r = multimodular_rank(SparseMatrix.from_dense([[P1, 0], [0, 1]]))
    assert r.ranks == {P1: 1, P2: 2}
    assert r.rank == 2 and not r.stable


def test_multimodular_rejects_small_primes():
    with pytest.raises(ValueError):
        multimodular_rank(SparseMatrix.identity(2), [7, P1])
    with pytest.raises(ValueError):
        multimodular_rank(SparseMatrix.identity(2), [P1])


def test_bad_prime_in_denominator_is_skipped():
    M = SparseMatrix.from_dense([[Fraction(1, P1), 1], [0, 1]])
    r = multimodular_rank(M, [P1, P2, 2147483713])
    assert r.skipped == [P1]
    assert r.rank == 2 and r.stable


def test_matrix_market_dump():
    M = SparseMatrix.from_dense([[Fraction(1, 2), 0], [0, 3]])
    text = M.to_matrix_market()
    assert text.startswith("%%MatrixMarket matrix coordinate integer general")
    assert "2 2 2" in text


def test_matrix_is_immutable_value():
    rows = [{0: 1}]
    M = SparseMatrix(rows, 2)
    rows[0][1] = 5
    assert M.to_dense() == [[1, 0]]


@given(matrices)
def test_rank_matches_sympy(data):
    assert rank(SparseMatrix.from_dense(data)) == sympy_rank(data)


@given(matrices)
def test_rank_transpose(data):
    M = SparseMatrix.from_dense(data)
    assert rank(M) == rank(M.transpose())


@given(matrices)
def test_rank_nullity(data):
    M = SparseMatrix.from_dense(data)
    null = nullspace_basis(M)
    assert rank(M) + len(null) == M.ncols
    for v in null:
        assert not any(matvec(M, v))


@given(matrices)
def test_row_reduce_idempotent(data):
    M = SparseMatrix.from_dense(data)
    R, piv = row_reduce(M)
    R2, piv2 = row_reduce(R)
    assert R2 == R and piv2 == piv
    assert len(piv) == rank(M)


@given(matrices, st.sampled_from([P1, P2, 65537]))
def test_modular_rank_bounded_by_rational(data, p):
    M = SparseMatrix.from_dense(data)
    assert rank(M.mod(p)) <= rank(M)


def test_modular_rank_usually_equal():
    import random

    rng = random.Random(5)
    agree = 0
    for _ in range(200):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        data = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        M = SparseMatrix.from_dense(data)
        agree += rank(M.mod(P1)) == rank(M)
    assert agree >= 190


@given(matrices)
def test_incremental_echelon_matches_rank(data):
    M = SparseMatrix.from_dense(data)
    inc = IncrementalEchelon(M.ncols)
    kept = [row for row in M.rows() if inc.add(row)]
    assert inc.rank == len(kept) == rank(M)
    for row in M.rows():
        assert inc.contains(row)
