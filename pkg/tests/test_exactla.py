from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koszulk3.exactla import (FieldSpec, ResourceError, SparseMatrix, is_prime, kernel_dim,
                              rank, row_echelon)
from oracles import dense_matmul, dense_rank

GF7, GF = FieldSpec(7), FieldSpec(65537)
QQ = FieldSpec(None)


def test_identity_rank():
    assert rank(SparseMatrix.identity(5, GF7)) == 5


def test_proportional_rows_over_qq():
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]], QQ)) == 1


def test_field_parse_and_str():
    assert FieldSpec.parse("gfp:65537") == GF
    assert FieldSpec.parse("qq") == QQ
    assert str(GF) == "gfp:65537" and str(QQ) == "qq"
    with pytest.raises(ValueError):
        FieldSpec.parse("gfp:65536")
    assert is_prime(1000003) and not is_prime(1000001)


def test_field_arithmetic():
    assert GF7.inv(3) == 5
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    with pytest.raises(ZeroDivisionError):
        GF7.inv(0)


def test_row_echelon_trivial():
    piv, E = row_echelon(SparseMatrix.zeros(3, 4, GF))
    assert piv == [] and E.nrows == 0 or E.is_zero()
    piv, _ = row_echelon(SparseMatrix.identity(4, GF))
    assert piv == [0, 1, 2, 3]


def test_matrix_market_roundtrip():
    M = SparseMatrix.from_dense([[0, 3, 0], [1, 0, 65536]], GF)
    txt = M.to_matrix_market()
    assert SparseMatrix.from_matrix_market(txt) == M
    Q = SparseMatrix.from_dense([[Fraction(1, 3), 0], [0, -2]], QQ)
    assert SparseMatrix.from_matrix_market(Q.to_matrix_market()) == Q


def test_bareiss_cap():
    big = [[(i + 1) ** (j + 3) * 10 ** 3000 + i * j for j in range(30)] for i in range(30)]
    with pytest.raises(ResourceError):
        rank(SparseMatrix.from_dense(big, QQ))


def test_dense_path_matches_oracle():
    rng = np.random.default_rng(1)
    A = rng.integers(0, 5, size=(90, 80))
    A[:, 10:] = A[:, :10] @ rng.integers(0, 3, size=(10, 70))  # rank <= 10
    M = SparseMatrix.from_dense(A.tolist(), GF)
    assert rank(M) == dense_rank(A.tolist(), 65537)
    assert kernel_dim(M) == 80 - rank(M)


small = st.integers(1, 7).flatmap(lambda m: st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(small, st.sampled_from([7, 65537, None]))
def test_rank_matches_oracle_and_transpose(rows, p):
    F = FieldSpec(p)
    M = SparseMatrix.from_dense(rows, F)
    r = rank(M)
    assert r == dense_rank(rows, p) == rank(M.transpose())
    piv, E = row_echelon(M)
    assert len(piv) == r


@settings(max_examples=40, deadline=None)
@given(small, st.integers(1, 6), st.integers(0, 10 ** 6))
def test_rank_of_product(rows, k, salt):
    n = len(rows[0])
    B = [[(salt * (i + 3) * (j + 7)) % 5 - 2 for j in range(k)] for i in range(n)]
    A = SparseMatrix.from_dense(rows, GF)
    Bm = SparseMatrix.from_dense(B, GF)
    AB = A @ Bm
    assert AB.to_dense() == dense_matmul([[x % 65537 for x in r] for r in rows], B, 65537)
    assert rank(AB) <= min(rank(A), rank(Bm))
