import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from svdcomplex.errors import NumericalFailure
from svdcomplex.matrix_kernel import (
    PrimeFieldMatrix,
    RationalMatrix,
    as_dense,
    exact_rank,
    exact_rank_mod_p,
    is_prime,
    numerical_rank,
    svd_plain,
    sym_eig,
)
from svdcomplex.samples import A1, A2

from conftest import random_int_matrix


def _check_plain_svd(M):
    U, s, V = svd_plain(M)
    m, k = M.shape
    assert U.shape == (m, m) and V.shape == (k, k) and s.shape == (min(m, k),)
    S = np.zeros((m, k))
    S[np.arange(len(s)), np.arange(len(s))] = s
    scale = max(1.0, np.linalg.norm(M))
    assert np.linalg.norm(U @ S @ V.T - M) <= 1e-12 * scale * max(m, k)
    assert np.allclose(U.T @ U, np.eye(m), atol=1e-12)
    assert np.allclose(V.T @ V, np.eye(k), atol=1e-12)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)


# --- svd_plain ----------------------------------------------------------------

def test_svd_of_diagonal_is_trivial():
    U, s, V = svd_plain(np.diag([3.0, 2.0]))
    assert np.allclose(s, [3, 2])
    assert np.allclose(np.abs(U), np.eye(2)) and np.allclose(np.abs(V), np.eye(2))
    assert np.allclose(U @ np.diag(s) @ V.T, np.diag([3.0, 2.0]))


def test_svd_of_golden_first_map():
    s = svd_plain(A1).singular_values
    assert np.allclose(s[:2], [34.489, 28.714], rtol=5e-5)
    assert s[2] < 1e-12 * s[0]


def test_svd_random_4x6_matches_exact_rank(rng):
    for _ in range(20):
        M = random_int_matrix(rng, 4, 6, rank=int(rng.integers(0, 5)))
        _check_plain_svd(M.astype(float))
        s = svd_plain(M).singular_values
        assert numerical_rank(s) == exact_rank(RationalMatrix.from_rows(M.tolist()))


def test_svd_empty_shapes():
    U, s, V = svd_plain(np.zeros((0, 3)))
    assert U.shape == (0, 0) and s.size == 0 and np.array_equal(V, np.eye(3))


def test_svd_rejects_nonfinite():
    with pytest.raises(ValueError):
        svd_plain([[np.nan, 1.0]])


def test_svd_reports_nonconvergence(monkeypatch):
    def boom(*a, **k):
        raise np.linalg.LinAlgError("SVD did not converge")

    monkeypatch.setattr(np.linalg, "svd", boom)
    with pytest.raises(NumericalFailure):
        svd_plain(np.eye(2))


@given(hnp.arrays(np.float64, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=60),
                  elements=st.floats(-1e3, 1e3, allow_nan=False)))
def test_svd_invariants_property(M):
    _check_plain_svd(M)


@given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 2**32 - 1), st.integers(0, 40))
def test_numerical_rank_equals_exact_rank(m, k, seed, r):
    rng = np.random.default_rng(seed)
    r = min(r, m, k)
    # product of two factors with entries small enough that the result stays in [-50, 50]
    F = rng.integers(-1, 2, size=(m, r))
    G = rng.integers(-1, 2, size=(r, k))
    M = np.clip(F @ G, -50, 50) if r else rng.integers(-50, 51, size=(m, k))
    s = svd_plain(M).singular_values
    assert numerical_rank(s) == exact_rank(RationalMatrix.from_rows(M.tolist()))


# --- sym_eig ------------------------------------------------------------------

def test_sym_eig_identity():
    w, Q = sym_eig(np.eye(3))
    assert np.allclose(w, 1) and np.allclose(Q.T @ Q, np.eye(3))


def test_sym_eig_diagonal_with_zero():
    w, _ = sym_eig(np.diag([5.0, 5.0, 0.0]))
    assert np.allclose(w, [5, 5, 0])


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(ValueError):
        sym_eig([[1.0, 2.0], [0.0, 1.0]])


@given(hnp.arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 20)),
                  elements=st.floats(-10, 10, allow_nan=False)))
def test_sym_eig_of_gram_matches_squared_singular_values(M):
    w, Q = sym_eig(M.T @ M)
    s = svd_plain(M).singular_values
    expected = np.zeros(M.shape[1])
    expected[: len(s)] = s**2
    assert np.allclose(w, expected, atol=1e-8 * max(1.0, expected[0]))
    assert np.allclose(Q @ np.diag(w) @ Q.T, M.T @ M, atol=1e-8 * max(1.0, expected[0]))


# --- exact ranks --------------------------------------------------------------

def test_exact_rank_small_cases():
    assert exact_rank(RationalMatrix.zeros(3, 4)) == 0
    assert exact_rank(RationalMatrix.from_rows(A2)) == 2
    assert exact_rank(RationalMatrix.identity(7)) == 7


def test_exact_rank_with_fractions():
    M = RationalMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    assert exact_rank(M) == 1


def test_rank_mod_p_small_cases():
    assert exact_rank_mod_p(PrimeFieldMatrix.from_rows([[2]], 5)) == 1
    assert exact_rank_mod_p(PrimeFieldMatrix.from_rows([[1, 1], [1, 1]], 2)) == 1
    assert exact_rank_mod_p(RationalMatrix.from_rows(A1).mod(101)) == 2


def _span_size_f2(rows):
    """Brute force: number of distinct F_2 combinations of the rows."""
    seen = set()
    for coeffs in itertools.product((0, 1), repeat=len(rows)):
        v = tuple(sum(c * x for c, x in zip(coeffs, col)) % 2 for col in zip(*rows))
        seen.add(v)
    return len(seen)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_rank_mod_2_matches_brute_force(m, k, seed):
    M = np.random.default_rng(seed).integers(0, 2, size=(m, k)).tolist()
    r = exact_rank_mod_p(PrimeFieldMatrix.from_rows(M, 2))
    assert 2**r == _span_size_f2(M)


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1),
       st.sampled_from([2, 3, 7, 101, 32003, 2147483647]))
def test_rank_mod_p_matches_gauss_jordan(m, k, seed, p):
    M = np.random.default_rng(seed).integers(0, min(p, 2**31 - 1), size=(m, k)).tolist()
    P = PrimeFieldMatrix.from_rows(M, p)
    assert exact_rank_mod_p(P) == P.rank()


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_bareiss_matches_gauss_jordan(m, k, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, min(m, k) + 1))
    M = RationalMatrix.from_rows(random_int_matrix(rng, m, k, rank=r).tolist())
    assert exact_rank(M) == M.rank()


# --- exact matrix arithmetic --------------------------------------------------

def test_rational_inverse_and_product():
    M = RationalMatrix.from_rows([[2, 1], [1, 1]])
    assert (M @ M.inverse()) == RationalMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        RationalMatrix.from_rows([[1, 2], [2, 4]]).inverse()


def test_full_rank_factorization_reconstructs():
    M = RationalMatrix.from_rows(A1)
    F, G = M.full_rank_factorization()
    assert F.shape == (3, 2) and G.shape == (2, 5)
    assert (F @ G - M).is_zero()


def test_prime_field_reduces_entries():
    P = PrimeFieldMatrix.from_rows([[7, -1]], 5)
    assert P.row_lists() == [[2, 4]]


def test_prime_field_requires_prime():
    with pytest.raises(ValueError):
        PrimeFieldMatrix.from_rows([[1]], 4)


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_as_dense_shapes():
    assert as_dense([], rows=0, cols=3).shape == (0, 3)
    with pytest.raises(ValueError):
        as_dense([[1, 2]], rows=2, cols=1)
