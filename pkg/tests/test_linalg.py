from fractions import Fraction

import numpy as np
import pytest

from miqf.errors import NotHermitian, NotNormalizable, WrongSignature
from miqf.field import FieldContext
from miqf.linalg import (
    KMatrix,
    Signature,
    conj_transpose,
    gram_normalize,
    hermitian_signature_exact,
    kernel_basis,
    posdef_check,
    sign_matrix,
)

from conftest import random_invertible_kmatrix, random_kmatrix

K1 = FieldContext(1)


def test_conj_transpose_examples():
    E = KMatrix.identity(3, K1)
    assert conj_transpose(E) == E
    K = FieldContext(7)
    T = KMatrix([[K.sqrt, 0], [0, 0]], K)
    assert conj_transpose(T) == -T
    M = np.array([[1j, 0], [2, 0]])
    assert np.array_equal(conj_transpose(M), np.array([[-1j, 2], [0, 0]]))


def test_conj_transpose_is_involution(rng):
    K = FieldContext(3)
    M = random_kmatrix(3, 4, K, rng)
    assert M.H.H == M
    assert M.H.shape == (4, 3)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (4, 1), (3, 0)])
def test_signature_of_sign_matrix(n, m):
    assert hermitian_signature_exact(sign_matrix(n, m, K1)) == Signature(n, m, 0)


def test_signature_hyperbolic_and_zero():
    K = FieldContext(5)
    assert hermitian_signature_exact(KMatrix([[0, 1], [1, 0]], K)) == (1, 1, 0)
    assert hermitian_signature_exact(KMatrix.zeros(3, 3, K)) == (0, 0, 3)


def test_signature_needs_second_trial_vector():
    # off-diagonal entry purely imaginary: x_i + x_j is isotropic, x_i + s x_j is not
    K = FieldContext(2)
    G = KMatrix([[0, K.sqrt], [-K.sqrt, 0]], K)
    assert hermitian_signature_exact(G) == (1, 1, 0)


def test_signature_rejects_non_hermitian():
    K = FieldContext(3)
    with pytest.raises(NotHermitian):
        hermitian_signature_exact(KMatrix([[1, K.sqrt], [K.sqrt, 1]], K))


@pytest.mark.parametrize("seed", range(12))
def test_sylvester_law(seed):
    rng = np.random.default_rng(seed)
    K = FieldContext([1, 2, 3, 7][seed % 4])
    r = 2 + seed % 4
    n = 1 + seed % (r - 1) if r > 1 else 1
    G = sign_matrix(n, r - n, K)
    if seed % 3 == 0:
        # make room for a radical
        G = KMatrix.diag([1] * n + [-1] * (r - n - 1) + [0], K)
    sig = hermitian_signature_exact(G)
    P = random_invertible_kmatrix(r, K, rng)
    assert hermitian_signature_exact(P.H @ G @ P) == sig


def _eig_signature(G: KMatrix):
    w = np.linalg.eigvalsh(G.embed())
    return (int(np.sum(w > 1e-9)), int(np.sum(w < -1e-9)), int(np.sum(abs(w) <= 1e-9)))


@pytest.mark.parametrize("seed", range(10))
def test_exact_signature_matches_eigenvalues(seed):
    rng = np.random.default_rng(100 + seed)
    K = FieldContext([1, 2, 3, 7][seed % 4])
    A = random_kmatrix(4, 4, K, rng)
    G = A + A.H
    assert tuple(hermitian_signature_exact(G)) == _eig_signature(G)


def test_posdef_examples():
    assert posdef_check(np.eye(3), 1e-9) == (True, 1.0)
    assert posdef_check(np.diag([1.0, -1.0]), 1e-9) == (False, -1.0)
    ok, piv = posdef_check(np.array([[1 - 0.5**2]]), 1e-9)
    assert ok and piv == 0.75


def test_posdef_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        posdef_check(np.array([[1, 1j], [1j, 1]]), 1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_posdef_implies_leading_minors_positive(seed):
    rng = np.random.default_rng(seed)
    r = 1 + seed % 4
    A = rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
    M = A @ A.conj().T - rng.uniform(0, 2) * np.eye(r)
    M = (M + M.conj().T) / 2
    ok, _ = posdef_check(M, 1e-12)
    minors = [np.linalg.det(M[:k, :k]).real for k in range(1, r + 1)]
    assert ok == all(d > 0 for d in minors)


def test_kernel_examples():
    z = np.array([[0.3 + 0.1j, -0.2], [0.05j, 0.4]])
    K = kernel_basis(np.hstack([np.eye(2), z]), 1e-9)
    assert np.allclose(K, np.vstack([-z, np.eye(2)]), atol=1e-15)
    assert kernel_basis(np.eye(3), 1e-9).shape == (3, 0)
    v = kernel_basis(np.array([[1, 0.5]]), 1e-9)
    assert np.allclose(v[:, 0], [-0.5, 1])


@pytest.mark.parametrize("seed", range(20))
def test_kernel_properties(seed):
    rng = np.random.default_rng(seed)
    rows, cols, rank = 2 + seed % 3, 3 + seed % 4, 1 + seed % 2
    M = (rng.normal(size=(rows, rank)) + 1j * rng.normal(size=(rows, rank))) @ (
        rng.normal(size=(rank, cols)) + 1j * rng.normal(size=(rank, cols))
    )
    tol = 1e-9
    B = kernel_basis(M, tol)
    assert B.shape[1] == cols - np.linalg.matrix_rank(M)
    assert np.max(np.abs(M @ B), initial=0) < 10 * tol * max(1, np.abs(M).max())
    assert np.array_equal(kernel_basis(M, tol), B)


def test_gram_normalize_examples():
    K = FieldContext(3)
    E = sign_matrix(2, 1, K)
    assert gram_normalize(E, 2) == KMatrix.identity(3, K)
    P = gram_normalize(KMatrix.diag([4, -9], K), 1)
    assert P == KMatrix.diag([Fraction(1, 2), Fraction(1, 3)], K)
    with pytest.raises(NotNormalizable):
        gram_normalize(KMatrix.diag([2, -1], FieldContext(1)), 1)
    with pytest.raises(WrongSignature):
        gram_normalize(KMatrix.diag([4, -9], K), 2)


def test_gram_normalize_reorders_blocks():
    K = FieldContext(2)
    G = KMatrix.diag([-1, Fraction(1, 4), -9], K)
    P = gram_normalize(G, 1)
    assert P.H @ G @ P == sign_matrix(1, 2, K)


@pytest.mark.parametrize("seed", range(15))
def test_gram_normalize_postcondition(seed):
    rng = np.random.default_rng(seed)
    K = FieldContext([1, 2, 3, 7][seed % 4])
    r, n = 3, 1 + seed % 2
    # congruent to E by an integral unipotent change, so the pivots stay squares
    U = KMatrix([[1 if i == j else (rng.integers(-2, 3) if j > i else 0) for j in range(r)] for i in range(r)], K)
    G = U.H @ sign_matrix(n, r - n, K) @ U
    try:
        P = gram_normalize(G, n)
    except NotNormalizable:
        return
    assert P.H @ G @ P == sign_matrix(n, r - n, K)


def test_kmatrix_det_matches_numpy(rng):
    K = FieldContext(7)
    A = random_kmatrix(4, 4, K, rng)
    assert abs(complex(A.det()) - np.linalg.det(A.embed())) < 1e-9
