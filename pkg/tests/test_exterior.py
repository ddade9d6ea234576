from math import comb

import numpy as np
import pytest

from miqf.correspondence import TripleE, b_to_e, e_to_b, ker_alpha_basis, validate_triple, variety_build
from miqf.errors import BadK, NotHermitian, WrongSignatureN
from miqf.exterior import (
    ExactSeq,
    compound,
    exterior_hermitian,
    exterior_sequence,
    exterior_variety,
    flip_signature,
    wedge_basis,
)
from miqf.field import FieldContext
from miqf.linalg import KMatrix, hermitian_signature_exact, posdef_check, sign_matrix
from miqf.siegel import siegel_contains, siegel_sample

from conftest import DELTAS, random_kmatrix

K2 = FieldContext(2)


def triple_1(r, seed, delta=2):
    return b_to_e(variety_build(delta, 1, r, siegel_sample(1, r - 1, seed)))


def test_wedge_basis_examples():
    assert wedge_basis(3, 2) == [(0, 1), (0, 2), (1, 2)]
    assert wedge_basis(4, 1) == [(0,), (1,), (2,), (3,)]
    assert wedge_basis(4, 4) == [(0, 1, 2, 3)]
    assert len(wedge_basis(6, 3)) == 20
    for bad in (0, 5):
        with pytest.raises(BadK):
            wedge_basis(4, bad)


def test_compound_examples():
    assert compound(KMatrix.identity(4, K2), 2) == KMatrix.identity(6, K2)
    D = KMatrix.diag([1, -1, -1], K2)
    assert compound(D, 2) == KMatrix.diag([-1, -1, 1], K2)
    M = np.array([[1, 2], [3, 4]])
    assert compound(M, 2)[0, 0] == pytest.approx(-2)
    assert np.allclose(compound(M, 1), M, atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_cauchy_binet_exact(seed):
    rng = np.random.default_rng(seed)
    K = FieldContext(DELTAS[seed % 4])
    r, k = 3 + seed % 3, 2 + seed % 2
    A, B = random_kmatrix(r, r, K, rng, 3), random_kmatrix(r, r, K, rng, 3)
    assert compound(A @ B, k) == compound(A, k) @ compound(B, k)


@pytest.mark.parametrize("seed", range(10))
def test_cauchy_binet_float_rectangular(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(4, 5)) + 1j * rng.normal(size=(4, 5))
    B = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    assert np.allclose(compound(A @ B, 2), compound(A, 2) @ compound(B, 2), atol=1e-10)


def test_exterior_sequence_dimensions():
    E = triple_1(4, 0)
    seq = ExactSeq(4, ker_alpha_basis(E), E.alpha)
    assert seq.is_exact()
    for k in range(1, 5):
        ext = exterior_sequence(seq, k)
        assert ext.total_dim == comb(4, k)
        assert ext.kernel.shape[1] == comb(3, k)
        assert ext.quotient_dim == comb(3, k - 1)
        assert ext.is_exact()


def test_exterior_sequence_bad_k():
    E = triple_1(3, 1)
    with pytest.raises(BadK):
        exterior_sequence(ExactSeq(3, ker_alpha_basis(E), E.alpha), 4)


def test_exterior_hermitian():
    G = sign_matrix(1, 3, K2)
    for k in range(1, 5):
        sig = hermitian_signature_exact(exterior_hermitian(G, k))
        # (-1)^(k-1) flips it back to (C(3, k-1), C(3, k))
        expected = (comb(3, k - 1), comb(3, k)) if k % 2 else (comb(3, k), comb(3, k - 1))
        assert tuple(sig[:2]) == expected
    with pytest.raises(NotHermitian):
        exterior_hermitian(KMatrix([[1, 1], [0, 1]], K2), 2)


def test_exterior_variety_k1_is_identity():
    E = triple_1(3, 2)
    out = exterior_variety(E, 1)
    assert out.gram == E.gram and np.array_equal(out.alpha, E.alpha)


@pytest.mark.parametrize("delta", DELTAS)
def test_square_of_r3(delta):
    E = triple_1(3, 5, delta)
    out = exterior_variety(E, 2)
    assert (out.n, out.r) == (2, 3)
    assert out.gram == sign_matrix(2, 1, out.ctx)
    assert validate_triple(out).ok
    assert siegel_contains(e_to_b(out).z.z)[0]


@pytest.mark.parametrize("k", [2, 3])
def test_r4_powers_validate(k):
    out = exterior_variety(triple_1(4, 8), k)
    assert (out.n, out.r) == (comb(3, k - 1), comb(4, k))
    assert validate_triple(out).ok


def test_top_power_is_degenerate():
    out = exterior_variety(triple_1(3, 3), 3)
    assert (out.n, out.r) == (1, 1)
    rep = validate_triple(out)
    assert rep.ok and rep["kernel_posdef"].detail.get("degenerate")


def test_wrong_signature_rejected():
    E = b_to_e(variety_build(2, 2, 4, siegel_sample(2, 2, 0)))
    with pytest.raises(WrongSignatureN):
        exterior_variety(E, 2)


def test_n_equals_r_minus_1_is_flipped():
    E = b_to_e(variety_build(3, 2, 3, siegel_sample(2, 1, 4)))
    F = flip_signature(E)
    assert (F.n, F.m) == (1, 2)
    assert np.array_equal(F.z, E.z.T)
    assert validate_triple(F).ok
    out = exterior_variety(E, 2)
    assert validate_triple(out).ok


def test_bad_k():
    with pytest.raises(BadK):
        exterior_variety(triple_1(3, 0), 0)
    with pytest.raises(BadK):
        exterior_variety(triple_1(3, 0), 4)


def test_not_restricted_to_sampled_input():
    ctx = FieldContext(7)
    z = np.array([[0.2 + 0.1j, -0.3j, 0.1]])
    E = TripleE(ctx, 1, 4, sign_matrix(1, 3, ctx), np.hstack([np.eye(1), z]))
    assert validate_triple(exterior_variety(E, 2)).ok


@pytest.mark.parametrize("seed", range(15))
def test_exterior_kernel_form_is_positive(seed):
    # (-1)^k times the induced form, restricted to the k-th power of Ker(alpha)
    r = 3 + seed % 3
    k = 2 + seed % (r - 2)
    E = triple_1(r, seed, DELTAS[seed % 4])
    lam = compound(ker_alpha_basis(E), k)
    G = compound(E.gram, k).embed() * (-1) ** k
    restricted = lam.T @ G @ lam.conj()
    assert posdef_check((restricted + restricted.conj().T) / 2, 1e-9)[0]
