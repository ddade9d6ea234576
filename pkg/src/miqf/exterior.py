"""Exterior powers: compound matrices, exterior powers of short exact
sequences and of Hermitian forms, and the k-th exterior power of a variety
of signature (1, r-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .correspondence import TripleE, ker_alpha_basis, normalize_triple
from .errors import BadK, BadShape, NotHermitian, WrongSignatureN
from .linalg import KMatrix, kernel_basis, numerical_rank, sign_matrix
from .siegel import DEFAULT_TOL

__all__ = [
    "ExactSeq",
    "compound",
    "exterior_hermitian",
    "exterior_sequence",
    "exterior_variety",
    "flip_signature",
    "wedge_basis",
]


def wedge_basis(r: int, k: int) -> list[tuple[int, ...]]:
    """Strictly increasing k-subsets of {0, ..., r-1}, lexicographic."""
    if not 0 < k <= r:
        raise BadK(f"k={k} outside 1..{r}")
    return list(combinations(range(r), k))


def compound(M, k: int):
    """k-th compound: the matrix of k x k minors, rows and columns in wedge order."""
    if isinstance(M, KMatrix):
        if not 0 < k <= min(M.shape):
            raise BadK(f"k={k} outside 1..{min(M.shape)}")
        if k == 1:
            return M
        rows, cols = wedge_basis(M.rows, k), wedge_basis(M.cols, k)
        return KMatrix._trusted([[M.submatrix(S, T).det() for T in cols] for S in rows], M.ctx)
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise BadShape("compound needs a 2-D matrix")
    if not 0 < k <= min(M.shape):
        raise BadK(f"k={k} outside 1..{min(M.shape)}")
    rows, cols = wedge_basis(M.shape[0], k), wedge_basis(M.shape[1], k)
    out = np.empty((len(rows), len(cols)), dtype=np.complex128)
    for a, S in enumerate(rows):
        for b, T in enumerate(cols):
            out[a, b] = np.linalg.det(M[np.ix_(S, T)])
    return out


@dataclass(frozen=True, eq=False)
class ExactSeq:
    """0 -> B1 -> B2 -> C -> 0 with B2 = C^total_dim.

    ``kernel`` has a basis of B1 as columns, ``quotient_map`` is the
    surjection B2 -> C.
    """

    total_dim: int
    kernel: np.ndarray
    quotient_map: np.ndarray

    def exactness_defect(self) -> float:
        prod = self.quotient_map @ self.kernel
        return float(np.max(np.abs(prod), initial=0.0))

    def is_exact(self, tol: float = DEFAULT_TOL) -> bool:
        if self.kernel.shape[0] != self.total_dim or self.quotient_map.shape[1] != self.total_dim:
            return False
        rank_q = numerical_rank(self.quotient_map, tol)
        return self.exactness_defect() < 10 * tol and rank_q + self.kernel.shape[1] == self.total_dim

    @property
    def quotient_dim(self) -> int:
        return self.quotient_map.shape[0]


def cokernel_map(K: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows spanning the left null space of K, via :func:`kernel_basis` of K^t."""
    return kernel_basis(np.asarray(K).T, tol).T


def exterior_sequence(seq: ExactSeq, k: int, tol: float = DEFAULT_TOL) -> ExactSeq:
    r = seq.total_dim
    if not 0 < k <= r:
        raise BadK(f"k={k} outside 1..{r}")
    if k == 1:
        return seq
    d = seq.kernel.shape[1]
    if k <= d:
        kernel = compound(seq.kernel, k)
    else:
        kernel = np.zeros((comb(r, k), 0), dtype=np.complex128)
    quotient = cokernel_map(kernel, tol) if kernel.shape[1] else np.eye(comb(r, k), dtype=np.complex128)
    return ExactSeq(comb(r, k), kernel, quotient)


def exterior_hermitian(G: KMatrix, k: int) -> KMatrix:
    """Gram matrix of the induced form on the k-th exterior power."""
    if G != G.H:
        raise NotHermitian("exterior power of a non-Hermitian form")
    C = compound(G, k)
    assert C == C.H
    return C


def flip_signature(E: TripleE) -> TripleE:
    """Signature (n, m) -> (m, n) by conjugating the K-action.

    For a normalized triple with Siegel point z the conjugate structure has
    Siegel point z^t.
    """
    z = E.z
    alpha = np.hstack([np.eye(E.m), z.T])
    return TripleE(E.ctx, E.m, E.r, sign_matrix(E.m, E.n, E.ctx), alpha)


def _wedge_order(r: int, k: int) -> list[int]:
    """Positions in wedge_basis(r, k): subsets containing 0 first, then the rest."""
    basis = wedge_basis(r, k)
    return [i for i, S in enumerate(basis) if 0 in S] + [i for i, S in enumerate(basis) if 0 not in S]


def exterior_variety(E: TripleE, k: int, tol: float = DEFAULT_TOL) -> TripleE:
    """k-th exterior power of a triple of signature (1, r-1).

    The new Gram matrix is (-1)^(k-1) times the k-th compound, with wedge
    monomials containing the first basis vector moved to the front so it is
    exactly E_{n', r'-n'}.  The new alpha is the cokernel map of the k-th
    exterior power of Ker(alpha) -> L (x) C, rescaled in the target so its
    leading block is the identity.
    """
    r = E.r
    if E.n != 1:
        if E.n == r - 1 and E.gram == sign_matrix(r - 1, 1, E.ctx):
            E = flip_signature(normalize_triple(E, tol))
        else:
            raise WrongSignatureN(f"exterior powers need n in {{1, r-1}}, got n={E.n}, r={r}")
    if not 1 <= k <= r:
        raise BadK(f"k={k} outside 1..{r}")
    E = normalize_triple(E, tol)
    if k == 1:
        return E
    order = _wedge_order(r, k)
    n_new, r_new = comb(r - 1, k - 1), comb(r, k)
    gram = exterior_hermitian(E.gram, k).scale((-1) ** (k - 1))
    gram = gram.submatrix(order, order)
    assert gram == sign_matrix(n_new, r_new - n_new, E.ctx)

    lam = ker_alpha_basis(E, tol)
    seq = exterior_sequence(ExactSeq(r, lam, E.alpha), k, tol)
    alpha = seq.quotient_map[:, order]
    lead = alpha[:, :n_new]
    if np.linalg.cond(lead) > 1 / tol:
        raise WrongSignatureN("exterior power has no invertible leading block")
    alpha = np.linalg.solve(lead, alpha)
    alpha[:, :n_new] = np.eye(n_new)
    return TripleE(E.ctx, n_new, r_new, gram, alpha)
