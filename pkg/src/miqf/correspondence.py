"""Abelian varieties with multiplication by K versus triples (L, H_L, alpha).

A variety is described by a Siegel point z: the K-basis x_1..x_r of the
rational lattice L sits in V = C^r as the rows of Y = [[E_n, z], [z^t, E_m]],
K acts on V by k on the first n coordinates and by conj(k) on the last m,
and the Riemann form is Omega(k1*x_i, k2*x_j) = Tr(k1 t_ij conj(k2)) with
T = sqrt(-delta) E_{n,m}.

A triple is a Gram matrix of H_L over K together with the complex n x r
matrix of alpha in the same K-basis.

Indices are 0-based throughout.

Polarization convention
-----------------------
With sqrt(-delta) embedded as +i*sqrt(delta), the positive Hermitian form
whose imaginary part is Omega is

    H(v, w) = Omega(v, i*w) + i*Omega(v, w),

conjugate-linear in ``v`` and linear in ``w``.  The form
Omega(i*v, w) + i*Omega(v, w) is negative definite for the same data.  All
Riemann checks go through :func:`riemann_hermitian`, and nothing else
decides the sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import (
    BadShape,
    InconsistentOmega,
    MIQFError,
    NotHermitian,
    NotInDomain,
    NotNormalized,
    RiemannCheckFailed,
    SingularLeadingBlock,
)
from .field import FieldContext, trace_dual_solve
from .linalg import (
    KMatrix,
    as_cmatrix,
    gram_normalize,
    hermitian_signature_exact,
    kernel_basis,
    numerical_rank,
    posdef_check,
    restrict_form,
    sign_matrix,
)
from .siegel import DEFAULT_TOL, SiegelPoint, siegel_contains


# ---------------------------------------------------------------------------
# the rational symplectic form


def _fraction_det(rows: list[list[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class OmegaForm:
    """Omega on the Q-basis (x_1..x_r, s*x_1..s*x_r) of L, s = sqrt(-delta)."""

    matrix: tuple[tuple[Fraction, ...], ...]
    ctx: FieldContext

    @property
    def r(self) -> int:
        return len(self.matrix) // 2

    def __getitem__(self, ab) -> Fraction:
        a, b = ab
        return self.matrix[a][b]

    def is_alternating(self) -> bool:
        M = self.matrix
        return all(M[a][a] == 0 for a in range(len(M))) and all(
            M[a][b] == -M[b][a] for a in range(len(M)) for b in range(a)
        )

    def det(self) -> Fraction:
        return _fraction_det([list(r) for r in self.matrix])

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.matrix])

    def scale(self, c) -> OmegaForm:
        c = Fraction(c)
        return OmegaForm(tuple(tuple(c * x for x in r) for r in self.matrix), self.ctx)


def omega_from_t(T: KMatrix) -> OmegaForm:
    """Omega(k_a x_i, k_b x_j) = Tr(k_a t_ij conj(k_b)) for k in {1, s}."""
    ctx, r = T.ctx, T.rows
    ks = [ctx.one] * r + [ctx.sqrt] * r
    idx = list(range(r)) * 2
    rows = tuple(
        tuple((ks[a] * T[idx[a], idx[b]] * ks[b].conj()).trace() for b in range(2 * r))
        for a in range(2 * r)
    )
    return OmegaForm(rows, ctx)


def omega_from_hermitian(G: KMatrix) -> OmegaForm:
    """Omega(l1, l2) = Tr(s * H_L(l1, l2)): the compatibility rule read right to left."""
    return omega_from_t(G.scale(G.ctx.sqrt))


def h_from_omega(omega: OmegaForm, ctx: FieldContext | None = None) -> KMatrix:
    """Recover the Gram matrix of H_L from Omega.

    For each pair (i, j) the Q-linear functional k -> Omega(k*x_i, x_j) is
    represented as Tr(k0 * k); then H_L(x_i, x_j) = k0 / s.
    """
    ctx = omega.ctx if ctx is None else ctx
    if not omega.is_alternating():
        raise InconsistentOmega("Omega is not alternating")
    r = omega.r
    s_inv = ctx.sqrt.inverse()
    G = KMatrix._trusted(
        [[trace_dual_solve(omega[i, j], omega[r + i, j], ctx) * s_inv for j in range(r)] for i in range(r)],
        ctx,
    )
    if G != G.H:
        raise InconsistentOmega("recovered H_L is not Hermitian")
    if omega_from_hermitian(G).matrix != omega.matrix:
        raise InconsistentOmega("Omega does not come from a Hermitian form on L")
    return G


def associated_hermitian(T: KMatrix) -> KMatrix:
    """The K-valued Hermitian form T / sqrt(-delta) attached to skew-Hermitian T."""
    return T.scale(T.ctx.sqrt.inverse())


# ---------------------------------------------------------------------------
# type (B)


def _star(k: complex, v: np.ndarray, n: int) -> np.ndarray:
    out = np.array(v, dtype=np.complex128)
    out[:n] *= k
    out[n:] *= np.conj(k)
    return out


@dataclass(frozen=True, eq=False)
class VarietyB:
    ctx: FieldContext
    n: int
    r: int
    z: SiegelPoint
    T: KMatrix = field(repr=False)
    Y: np.ndarray = field(repr=False)
    omega: OmegaForm = field(repr=False)

    @property
    def m(self) -> int:
        return self.r - self.n

    @property
    def delta(self) -> int:
        return self.ctx.delta

    def embed_lattice(self, coeffs) -> np.ndarray:
        """beta(sum k_i * x_i) in the e-coordinates of V."""
        coeffs = [self.ctx.coerce(k) for k in coeffs]
        v = np.zeros(self.r, dtype=np.complex128)
        for i, k in enumerate(coeffs):
            if k:
                v += _star(complex(k), self.Y[i], self.n)
        return v

    def period_matrix(self) -> np.ndarray:
        """Columns: beta(x_1)..beta(x_r), beta(s*x_1)..beta(s*x_r)."""
        s = complex(self.ctx.sqrt)
        cols = [self.Y[i] for i in range(self.r)] + [_star(s, self.Y[i], self.n) for i in range(self.r)]
        return np.array(cols).T


def variety_build(delta: int | FieldContext, n: int, r: int, z, tol: float = DEFAULT_TOL) -> VarietyB:
    ctx = delta if isinstance(delta, FieldContext) else FieldContext(delta)
    if not 1 <= n < r:
        raise BadShape(f"need 1 <= n < r, got n={n}, r={r}")
    if isinstance(z, SiegelPoint):
        zmat = z.z
    else:
        zmat = as_cmatrix(z)
    if zmat.shape != (n, r - n):
        raise BadShape(f"z must be {n}x{r - n}, got {zmat.shape}")
    point = SiegelPoint(zmat, tol)
    T = sign_matrix(n, r - n, ctx).scale(ctx.sqrt)
    assert T.H == -T
    assert tuple(hermitian_signature_exact(associated_hermitian(T))) == (n, r - n, 0)
    Y = np.block([[np.eye(n), point.z], [point.z.T, np.eye(r - n)]])
    Y.flags.writeable = False
    return VarietyB(ctx, n, r, point, T, Y, omega_from_t(T))


def omega_pair(V: VarietyB, k1, i: int, k2, j: int) -> Fraction:
    """Omega(k1*x_i, k2*x_j) = Tr(k1 t_ij conj(k2)), exactly."""
    k1, k2 = V.ctx.coerce(k1), V.ctx.coerce(k2)
    if not (0 <= i < V.r and 0 <= j < V.r):
        raise IndexError(f"basis index out of range 0..{V.r - 1}")
    return (k1 * V.T[i, j] * k2.conj()).trace()


def star_act(V: VarietyB, k, v) -> np.ndarray:
    """k*v: multiplication by k on V+ and by conj(k) on V-."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.shape != (V.r,):
        raise BadShape(f"vector must have {V.r} coordinates")
    return _star(complex(V.ctx.coerce(k)), v, V.n)


# ---------------------------------------------------------------------------
# type (E)


@dataclass(frozen=True, eq=False)
class TripleE:
    ctx: FieldContext
    n: int
    r: int
    gram: KMatrix
    alpha: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= self.r:
            raise BadShape(f"need 1 <= n <= r, got n={self.n}, r={self.r}")
        if self.gram.shape != (self.r, self.r):
            raise BadShape(f"gram must be {self.r}x{self.r}, got {self.gram.shape}")
        if self.gram.ctx != self.ctx:
            raise BadShape("gram lives in a different field")
        alpha = as_cmatrix(self.alpha)
        if alpha.shape != (self.n, self.r):
            raise BadShape(f"alpha must be {self.n}x{self.r}, got {alpha.shape}")
        alpha.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)

    @property
    def m(self) -> int:
        return self.r - self.n

    @property
    def delta(self) -> int:
        return self.ctx.delta

    def is_normalized(self, tol: float = DEFAULT_TOL) -> bool:
        return self.gram == sign_matrix(self.n, self.m, self.ctx) and bool(
            np.max(np.abs(self.alpha[:, : self.n] - np.eye(self.n))) <= tol
        )

    @property
    def z(self) -> np.ndarray:
        """Right block of alpha; the Siegel point when alpha = [E_n | z]."""
        return self.alpha[:, self.n :]


class ConjSpace:
    """The conjugate space i(W): the same vectors with conjugated scalars.

    ``vec`` holds the coordinates of w in W; scalars act through their
    conjugates, so ``c * ConjSpace(w) == ConjSpace(conj(c) * w)`` and the
    complex-linear coordinates of i(w) are ``conj(w)``.
    """

    __slots__ = ("vec",)

    def __init__(self, vec):
        self.vec = np.asarray(vec, dtype=np.complex128)

    def __rmul__(self, c):
        return ConjSpace(np.conj(c) * self.vec)

    def __add__(self, other):
        return ConjSpace(self.vec + other.vec)

    @property
    def coords(self) -> np.ndarray:
        return np.conj(self.vec)


def b_to_e(V: VarietyB) -> TripleE:
    alpha = np.hstack([np.eye(V.n), V.z.z])
    return TripleE(V.ctx, V.n, V.r, sign_matrix(V.n, V.m, V.ctx), alpha)


def _require_normalized(E: TripleE, tol: float):
    if np.max(np.abs(E.alpha[:, : E.n] - np.eye(E.n))) > tol:
        raise NotNormalized("left n x n block of alpha is not the identity")


def ker_alpha_basis(E: TripleE, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Columns lambda_i = x_{n+i} - sum_k z_ki x_k spanning Ker alpha."""
    _require_normalized(E, tol)
    return np.vstack([-E.z, np.eye(E.m)])


def ker_gram(E: TripleE, tol: float = DEFAULT_TOL) -> np.ndarray:
    """H_{L,C}(lambda_i, lambda_j); equals z^t conj(z) - E_m."""
    if E.gram != sign_matrix(E.n, E.m, E.ctx):
        raise NotNormalized("gram is not E_{n,m}")
    lam = ker_alpha_basis(E, tol)
    M = restrict_form(E.gram, lam)
    expected = E.z.T @ np.conj(E.z) - np.eye(E.m)
    assert np.max(np.abs(M - expected), initial=0.0) < 1e-12
    return M


def mu_basis(E: TripleE, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Columns mu_i = x_i - sum_k conj(z_ik) x_{n+k}."""
    _require_normalized(E, tol)
    return np.vstack([np.eye(E.n), -np.conj(E.z).T])


def mu_basis_orthogonality(E: TripleE, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    lam = ker_alpha_basis(E, tol)
    mu = mu_basis(E, tol)
    G = E.gram.embed()
    pairing = lam.T @ G @ np.conj(mu)
    worst = float(np.max(np.abs(pairing), initial=0.0))
    assert worst < 1e-12, f"H(lambda, mu) = {worst:.3e}"
    assert numerical_rank(np.hstack([lam, mu]).T, tol) == E.r
    return mu, worst


class Check(NamedTuple):
    passed: bool
    detail: dict


@dataclass
class ValidationReport:
    checks: dict[str, Check] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def add(self, name: str, passed: bool, **detail):
        self.checks[name] = Check(bool(passed), detail)

    def __getitem__(self, name: str) -> Check:
        return self.checks[name]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": {k: {"pass": c.passed, **c.detail} for k, c in self.checks.items()},
        }


def validate_triple(E: TripleE, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Run every condition a triple must satisfy; never raises on failure."""
    rep = ValidationReport()
    G = E.gram
    hermitian = G == G.H
    rep.add("hermitian", hermitian)
    if hermitian:
        sig = hermitian_signature_exact(G)
        rep.add("signature", tuple(sig) == (E.n, E.m, 0), found=list(sig), expected=[E.n, E.m, 0])
        try:
            gram_normalize(G, E.n)
            rep.add("normalizable", True)
        except MIQFError as exc:
            rep.add("normalizable", False, error=type(exc).__name__, message=str(exc))
    else:
        rep.add("signature", False, error="NotHermitian")
        rep.add("normalizable", False, error="NotHermitian")

    rank = numerical_rank(E.alpha, tol)
    rep.add("surjective", rank == E.n, rank=rank)

    K = kernel_basis(E.alpha, tol)
    if K.shape[1] != E.m:
        rep.add("kernel_posdef", False, kernel_dim=K.shape[1])
    elif K.shape[1] == 0:
        rep.add("kernel_posdef", True, kernel_dim=0, degenerate=True)
    else:
        Mk = -restrict_form(G.embed(), K)
        Mk = (Mk + Mk.conj().T) / 2
        ok, piv = posdef_check(Mk, tol)
        rep.add("kernel_posdef", ok, kernel_dim=K.shape[1], min_pivot=piv)
    return rep


def normalize_triple(E: TripleE, tol: float = DEFAULT_TOL) -> TripleE:
    """Rewrite E in a K-basis with Gram E_{n,m} and a target basis with alpha = [E_n | z]."""
    target = sign_matrix(E.n, E.m, E.ctx)
    alpha = E.alpha
    if E.gram != target:
        P = gram_normalize(E.gram, E.n)
        # new basis vectors are the columns of conj(P): their Gram is P^* G P
        alpha = alpha @ P.conj().embed()
    lead = alpha[:, : E.n]
    if np.linalg.cond(lead) > 1 / tol:
        raise SingularLeadingBlock("alpha(x_1), ..., alpha(x_n) do not span C^n")
    alpha = np.linalg.solve(lead, alpha)
    alpha[:, : E.n] = np.eye(E.n)
    return TripleE(E.ctx, E.n, E.r, target, alpha)


# ---------------------------------------------------------------------------
# polarization


class PolarizationCheck(NamedTuple):
    hermitian: np.ndarray
    min_pivot: float
    lattice_cond: float
    complex_defect: float
    positive: bool


def riemann_hermitian(period: np.ndarray, omega: OmegaForm) -> tuple[np.ndarray, float, float]:
    """Hermitian matrix of H(v, w) = Omega(v, i w) + i Omega(v, w) on V = C^r.

    ``period`` has the images of the 2r rational basis vectors as columns.
    Returns ``(H, cond, defect)`` where ``H(v, w) = v^* H w``, ``cond`` is
    the condition number of the real period matrix and ``defect`` measures
    the failure of Omega(i v, i w) = Omega(v, w).
    """
    r = period.shape[0]
    P = np.vstack([period.real, period.imag])
    cond = float(np.linalg.cond(P))
    Pinv = np.linalg.inv(P)
    W = Pinv.T @ omega.as_array() @ Pinv
    J = np.block([[np.zeros((r, r)), -np.eye(r)], [np.eye(r), np.zeros((r, r))]])
    defect = float(np.max(np.abs(J.T @ W @ J - W)))
    H = W[:r, r:] + 1j * W[:r, :r]
    return H, cond, defect


def check_polarization(period: np.ndarray, omega: OmegaForm, tol: float = DEFAULT_TOL) -> PolarizationCheck:
    H, cond, defect = riemann_hermitian(period, omega)
    if cond > 1 / tol:
        return PolarizationCheck(H, float("nan"), cond, defect, False)
    try:
        ok, piv = posdef_check(H, tol)
    except NotHermitian:
        ok, piv = False, float("nan")
    return PolarizationCheck(H, piv, cond, defect, ok)


def conj_embedding(E: TripleE, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Images of x_1..x_r, s*x_1..s*x_r under l -> (alpha(l), i(pi_alpha(l))).

    ``E`` must be normalized.  pi_alpha projects onto Ker alpha along its
    H-orthogonal complement; coordinates on i(Ker alpha) are taken in the
    basis i(lambda_1), ..., i(lambda_m).
    """
    lam = ker_alpha_basis(E, tol)
    G = E.gram.embed()
    s = complex(E.ctx.sqrt)
    U = np.hstack([np.eye(E.r), s * np.eye(E.r)])
    M = lam.T @ G @ np.conj(lam)
    # c^T = u^T G conj(lam) M^{-1} for each column u of U
    C = np.linalg.solve(M.T, (U.T @ G @ np.conj(lam)).T)
    lower = np.column_stack([ConjSpace(C[:, a]).coords for a in range(2 * E.r)])
    return np.vstack([E.alpha @ U, lower])


def e_to_b(E: TripleE, tol: float = DEFAULT_TOL) -> VarietyB:
    """Inverse construction: triple -> Siegel point -> variety.

    Also rebuilds V = C^n + i(Ker alpha) with the lattice image and checks
    that Omega, transported by the compatibility rule, polarizes it.
    """
    N = normalize_triple(E, tol)
    ok, piv = siegel_contains(N.z, tol)
    if not ok:
        raise NotInDomain(f"extracted z is outside the domain (min pivot {piv:.6g})")
    period = conj_embedding(N, tol)
    s = complex(N.ctx.sqrt)
    star_defect = max(
        float(np.max(np.abs(period[:, N.r + i] - _star(s, period[:, i], N.n)))) for i in range(N.r)
    )
    if star_defect > 1e3 * tol:
        raise RiemannCheckFailed(f"K-action on the image is not the *-action (defect {star_defect:.3e})")
    pol = check_polarization(period, omega_from_hermitian(N.gram), tol)
    if not pol.positive:
        raise RiemannCheckFailed(
            f"H = B + i*Omega is not positive definite (min pivot {pol.min_pivot:.6g}, "
            f"lattice cond {pol.lattice_cond:.3g}, complex defect {pol.complex_defect:.3e})"
        )
    return variety_build(N.ctx, N.n, N.r, N.z, tol)


def lattice_injectivity_rank(E: TripleE) -> int:
    """Real rank of alpha on the 2r-dimensional Q-span of the K-basis."""
    s = complex(E.ctx.sqrt)
    imgs = np.hstack([E.alpha, s * E.alpha])
    return int(np.linalg.matrix_rank(np.vstack([imgs.real, imgs.imag])))


__all__ = [
    "Check",
    "ConjSpace",
    "OmegaForm",
    "PolarizationCheck",
    "TripleE",
    "ValidationReport",
    "VarietyB",
    "associated_hermitian",
    "b_to_e",
    "check_polarization",
    "conj_embedding",
    "e_to_b",
    "h_from_omega",
    "ker_alpha_basis",
    "ker_gram",
    "lattice_injectivity_rank",
    "mu_basis",
    "mu_basis_orthogonality",
    "normalize_triple",
    "omega_from_hermitian",
    "omega_from_t",
    "omega_pair",
    "riemann_hermitian",
    "star_act",
    "validate_triple",
    "variety_build",
]

