"""The bounded domain of n x m complex matrices z with E_n - z z^* > 0,
and the action of the similitude group of E_{n,m} on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BadShape,
    LeftDomain,
    NonPositiveMultiplier,
    NotInDomain,
    NotSimilitude,
    SingularDenominator,
)
from .field import FieldContext
from .linalg import KMatrix, as_cmatrix, posdef_check, sign_matrix

DEFAULT_TOL = 1e-9


def siegel_contains(z, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Membership test; returns ``(member, min_pivot)`` of ``E_n - z z^*``."""
    z = as_cmatrix(z)
    W = np.eye(z.shape[0]) - z @ z.conj().T
    W = (W + W.conj().T) / 2
    return posdef_check(W, tol)


def siegel_contains_dual(z, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Same domain, tested through ``E_m - z^t conj(z)``."""
    z = as_cmatrix(z)
    W = np.eye(z.shape[1]) - z.T @ z.conj()
    W = (W + W.conj().T) / 2
    return posdef_check(W, tol)


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    n: int
    m: int
    z: np.ndarray

    def __init__(self, z, tol: float = DEFAULT_TOL, *, check: bool = True):
        z = as_cmatrix(z)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "n", z.shape[0])
        object.__setattr__(self, "m", z.shape[1])
        z.flags.writeable = False
        if check:
            ok, piv = siegel_contains(z, tol)
            if not ok:
                raise NotInDomain(f"E_n - z z^* is not positive definite (min pivot {piv:.6g})")

    @classmethod
    def unchecked(cls, z) -> SiegelPoint:
        return cls(z, check=False)

    def __eq__(self, other):
        if not isinstance(other, SiegelPoint):
            return NotImplemented
        return self.z.shape == other.z.shape and bool(np.array_equal(self.z, other.z))

    def __repr__(self):
        return f"SiegelPoint(n={self.n}, m={self.m}, z={self.z.tolist()!r})"


def _largest_singular_value(M: np.ndarray, iters: int = 500, rtol: float = 1e-15) -> float:
    v = np.ones(M.shape[1], dtype=np.complex128) / np.sqrt(M.shape[1])
    s = 0.0
    for _ in range(iters):
        w = M.conj().T @ (M @ v)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        s_new = float(np.linalg.norm(M @ v))
        if abs(s_new - s) <= rtol * s_new:
            return s_new
        s = s_new
    return s


def siegel_sample(n: int, m: int, seed: int) -> SiegelPoint:
    """Deterministic random point of the domain.

    Draws M with entries uniform in the unit square, estimates its largest
    singular value s by power iteration and returns c*M/(s+1), c in (0, 1).
    """
    if n < 1 or m < 1:
        raise BadShape(f"need n, m >= 1, got ({n}, {m})")
    rng = np.random.default_rng(seed)
    M = rng.random((n, m)) + 1j * rng.random((n, m))
    s = _largest_singular_value(M)
    c = rng.random()
    return SiegelPoint(c * M / (s + 1), tol=0.0)


@dataclass(frozen=True, eq=False)
class GUElement:
    """gamma over K with gamma^* E_{n,m} gamma = multiplier * E_{n,m}."""

    gamma: KMatrix
    n: int
    m: int
    multiplier: Fraction

    @property
    def ctx(self) -> FieldContext:
        return self.gamma.ctx

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        g, n = self.gamma.embed(), self.n
        return g[:n, :n], g[:n, n:], g[n:, :n], g[n:, n:]

    def __matmul__(self, other: GUElement) -> GUElement:
        return gu_validate(self.gamma @ other.gamma, self.n, self.m, self.ctx)


def gu_validate(gamma: KMatrix, n: int, m: int, ctx: FieldContext | None = None) -> GUElement:
    """Check that gamma is a similitude of iT, T = sqrt(-delta) E_{n,m}.

    Since sqrt(-delta) is a central scalar this is the exact identity
    gamma^* E gamma = mu E with mu rational.
    """
    ctx = gamma.ctx if ctx is None else ctx
    r = n + m
    if gamma.shape != (r, r):
        raise BadShape(f"gamma must be {r}x{r}, got {gamma.shape}")
    if gamma.ctx != ctx:
        raise BadShape("gamma does not live in the given field")
    E = sign_matrix(n, m, ctx)
    mu = (gamma.H @ E @ gamma).is_rational_multiple_of(E)
    if mu is None:
        raise NotSimilitude("gamma^* E gamma is not a rational multiple of E")
    if mu <= 0:
        raise NonPositiveMultiplier(f"multiplier {mu} is not positive")
    return GUElement(gamma, n, m, mu)


def gu_act(g: GUElement, z: SiegelPoint, tol: float = DEFAULT_TOL) -> SiegelPoint:
    """z -> (Az + B)(Cz + D)^{-1} with the blocks embedded into C."""
    if (z.n, z.m) != (g.n, g.m):
        raise BadShape(f"point has shape {(z.n, z.m)}, group acts on {(g.n, g.m)}")
    A, B, C, D = g.blocks()
    num = A @ z.z + B
    den = C @ z.z + D
    if np.linalg.cond(den) > 1 / tol:
        raise SingularDenominator("Cz + D is numerically singular")
    w = np.linalg.solve(den.T, num.T).T
    ok, piv = siegel_contains(w, tol)
    if not ok:
        raise LeftDomain(f"image left the domain (min pivot {piv:.6g})")
    return SiegelPoint(w, tol)
