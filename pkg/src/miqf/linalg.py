"""Matrices over K (exact) and over C (double precision).

Exact matrices are :class:`KMatrix`.  Complex matrices are plain 2-D
``numpy.complex128`` arrays; :func:`as_cmatrix` validates them.

Hermitian forms are linear in the first argument and conjugate-linear in the
second, so the Gram matrix of a form restricted to the columns of ``B`` is
``B.T @ G @ conj(B)`` (see :func:`restrict_form`).
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadShape, MixedDelta, NotHermitian, NotNormalizable, WrongSignature
from .field import FieldContext, KElement

__all__ = [
    "KMatrix",
    "Signature",
    "as_cmatrix",
    "conj_transpose",
    "gram_normalize",
    "hermitian_signature_exact",
    "kernel_basis",
    "posdef_check",
    "restrict_form",
    "sign_matrix",
]


class KMatrix:
    """Immutable dense matrix with entries in a quadratic field."""

    __slots__ = ("entries", "ctx", "rows", "cols")

    def __init__(self, entries: Sequence[Sequence], ctx: FieldContext):
        rows = tuple(tuple(ctx.coerce(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise BadShape("KMatrix needs at least one row and one column")
        if any(len(row) != len(rows[0]) for row in rows):
            raise BadShape("ragged KMatrix rows")
        self.entries = rows
        self.ctx = ctx
        self.rows = len(rows)
        self.cols = len(rows[0])

    @classmethod
    def _trusted(cls, rows, ctx):
        m = cls.__new__(cls)
        m.entries = tuple(tuple(r) for r in rows)
        m.ctx = ctx
        m.rows = len(m.entries)
        m.cols = len(m.entries[0])
        return m

    @classmethod
    def identity(cls, r: int, ctx: FieldContext) -> KMatrix:
        return cls.diag([1] * r, ctx)

    @classmethod
    def zeros(cls, rows: int, cols: int, ctx: FieldContext) -> KMatrix:
        z = ctx.zero
        return cls._trusted([[z] * cols for _ in range(rows)], ctx)

    @classmethod
    def diag(cls, values, ctx: FieldContext) -> KMatrix:
        values = [ctx.coerce(v) for v in values]
        z = ctx.zero
        return cls._trusted(
            [[values[i] if i == j else z for j in range(len(values))] for i in range(len(values))],
            ctx,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> KElement:
        i, j = ij
        return self.entries[i][j]

    def __iter__(self):
        return iter(self.entries)

    def _check(self, other: KMatrix):
        if not isinstance(other, KMatrix):
            raise TypeError(f"expected KMatrix, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise MixedDelta(f"delta={self.ctx.delta} vs delta={other.ctx.delta}")

    def __add__(self, other):
        self._check(other)
        if other.shape != self.shape:
            raise BadShape(f"shape mismatch {self.shape} vs {other.shape}")
        return KMatrix._trusted(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.ctx
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return KMatrix._trusted([[-x for x in r] for r in self.entries], self.ctx)

    def scale(self, k) -> KMatrix:
        k = self.ctx.coerce(k)
        return KMatrix._trusted([[k * x for x in r] for r in self.entries], self.ctx)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise BadShape(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries))
        z = self.ctx.zero
        out = []
        for row in self.entries:
            out_row = []
            for col in cols:
                acc = z
                for x, y in zip(row, col):
                    if x and y:
                        acc = acc + x * y
                out_row.append(acc)
            out.append(out_row)
        return KMatrix._trusted(out, self.ctx)

    def __eq__(self, other):
        if not isinstance(other, KMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.entries == other.entries

    def __hash__(self):
        return hash((self.entries, self.ctx))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"KMatrix([{body}], delta={self.ctx.delta})"

    @property
    def T(self) -> KMatrix:
        return KMatrix._trusted(list(zip(*self.entries)), self.ctx)

    def conj(self) -> KMatrix:
        return KMatrix._trusted([[x.conj() for x in r] for r in self.entries], self.ctx)

    @property
    def H(self) -> KMatrix:
        """Conjugate transpose."""
        return KMatrix._trusted([[x.conj() for x in col] for col in zip(*self.entries)], self.ctx)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> KMatrix:
        return KMatrix._trusted([[self.entries[i][j] for j in cols] for i in rows], self.ctx)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> KMatrix:
        return self.submatrix(range(r0, r1), range(c0, c1))

    def embed(self) -> np.ndarray:
        """Image under the fixed complex embedding of the context."""
        return np.array([[complex(x) for x in r] for r in self.entries], dtype=np.complex128)

    def is_rational_multiple_of(self, other: KMatrix) -> Fraction | None:
        """Return mu in Q with self == mu*other, or None."""
        self._check(other)
        mu = None
        for x, y in zip(self._flat(), other._flat()):
            if not y:
                if x:
                    return None
                continue
            q = x / y
            if not q.is_rational():
                return None
            if mu is None:
                mu = q.a
            elif q.a != mu:
                return None
        return Fraction(0) if mu is None else mu

    def _flat(self):
        for r in self.entries:
            yield from r

    def det(self) -> KElement:
        """Exact determinant by Gaussian elimination over K."""
        if self.rows != self.cols:
            raise BadShape("determinant of a non-square matrix")
        a = [list(r) for r in self.entries]
        n = self.rows
        det = self.ctx.one
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c]), None)
            if p is None:
                return self.ctx.zero
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            piv = a[c][c]
            det = det * piv
            inv = piv.inverse()
            for i in range(c + 1, n):
                if a[i][c]:
                    f = a[i][c] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return det


def sign_matrix(n: int, m: int, ctx: FieldContext) -> KMatrix:
    """E_{n,m} = diag(1 (n times), -1 (m times))."""
    return KMatrix.diag([1] * n + [-1] * m, ctx)


def as_cmatrix(x) -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise BadShape(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise BadShape("complex matrix has non-finite entries")
    return a


def conj_transpose(M):
    if isinstance(M, KMatrix):
        return M.H
    return np.conj(np.asarray(M)).T


def restrict_form(G, B):
    """Gram matrix of the form G on the columns of B: ``B^T G conj(B)``."""
    if isinstance(G, KMatrix) and isinstance(B, KMatrix):
        return B.T @ G @ B.conj()
    G = G.embed() if isinstance(G, KMatrix) else np.asarray(G)
    B = B.embed() if isinstance(B, KMatrix) else np.asarray(B)
    return B.T @ G @ np.conj(B)


class Signature(NamedTuple):
    plus: int
    minus: int
    null: int


def _check_hermitian_exact(G: KMatrix):
    if G.rows != G.cols:
        raise BadShape(f"Gram matrix must be square, got {G.shape}")
    if G != G.H:
        raise NotHermitian("G differs from its conjugate transpose")


def _congruence_diagonalize(G: KMatrix) -> tuple[list[Fraction], list[list[KElement]]]:
    """Return (d, P) with P^* G P = diag(d), exactly over K.

    Column operations on P are mirrored as congruences on the working Gram
    matrix.  When every remaining diagonal entry vanishes but an off-diagonal
    one does not, x_i is replaced by x_i + k*x_j with k in {1, s}; the new
    diagonal entry is Tr(k*g_ij) (up to conjugation), and 2a, -2*b*delta
    cannot both vanish.
    """
    ctx = G.ctx
    r = G.rows
    A = [list(row) for row in G.entries]
    P = [[ctx.one if i == j else ctx.zero for j in range(r)] for i in range(r)]

    def col_axpy(j, t, p):
        # column j <- column j - t * column p, on P and as congruence on A
        for i in range(r):
            P[i][j] = P[i][j] - t * P[i][p]
        for i in range(r):
            A[i][j] = A[i][j] - t * A[i][p]
        tc = t.conj()
        for i in range(r):
            A[j][i] = A[j][i] - tc * A[p][i]

    def swap(i, j):
        for row in P:
            row[i], row[j] = row[j], row[i]
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]

    for p in range(r):
        q = next((i for i in range(p, r) if A[i][i]), None)
        if q is None:
            pair = next(((i, j) for i in range(p, r) for j in range(p, r) if A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for k in (ctx.one, ctx.sqrt):
                # x_i <- x_i + k x_j  is  col_axpy(i, -k, j)
                if (k * A[i][j]).trace() != 0:
                    col_axpy(i, -k, j)
                    break
            q = i
        if q != p:
            swap(p, q)
        piv = A[p][p]
        inv = piv.inverse()
        for j in range(p + 1, r):
            if A[p][j]:
                col_axpy(j, A[p][j] * inv, p)
    d = []
    for i in range(r):
        x = A[i][i]
        assert x.is_rational(), "diagonal of a Hermitian form must be rational"
        d.append(x.a)
    return d, P


def hermitian_signature_exact(G: KMatrix) -> Signature:
    _check_hermitian_exact(G)
    d, _ = _congruence_diagonalize(G)
    return Signature(sum(x > 0 for x in d), sum(x < 0 for x in d), sum(x == 0 for x in d))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gram_normalize(G: KMatrix, n: int) -> KMatrix:
    """Return P over K with ``P^* G P == E_{n, r-n}`` exactly.

    Only diagonal entries whose absolute values are rational squares can be
    scaled to +-1; anything else raises NotNormalizable.
    """
    _check_hermitian_exact(G)
    ctx, r = G.ctx, G.rows
    target = sign_matrix(n, r - n, ctx)
    if G == target:
        return KMatrix.identity(r, ctx)
    d, P = _congruence_diagonalize(G)
    sig = Signature(sum(x > 0 for x in d), sum(x < 0 for x in d), sum(x == 0 for x in d))
    if sig != (n, r - n, 0):
        raise WrongSignature(f"signature {tuple(sig)} != ({n}, {r - n}, 0)")
    scales = []
    for x in d:
        root = _rational_sqrt(abs(x))
        if root is None:
            raise NotNormalizable(f"|{x}| is not a rational square")
        scales.append(1 / root)
    order = [i for i in range(r) if d[i] > 0] + [i for i in range(r) if d[i] < 0]
    out = [[P[i][j] * scales[j] for j in order] for i in range(r)]
    P = KMatrix._trusted(out, ctx)
    assert P.H @ G @ P == target
    return P


def _hermitian_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def posdef_check(M, tol: float = 1e-9) -> tuple[bool, float]:
    """Diagonally pivoted LDL* test for positive definiteness.

    Returns ``(is_posdef, min_pivot)``.  Elimination stops at the first pivot
    that is not above ``tol``; that pivot is included in ``min_pivot``.
    """
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise BadShape(f"expected a square matrix, got shape {A.shape}")
    if _hermitian_defect(A) > tol:
        raise NotHermitian(f"max |M - M*| = {_hermitian_defect(A):.3e} exceeds tol {tol}")
    n = A.shape[0]
    if n == 0:
        return True, float("inf")
    min_pivot = float("inf")
    for k in range(n):
        diag = A.diagonal().real[k:]
        p = k + int(np.argmax(diag))
        if p != k:
            A[[k, p]] = A[[p, k]]
            A[:, [k, p]] = A[:, [p, k]]
        piv = float(A[k, k].real)
        min_pivot = min(min_pivot, piv)
        if piv <= tol:
            return False, min_pivot
        col = A[k + 1 :, k] / piv
        A[k + 1 :, k + 1 :] -= np.outer(col, A[k, k + 1 :])
    return True, min_pivot


def kernel_basis(M, tol: float = 1e-9) -> np.ndarray:
    """Right kernel of M as columns, from the reduced row echelon form.

    Partial pivoting on magnitude; pivots with ``|p| <= tol`` count as zero.
    One basis vector per free column, in increasing column order, with a 1 in
    that free position.
    """
    R = np.array(M, dtype=np.complex128)
    if R.ndim == 1:
        R = R.reshape(1, -1)
    rows, cols = R.shape
    pivots = []
    row = 0
    for c in range(cols):
        if row == rows:
            break
        p = row + int(np.argmax(np.abs(R[row:, c])))
        if abs(R[p, c]) <= tol:
            R[row:, c] = 0
            continue
        R[[row, p]] = R[[p, row]]
        R[row] /= R[row, c]
        others = [i for i in range(rows) if i != row]
        R[others] -= np.outer(R[others, c], R[row])
        pivots.append(c)
        row += 1
    free = [c for c in range(cols) if c not in pivots]
    K = np.zeros((cols, len(free)), dtype=np.complex128)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, pc in enumerate(pivots):
            K[pc, j] = -R[i, f]
    return K


def numerical_rank(M, tol: float = 1e-9) -> int:
    M = np.asarray(M, dtype=np.complex128)
    return M.shape[1] - kernel_basis(M, tol).shape[1]
