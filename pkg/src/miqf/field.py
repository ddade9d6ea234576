"""Exact arithmetic in an imaginary quadratic field K = Q(sqrt(-delta)).

Elements are pairs of :class:`fractions.Fraction` ``(a, b)`` standing for
``a + b*s`` with ``s**2 == -delta``.  Each element keeps a reference to the
:class:`FieldContext` it was created in; combining elements of different
contexts raises :class:`~miqf.errors.MixedDelta`.

>>> K = FieldContext(5)
>>> K(1, 1) * K(2, -1)
KElement(7, 1, delta=5)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import DivisionByZero, MixedDelta

Rational = Fraction

__all__ = [
    "FieldContext",
    "KElement",
    "Rational",
    "k_arith",
    "k_embed",
    "k_galois_data",
    "trace_dual_solve",
]


def _is_squarefree(d: int) -> bool:
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True)
class FieldContext:
    """The field Q(sqrt(-delta)) together with a fixed complex embedding.

    ``embedding_sign`` selects where sqrt(-delta) goes: ``+1`` maps it to
    ``+i*sqrt(delta)`` (the default used everywhere), ``-1`` to the complex
    conjugate.  The non-default choice exists so tests can check which
    statements survive the swap.
    """

    delta: int
    embedding_sign: int = 1

    def __post_init__(self):
        if not isinstance(self.delta, int) or self.delta < 1:
            raise ValueError(f"delta must be a positive integer, got {self.delta!r}")
        if not _is_squarefree(self.delta):
            raise ValueError(f"delta must be square-free, got {self.delta}")
        if self.embedding_sign not in (1, -1):
            raise ValueError("embedding_sign must be +1 or -1")

    def __call__(self, a=0, b=0) -> KElement:
        return KElement(a, b, self)

    @property
    def zero(self) -> KElement:
        return KElement(0, 0, self)

    @property
    def one(self) -> KElement:
        return KElement(1, 0, self)

    @property
    def sqrt(self) -> KElement:
        """The generator s = sqrt(-delta)."""
        return KElement(0, 1, self)

    def coerce(self, x) -> KElement:
        if isinstance(x, KElement):
            if x.ctx != self:
                raise MixedDelta(f"element of {x.ctx} used in {self}")
            return x
        if isinstance(x, (int, _RationalABC)):
            return KElement(x, 0, self)
        if isinstance(x, tuple) and len(x) == 2:
            return KElement(x[0], x[1], self)
        raise TypeError(f"cannot coerce {x!r} into {self}")


class KElement:
    """An element a + b*sqrt(-delta) of K.  Immutable and hashable."""

    __slots__ = ("a", "b", "ctx")

    def __init__(self, a, b, ctx: FieldContext):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("KElement is immutable")

    def _other(self, y) -> KElement | None:
        if isinstance(y, KElement):
            if y.ctx != self.ctx:
                raise MixedDelta(f"delta={self.ctx.delta} vs delta={y.ctx.delta}")
            return y
        if isinstance(y, (int, _RationalABC)):
            return KElement(y, 0, self.ctx)
        return None

    def __add__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return KElement(self.a + y.a, self.b + y.b, self.ctx)

    __radd__ = __add__

    def __sub__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return KElement(self.a - y.a, self.b - y.b, self.ctx)

    def __rsub__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return y - self

    def __neg__(self):
        return KElement(-self.a, -self.b, self.ctx)

    def __pos__(self):
        return self

    def __mul__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        d = self.ctx.delta
        return KElement(
            self.a * y.a - d * self.b * y.b,
            self.a * y.b + self.b * y.a,
            self.ctx,
        )

    __rmul__ = __mul__

    def inverse(self) -> KElement:
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero in K")
        return KElement(self.a / n, -self.b / n, self.ctx)

    def __truediv__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return self * y.inverse()

    def __rtruediv__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return y * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, y):
        if isinstance(y, KElement):
            return self.ctx == y.ctx and self.a == y.a and self.b == y.b
        if isinstance(y, (int, _RationalABC)):
            return self.b == 0 and self.a == y
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.ctx))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"KElement({self.a}, {self.b}, delta={self.ctx.delta})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt(-{self.ctx.delta})"
        if self.a == 0:
            return f"{self.b}*{root}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*{root}"

    def conj(self) -> KElement:
        return KElement(self.a, -self.b, self.ctx)

    def trace(self) -> Fraction:
        return 2 * self.a

    def norm(self) -> Fraction:
        return self.a * self.a + self.ctx.delta * self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def __complex__(self):
        return k_embed(self, self.ctx)


def k_arith(x: KElement, y: KElement, op: str, ctx: FieldContext) -> KElement:
    """Apply ``op`` (one of add, sub, mul, div) to two elements of ``ctx``."""
    x, y = ctx.coerce(x), ctx.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def k_galois_data(x: KElement, ctx: FieldContext) -> tuple[KElement, Fraction, Fraction]:
    x = ctx.coerce(x)
    return x.conj(), x.trace(), x.norm()


def k_embed(x: KElement, ctx: FieldContext | None = None) -> complex:
    ctx = x.ctx if ctx is None else ctx
    x = ctx.coerce(x)
    return complex(float(x.a), ctx.embedding_sign * float(x.b) * math.sqrt(ctx.delta))


def trace_dual_solve(gamma_at_1, gamma_at_sqrt, ctx: FieldContext) -> KElement:
    """Return the unique k0 with Tr(k0*k) = gamma(k) for the Q-linear gamma.

    gamma is given by its values at 1 and at s = sqrt(-delta).  Writing
    k0 = a0 + b0*s: Tr(k0) = 2*a0 and Tr(k0*s) = -2*b0*delta.
    """
    g1, gs = Fraction(gamma_at_1), Fraction(gamma_at_sqrt)
    return KElement(g1 / 2, -gs / (2 * ctx.delta), ctx)
