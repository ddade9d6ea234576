from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from miqf.field import FieldContext, KElement
from miqf.linalg import KMatrix
from miqf.siegel import gu_validate

DELTAS = (1, 2, 3, 7)


def random_k(ctx, rng, bound=5):
    a, b = rng.integers(-bound, bound + 1, size=2)
    den = int(rng.integers(1, 4))
    return KElement(Fraction(int(a), den), Fraction(int(b), den), ctx)


def random_kmatrix(rows, cols, ctx, rng, bound=5):
    return KMatrix([[random_k(ctx, rng, bound) for _ in range(cols)] for _ in range(rows)], ctx)


def random_invertible_kmatrix(r, ctx, rng):
    while True:
        P = random_kmatrix(r, r, ctx, rng, bound=3)
        if P.det():
            return P


def _unit(ctx, rng):
    """Norm-one element (a + b s) / (a - b s)."""
    while True:
        a, b = (int(x) for x in rng.integers(-3, 4, size=2))
        x = ctx(a, b)
        if x:
            return x / x.conj()


def _generator(n, m, ctx, rng):
    r = n + m
    g = [[ctx.one if i == j else ctx.zero for j in range(r)] for i in range(r)]
    kind = rng.integers(0, 3 if n < 2 else 4)
    if kind == 0:
        for i in range(r):
            g[i][i] = _unit(ctx, rng)
    elif kind in (1, 2):
        # hyperbolic rotation between a + index and a - index
        t = Fraction(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        if t == 1:
            t = Fraction(3, 2)
        p, q = (t * t + 1) / (2 * t), (t * t - 1) / (2 * t)
        i, j = int(rng.integers(0, n)), n + int(rng.integers(0, m))
        u = _unit(ctx, rng)
        g[i][i], g[j][j] = ctx(p), ctx(p)
        g[i][j], g[j][i] = u * q, u.conj() * q
    else:
        # rational rotation inside the positive block
        a, b = (int(x) for x in rng.integers(1, 5, size=2))
        c, s = Fraction(a * a - b * b, a * a + b * b), Fraction(2 * a * b, a * a + b * b)
        g[0][0], g[0][1], g[1][0], g[1][1] = ctx(c), ctx(-s), ctx(s), ctx(c)
    return KMatrix(g, ctx)


def random_gu(n, m, ctx, rng, length=3, scalar=True):
    """Random element of the similitude group of E_{n,m} over K."""
    g = KMatrix.identity(n + m, ctx)
    for _ in range(length):
        g = g @ _generator(n, m, ctx, rng)
    if scalar:
        g = g.scale(random_nonzero(ctx, rng))
    return gu_validate(g, n, m, ctx)


def random_nonzero(ctx, rng):
    while True:
        x = random_k(ctx, rng, bound=2)
        if x:
            return x


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


fractions = st.fractions(min_value=-10**4, max_value=10**4, max_denominator=10**4)
deltas = st.sampled_from([1, 2, 3, 5, 6, 7, 11])


@st.composite
def k_pairs(draw, n=2):
    ctx = FieldContext(draw(deltas))
    return ctx, [KElement(draw(fractions), draw(fractions), ctx) for _ in range(n)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
