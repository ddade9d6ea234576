import math
from fractions import Fraction

import pytest
from hypothesis import given

from miqf.errors import DivisionByZero, MixedDelta
from miqf.field import FieldContext, k_arith, k_embed, k_galois_data, trace_dual_solve

from conftest import k_pairs


def test_arith_examples():
    K5 = FieldContext(5)
    # (1+s)(2-s) = 2 - s + 2s - s^2 = 2 + s + 5
    assert k_arith(K5(1, 1), K5(2, -1), "mul", K5) == K5(7, 1)
    K1 = FieldContext(1)
    assert k_arith(K1(1, 1), K1(1, 1), "div", K1) == K1.one
    x = K5(Fraction(3, 7), -2)
    assert k_arith(K5.zero, x, "add", K5) == x
    assert k_arith(x, x, "sub", K5) == K5.zero


def test_division_by_zero():
    K = FieldContext(3)
    with pytest.raises(DivisionByZero):
        k_arith(K(1, 1), K.zero, "div", K)
    with pytest.raises(ZeroDivisionError):
        K(2) / 0


def test_mixed_delta_rejected():
    with pytest.raises(MixedDelta):
        FieldContext(2)(1, 1) + FieldContext(3)(1, 1)
    with pytest.raises(MixedDelta):
        k_arith(FieldContext(2).one, FieldContext(2).one, "add", FieldContext(7))


@pytest.mark.parametrize("bad", [0, -3, 4, 12, 18])
def test_context_requires_squarefree_positive(bad):
    with pytest.raises(ValueError):
        FieldContext(bad)


def test_components_are_reduced():
    K = FieldContext(2)
    x = K(Fraction(4, 6), Fraction(-10, 4))
    assert (x.a.numerator, x.a.denominator) == (2, 3)
    assert (x.b.numerator, x.b.denominator) == (-5, 2)
    assert K(0, 0).a.denominator == 1


def test_galois_examples():
    K = FieldContext(6)
    assert k_galois_data(K(3, 2), K)[1] == 6
    K3 = FieldContext(3)
    conj, trace, norm = k_galois_data(K3.sqrt, K3)
    assert conj == K3(0, -1) and trace == 0 and norm == 3
    K1 = FieldContext(1)
    assert k_galois_data(K1(1, 1), K1)[2] == 2


def test_embed_examples():
    assert k_embed(FieldContext(7).one) == 1 + 0j
    K2 = FieldContext(2)
    assert k_embed(K2.sqrt, K2) == complex(0, math.sqrt(2))
    K3 = FieldContext(3)
    w = k_embed(K3(Fraction(1, 2), Fraction(-1, 2)), K3)
    assert w == pytest.approx(complex(0.5, -math.sqrt(3) / 2), abs=1e-15)


def test_embed_sign_choice():
    K = FieldContext(3, embedding_sign=-1)
    assert k_embed(K.sqrt).imag < 0
    assert K != FieldContext(3)


def test_trace_dual_examples():
    K2 = FieldContext(2)
    k0 = trace_dual_solve(4, 6, K2)
    assert k0 == K2(2, Fraction(-3, 2))
    assert (k0 * K2.one).trace() == 4 and (k0 * K2.sqrt).trace() == 6
    assert trace_dual_solve(0, 0, K2) == K2.zero
    assert trace_dual_solve(2, 0, FieldContext(11)) == FieldContext(11).one


@given(k_pairs(2))
def test_trace_additive_and_norm_multiplicative(data):
    ctx, (x, y) = data
    assert (x + y).trace() == x.trace() + y.trace()
    assert x.conj().trace() == x.trace()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * x.conj() == x.norm()


@given(k_pairs(2))
def test_field_axioms(data):
    ctx, (x, y) = data
    assert x * y == y * x
    assert x * (y + 1) == x * y + x
    if y:
        assert (x / y) * y == x


@given(k_pairs(2))
def test_embedding_is_a_ring_homomorphism(data):
    ctx, (x, y) = data
    assert abs(k_embed(x * y) - k_embed(x) * k_embed(y)) < 1e-12 * max(1.0, abs(k_embed(x)) * abs(k_embed(y)))
    assert abs(k_embed(x + y) - k_embed(x) - k_embed(y)) < 1e-9
    assert k_embed(x.conj()) == k_embed(x).conjugate()


@given(k_pairs(2))
def test_trace_dual_reproduces_functional(data):
    ctx, (x, k) = data
    g1, gs = (x * ctx.one).trace(), (x * ctx.sqrt).trace()
    k0 = trace_dual_solve(g1, gs, ctx)
    assert k0 == x
    assert (k0 * k).trace() == (x * k).trace()
