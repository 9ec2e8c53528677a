import cmath
from fractions import Fraction

import pytest
from hypothesis import given

from kgfint.rational import I
from kgfint.symb import Chart, ChartMismatch, TrigPolyExpr

from strategies import points, trig_chart, trig_exprs


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def test_pythagorean_identity_is_canonical():
    ch = Chart(2, 1)
    c, s = ch.cos(), ch.sin()
    assert c * c + s * s == 1
    assert c * c - s * s == ch.cos(2)
    assert s * c * 2 == ch.sin(2)


def test_printing_is_deterministic():
    ch = Chart(3, 2)
    x1, x2, x3 = ch.coords()
    e = x1 * ch.cos() + Fraction(1, 2) + x3 * x3 * ch.sin(2)
    assert str(e) == str(TrigPolyExpr(ch, dict(reversed(list(e.terms.items())))))


@given(trig_exprs(), trig_exprs(), points)
def test_products_match_numeric_evaluation(a, b, pt):
    assert close((a * b).eval_at(pt), a.eval_at(pt) * b.eval_at(pt))
    assert close((a + b).eval_at(pt), a.eval_at(pt) + b.eval_at(pt))


@given(trig_exprs(), trig_exprs(), trig_exprs())
def test_ring_laws_hold_exactly(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero


@given(trig_exprs(), points)
def test_derivatives_match_central_differences(a, pt):
    h = 1e-5
    for j in range(3):
        up = list(pt)
        dn = list(pt)
        up[j] += h
        dn[j] -= h
        fd = (a.eval_at(up) - a.eval_at(dn)) / (2 * h)
        assert abs(a.diff(j).eval_at(pt) - fd) < 1e-5 * max(1.0, abs(fd))


@given(trig_exprs(), trig_exprs())
def test_product_rule(a, b):
    for j in range(3):
        assert (a * b).diff(j) == a.diff(j) * b + a * b.diff(j)


@given(trig_exprs(max_pow=3))
def test_integrate_inverts_diff(a):
    for j in range(3):
        assert a.integrate(j).diff(j) == a


def test_periodic_antiderivative_by_parts():
    ch = Chart(1, 0)
    (x,) = ch.coords()
    f = x * x * ch.sin(2)
    F = f.integrate(0)
    assert F.diff(0) == f
    # known closed form: -x^2 cos 2x / 2 + x sin 2x / 2 + cos 2x / 4
    assert F == -(x * x) * ch.cos(2) / 2 + x * ch.sin(2) / 2 + ch.cos(2) / 4


@given(trig_exprs(), points)
def test_substitution_matches_evaluation(a, pt):
    for j in (0, 1):
        sub = a.subs(j, Fraction(1, 3))
        p = list(pt)
        p[j] = 1 / 3
        assert close(sub.eval_at(pt), a.eval_at(p))
    p = list(pt)
    p[2] = 0.0
    assert close(a.subs(2, 0).eval_at(pt), a.eval_at(p))


def test_periodic_substitution_only_at_zero():
    ch = trig_chart()
    with pytest.raises(ValueError):
        ch.cos().subs(2, 1)


def test_conjugate_and_constants():
    ch = trig_chart()
    x1 = ch.variable(0)
    e = x1 * I + 2
    assert e.conjugate() == 2 - x1 * I
    assert ch.const(3).is_constant and ch.const(3).constant_value() == 3
    assert not e.is_constant


def test_chart_mismatch_rejected():
    with pytest.raises(ChartMismatch):
        Chart(2).variable(0) + Chart(3).variable(0)
    with pytest.raises(ChartMismatch):
        Chart(2).cos()


def test_embed_adds_trailing_coordinate():
    ch = Chart(2, 1)
    big = Chart(3, 1)
    e = ch.variable(0) * ch.cos()
    emb = e.embed(big)
    assert emb == big.variable(0) * big.cos()
    assert not emb.depends_on(2)


@given(trig_exprs(), points)
def test_eval_is_complex_consistent(a, pt):
    assert close(a.conjugate().eval_at(pt), a.eval_at(pt).conjugate())
    assert isinstance(a.eval_at(pt), complex)
    assert cmath.isfinite(a.eval_at(pt))
