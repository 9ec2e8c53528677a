from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from kgfint.cohomology import cohomological_index
from kgfint.e2r import (
    HeunShapeError,
    build_model,
    cocycle,
    comparison_report,
    heun_transform,
    lambda_rep,
    periodicity_check,
    printed_heun_params,
    reduce_equation,
    series_solution,
    verify_dfunction,
)
from kgfint.e2r.dfunction import DFunction, dfunction_residuals, random_point
from kgfint.e2r.heun import IndicialClash
from kgfint.e2r.lambda_rep import IQ
from kgfint.e2r.reduce import ReducedODE
from kgfint.kgf import eta_eps, symmetry_ops
from kgfint.lie import e2r_algebra

from strategies import small_rationals

nonzero = small_rationals.filter(lambda x: x != 0)
integers = st.integers(-4, 4).map(Fraction)
DEFAULT = dict(eps=1, vareps=2, J1=1, J2=Fraction(1, 2), m=1)


def sympy_reduced(eps, V, J1, J2, m):
    """Independent route: apply the operators to a generic psi(q) with sympy."""
    q = sp.symbols("q")
    psi = sp.Function("psi")(q)
    l1 = lambda f: sp.diff(f, q)
    l2 = lambda f: sp.I * (sp.diff(f, q) + eps * q * f)
    l3 = lambda f: sp.I * (q * sp.diff(f, q) + eps * q**2 / 2 * f + J1 * f)
    l4 = lambda f: sp.I * J2 * f
    expr = sp.expand(-V * l1(l1(psi)) - l2(l2(psi)) - l3(l3(psi)) + l4(l4(psi)) + m**2 * psi)
    d2 = expr.coeff(sp.diff(psi, q, 2))
    rest = sp.expand(expr - d2 * sp.diff(psi, q, 2))
    d1 = rest.coeff(sp.diff(psi, q))
    d0 = sp.expand(rest - d1 * sp.diff(psi, q)).coeff(psi)
    return q, [sp.Poly(sp.expand(c), q) for c in (d2, d1, d0)]


def as_fracs(poly):
    return [Fraction(int(sp.numer(c)), int(sp.denom(c))) for c in reversed(poly.all_coeffs())]


def trimmed(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


# -- lambda-representation --------------------------------------------------------------------


@given(integers, small_rationals, nonzero)
@settings(max_examples=50)
def test_lambda_relations_random(J1, J2, eps):
    assert lambda_rep(J1, J2, eps).check_relations() == []


def test_lambda_symbolic_relations_and_rejections():
    assert lambda_rep().check_relations() == []
    with pytest.raises(ValueError, match="integer"):
        lambda_rep(J1=Fraction(1, 2))
    with pytest.raises(ValueError):
        lambda_rep(J1=1, eps=0)


def test_lambda_mutation_detected():
    rep = lambda_rep(1, 1, 1)
    rep.ops[1] = rep.ops[1] * 2
    assert rep.check_relations()


def test_polarization_dimension_matches_index():
    # the representation acts in a single variable q, i.e. half the generic orbit dimension
    res = cohomological_index(e2r_algebra(), cocycle((1, 0, 0, 0)))
    assert res.certified_upper and res.index == 2
    assert res.q_dim == 1
    assert len(lambda_rep(1, 1, 1).ops[0].chart.names) - 5 == res.q_dim


# -- reduction ----------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "eps,vareps,J1,J2,m",
    [
        (1, 2, 1, Fraction(1, 2), 1),
        (2, 3, 0, 1, 2),
        (Fraction(1, 2), 2, -1, Fraction(1, 3), 0),
        (-1, 5, 2, 0, Fraction(3, 2)),
        (3, Fraction(3, 2), 3, 2, 1),
    ],
)
def test_reduced_ode_against_sympy(eps, vareps, J1, J2, m):
    ode = reduce_equation(lambda_rep(J1, J2, eps), vareps, m)
    V = sp.Rational(Fraction(vareps).numerator, Fraction(vareps).denominator) ** 2
    r = lambda x: sp.Rational(Fraction(x).numerator, Fraction(x).denominator)
    _, polys = sympy_reduced(r(eps), V, r(J1), r(J2), r(m))
    assert [trimmed(p) for p in ode.q_polynomials()] == [trimmed(as_fracs(p)) for p in polys]


params = st.tuples(nonzero, small_rationals.map(abs).map(lambda v: v + 2), integers, small_rationals, small_rationals)


@given(params)
@settings(max_examples=10)
def test_reduce_then_substitute_commutes(p):
    eps, vareps, J1, J2, m = p
    symbolic = reduce_equation(lambda_rep())
    a = symbolic.specialize(eps=eps, V=vareps**2, J1=J1, J2=J2, m=m)
    b = reduce_equation(lambda_rep(J1, J2, eps), vareps, m)
    assert a.coefficients == b.coefficients


def test_symbolic_coefficients_closed_form():
    ode = reduce_equation(lambda_rep())
    from kgfint.e2r import PCHART

    q, eps, V, j1, j2, m = PCHART.coords()
    assert ode.d2 == 1 - V + q * q
    assert ode.d1 == q * (1 + 2 * eps + 2 * j1 + eps * q * q)
    assert ode.d0 == eps + j1 * j1 - j2 * j2 + m * m + (eps + eps * eps + eps * j1) * q * q + eps * eps * q**4 / 4
    assert set(ode.free_parameters()) == {"eps", "V", "J1", "J2", "m"}


def test_charge_free_reduction():
    ode = reduce_equation(lambda_rep()).specialize(eps=0, J1=0)
    from kgfint.e2r import PCHART

    q, _, V, _, j2, m = PCHART.coords()
    assert ode.d1 == q and ode.d0 == m * m - j2 * j2 and ode.d2 == 1 - V + q * q
    rep = comparison_report(ode, {"eps": 0, "J1": 0})
    assert rep["resolved"]["all_match"]


def test_printed_mismatch_is_reported_term_by_term():
    ode = reduce_equation(lambda_rep())
    rep = comparison_report(ode)
    res = rep["resolved"]
    assert res["d2"]["match"] and res["d1"]["match"] and not res["d0"]["match"]
    monos = {m["monomial"] for m in res["d0"]["mismatches"]}
    assert monos == {"q^2*eps^2", "q^4*eps^2"}
    assert not rep["literal"]["d2"]["match"]


# -- Heun transform -------------------------------------------------------------------------------


def test_default_heun_parameters():
    ode = reduce_equation(lambda_rep(1, Fraction(1, 2), 1), 2, 1)
    hp = heun_transform(ode, **DEFAULT)
    assert (hp.gamma, hp.delta, hp.eta, hp.c0, hp.kappa) == (3, Fraction(-9, 16), Fraction(9, 16), Fraction(17, 16), Fraction(1, 4))
    assert all(v["match"] for v in hp.report["printed_vs_derived"].values())
    assert hp.report["exponent_readings"]["charge/4"]["match"]


@given(params.filter(lambda p: p[0] > 0))
@settings(max_examples=15)
def test_heun_matches_printed_formulas(p):
    eps, vareps, J1, J2, m = p
    ode = reduce_equation(lambda_rep(J1, J2, eps), vareps, m)
    hp = heun_transform(ode, vareps, eps, J1, J2, m)
    printed = printed_heun_params(vareps, eps, J1, J2, m)
    assert (hp.gamma, hp.delta, hp.eta) == (printed["gamma"], printed["delta"], printed["eta"])
    assert hp.kappa == eps / 4


def test_heun_shape_against_sympy():
    q, z = sp.symbols("q z")
    theta = sp.Function("theta")
    V, eps, J1, J2, m = 4, 1, 1, sp.Rational(1, 2), 1
    _, (d2, d1, d0) = sympy_reduced(eps, V, J1, J2, m)
    hp = heun_transform(reduce_equation(lambda_rep(J1, J2, eps), 2, m), 2)
    kappa = sp.Rational(hp.kappa.numerator, hp.kappa.denominator)
    psi = sp.exp(-kappa * q**2) * theta(q**2 / (V - 1))
    L = d2.as_expr() * sp.diff(psi, q, 2) + d1.as_expr() * sp.diff(psi, q) + d0.as_expr() * psi
    L = sp.simplify(L * sp.exp(kappa * q**2))
    zsym = sp.Symbol("zz")
    L = L.subs(q**2 / (V - 1), zsym).doit()
    L = sp.expand(L.subs(q, sp.sqrt((V - 1) * zsym)))
    t0 = theta(zsym)
    t1 = sp.Derivative(theta(zsym), zsym)
    t2 = sp.Derivative(theta(zsym), (zsym, 2))
    L = L.replace(lambda e: isinstance(e, sp.Subs), lambda e: e.doit())
    P2 = sp.expand(L.coeff(t2))
    P1 = sp.expand((L - P2 * t2).coeff(t1))
    P0 = sp.expand((L - P2 * t2 - P1 * t1).coeff(t0))
    lead = sp.Poly(P2, zsym).all_coeffs()[0]
    A = sp.Rational(hp.A.numerator, hp.A.denominator)
    assert sp.expand(P2 / lead - zsym * (zsym - 1)) == 0
    assert sp.expand(P1 / lead - (A * zsym - sp.Rational(1, 2))) == 0
    delta = sp.Rational(hp.delta.numerator, hp.delta.denominator)
    c0 = sp.Rational(hp.c0.numerator, hp.c0.denominator)
    assert sp.expand(P0 / lead - (delta * zsym + c0)) == 0


def test_heun_rejects_non_confluent_shape():
    from kgfint.e2r import PCHART

    q = PCHART.variable(IQ)
    bad = ReducedODE(1 - PCHART.const(4) + q * q, q * 3, q**3 + 1)
    with pytest.raises(HeunShapeError) as info:
        heun_transform(bad, 2)
    assert "P0" in info.value.dump or "poly" in info.value.dump


def test_series_recurrence_and_exponents():
    hp = heun_transform(reduce_equation(lambda_rep(1, Fraction(1, 2), 1), 2, 1), 2)
    for s in (0, Fraction(1, 2)):
        ser = series_solution(hp, s, 40)
        assert ser.recurrence_residual < 1e-14
        # exact: the operator applied to the truncated series leaves only powers z^(s+k), k >= N
        c = ser.coeffs
        get = lambda n: c[n] if 0 <= n < len(c) else Fraction(0)
        for k in range(40):
            p = k + s
            coef = (
                (p - 1) * p * get(k)
                - (p + 1) * p * get(k + 1)
                + hp.A * p * get(k)
                - Fraction(1, 2) * (p + 1) * get(k + 1)
                + hp.delta * get(k - 1)
                + hp.c0 * get(k)
            )
            assert coef == 0, k
    with pytest.raises(IndicialClash):
        series_solution(hp, Fraction(1, 3))


def test_series_with_vanishing_data():
    hp = heun_transform(reduce_equation(lambda_rep(1, Fraction(1, 2), 1), 2, 1), 2)
    hp.c0, hp.delta = Fraction(0), Fraction(0)
    ser = series_solution(hp, 0, 20)
    assert ser.coeffs[0] == 1 and all(c == 0 for c in ser.coeffs[1:])
    assert all(c == 0 for c in series_solution(hp, 0, 20, c_first=0).coeffs)


# -- D-function --------------------------------------------------------------------------------------


def test_dfunction_default_report():
    rep = verify_dfunction(100, seed=0)
    assert rep.passed and rep.max_residual < 1e-10 and rep.normalization_exact


def test_dfunction_charge_mismatch_fails():
    import random

    from kgfint.e2r import E2RConfig, field_config

    model = build_model()
    cfg = field_config(model, E2RConfig(mu=(1, 0, 0, 0), eps=1))
    eta_ops, xi_ops = eta_eps(model, cfg), symmetry_ops(model, cfg)
    pt = random_point(random.Random(3))
    other_weight = DFunction(0.2 + 0.1j, -0.3 + 0.5j, Fraction(2), Fraction(1, 2), Fraction(1))
    assert max(abs(r) for r in dfunction_residuals(other_weight, eta_ops, xi_ops, pt)) < 1e-10
    wrong_charge = DFunction(0.2 + 0.1j, -0.3 + 0.5j, Fraction(1), Fraction(1, 2), Fraction(2))
    assert max(abs(r) for r in dfunction_residuals(wrong_charge, eta_ops, xi_ops, pt)) > 1e-3


def test_periodicity_integer_weight_only():
    assert periodicity_check(1)
    assert periodicity_check(-2)
    assert not periodicity_check(Fraction(1, 2))
