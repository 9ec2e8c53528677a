import math
from fractions import Fraction

import numpy as np
import pytest

from kgfint.e2r import (
    SingularApproachError,
    heun_transform,
    integrate_reduced,
    lambda_rep,
    reduce_equation,
    reproducing_check,
    series_agreement,
    series_solution,
    skew_hermiticity_check,
    wronskian_check,
)
from kgfint.e2r.numerics import abel_wronskian


def setup(eps=1, vareps=2, J1=1, J2=Fraction(1, 2), m=1):
    ode = reduce_equation(lambda_rep(J1, J2, eps), vareps, m)
    return ode, heun_transform(ode, vareps, eps, J1, J2, m)


def test_round_trip_through_substitution():
    # series theta with its own theta'' (not the Heun right-hand side) rebuilt into psi(q)
    ode, hp = setup()
    ser = series_solution(hp, 0, 60)
    for q in np.linspace(0.1, 1.1, 20):
        z = hp.z_of_q(q)
        t, d1, d2 = ser.evaluate(complex(z))
        psi, dpsi, d2psi = hp.psi_derivatives(q, t, d1, d2)
        val, scale = ode.residual(q, psi, dpsi, d2psi)
        assert abs(val) / scale < 1e-7


@pytest.mark.parametrize(
    "p,N",
    [(dict(), 40), (dict(eps=2, vareps=3, J1=0, J2=1, m=2), 120), (dict(eps=Fraction(1, 2), J1=-1), 40)],
)
def test_integration_matches_series(p, N):
    # larger |delta| slows the coefficient decay, so the comparison series is taken longer
    ode, hp = setup(**p)
    ser = series_solution(hp, 0, N)
    sol = integrate_reduced(hp, ode, 0.1, 0.9)
    assert series_agreement(hp, sol, ser) < 1e-8
    assert sol.max_residual < 1e-8


def test_zero_initial_data_stays_zero():
    ode, hp = setup()
    sol = integrate_reduced(hp, ode, 0.2, 0.8, initial=(0, 0))
    assert np.all(sol.theta == 0) and np.all(sol.dtheta == 0)


@pytest.mark.parametrize("interval", [(0.1, 0.97), (0.5, 1.2), (-0.3, 0.4)])
def test_singular_points_refused(interval):
    ode, hp = setup()
    with pytest.raises(SingularApproachError):
        integrate_reduced(hp, ode, *interval, initial=(1, 0))


def test_backward_integration_agrees():
    ode, hp = setup()
    fwd = integrate_reduced(hp, ode, 0.1, 0.6)
    back = integrate_reduced(hp, ode, 0.6, 0.1, initial=(fwd.theta[-1], fwd.dtheta[-1]))
    assert abs(back.theta[-1] - fwd.theta[0]) < 1e-9 * max(1, abs(fwd.theta[0]))


def test_wronskian_follows_abel():
    ode, hp = setup()
    rep = wronskian_check(hp, ode)
    assert rep.min_abs > 1e-3
    assert rep.abel_deviation < 1e-8
    assert abel_wronskian(hp, 0.3, 0.3, 2 + 1j) == 2 + 1j


def test_csv_columns():
    ode, hp = setup()
    sol = integrate_reduced(hp, ode, 0.1, 0.5, n_out=5)
    lines = sol.to_csv().splitlines()
    assert lines[0] == "z,re_theta,im_theta,re_dtheta,im_dtheta,residual"
    assert len(lines) == 6


@pytest.mark.parametrize("eps", [1.0, 2.0])
def test_reproducing_kernel(eps):
    rep = reproducing_check(eps)
    assert rep["passed"]
    assert max(rep["max_deviation"].values()) < 1e-6


def test_reproducing_detects_wrong_normalisation(monkeypatch):
    from kgfint.e2r import numerics

    orig = numerics._kernel_integral
    monkeypatch.setattr(numerics, "_kernel_integral", lambda *a: (orig(*a)[0] * (1 + 1e-4), orig(*a)[1]))
    assert not reproducing_check(1.0)["passed"]


def test_generators_skew_hermitian():
    out = skew_hermiticity_check(1.0)
    assert out["l1"] < 1e-10 and out["l2"] < 1e-10


def test_series_radius_estimate():
    _, hp = setup()
    ser = series_solution(hp, 0, 40)
    assert 0.5 < ser.radius <= 1.0
    assert math.isfinite(abs(ser.evaluate(0.5)[0]))
