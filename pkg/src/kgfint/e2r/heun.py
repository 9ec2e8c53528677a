"""Gaussian substitution psi = exp(-kappa q^2) theta(z), z = q^2/(V - 1), and
Frobenius series of the resulting confluent Heun equation

    z (z - 1) theta'' + ((3/2 + gamma) z - 1/2) theta' + (delta z + c0) theta = 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from ..rational import to_fraction
from .reduce import ReducedODE


class HeunShapeError(ValueError):
    def __init__(self, msg: str, dump: dict):
        super().__init__(f"{msg}: {dump}")
        self.dump = dump


class IndicialClash(ValueError):
    pass


# -- exact polynomial helpers (ascending coefficient lists) -------------------


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _add(*ps):
    n = max((len(p) for p in ps), default=0)
    return _trim([sum((p[i] for p in ps if i < len(p)), Fraction(0)) for i in range(n)])


def _mul(p, r):
    if not p or not r:
        return []
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(r):
            out[i + j] += a * b
    return _trim(out)


def _scale(p, c):
    return _trim([a * c for a in p])


def _even_to_z(p, V1):
    """Even polynomial in q -> polynomial in z with q^2 = (V - 1) z."""
    if any(c for c in p[1::2]):
        raise HeunShapeError("odd powers of q survive the substitution", {"poly": [str(c) for c in p]})
    return _trim([c * V1**k for k, c in enumerate(p[::2])])


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def transformed_coefficients(ode: ReducedODE, V: Fraction, kappa: Fraction):
    """(P2, P1, P0) in z of the theta-equation for a given exponent kappa."""
    d2, d1, d0 = ode.q_polynomials()
    s = 1 / (V - 1)
    q, q2 = [0, Fraction(1)], [0, 0, Fraction(1)]
    P2 = _scale(_mul(q2, d2), 4 * s * s)
    P1 = _add(_mul(d2, [2 * s, 0, -8 * kappa * s]), _scale(_mul(q, d1), 2 * s))
    P0 = _add(_mul(d2, [-2 * kappa, 0, 4 * kappa * kappa]), _scale(_mul(q, d1), -2 * kappa), d0)
    V1 = V - 1
    return _even_to_z(P2, V1), _even_to_z(P1, V1), _even_to_z(P0, V1)


def _coef(p, k):
    return p[k] if k < len(p) else Fraction(0)


@dataclass
class HeunParams:
    gamma: Fraction
    delta: Fraction
    eta: Fraction
    c0: Fraction
    kappa: Fraction
    V: Fraction
    alpha: Fraction = Fraction(0)
    betas: tuple = (Fraction(-1, 2), Fraction(1, 2))
    report: dict = field(default_factory=dict)

    @property
    def A(self) -> Fraction:
        return Fraction(3, 2) + self.gamma

    def rhs(self, z: complex, theta: complex, dtheta: complex) -> complex:
        """theta'' solved from the Heun equation."""
        A, d, c0 = float(self.A), float(self.delta), float(self.c0)
        return -((A * z - 0.5) * dtheta + (d * z + c0) * theta) / (z * (z - 1))

    def psi_derivatives(self, q: complex, theta: complex, dtheta: complex, d2theta: complex):
        """(psi, psi', psi'') in q from theta and its z-derivatives."""
        k, s = float(self.kappa), 1.0 / float(self.V - 1)
        f = cmath.exp(-k * q * q)
        df, d2f = -2 * k * q * f, (4 * k * k * q * q - 2 * k) * f
        g, dg, d2g = theta, 2 * q * s * dtheta, 4 * q * q * s * s * d2theta + 2 * s * dtheta
        return f * g, df * g + f * dg, d2f * g + 2 * df * dg + f * d2g

    def z_of_q(self, q: complex) -> complex:
        return q * q / float(self.V - 1)

    def to_json(self) -> dict:
        return {
            "gamma": str(self.gamma),
            "delta": str(self.delta),
            "eta": str(self.eta),
            "c0": str(self.c0),
            "kappa": str(self.kappa),
            "alpha": str(self.alpha),
            "betas": [str(b) for b in self.betas],
            "report": self.report,
        }


def printed_heun_params(vareps, eps, J1, J2, m) -> dict[str, Fraction]:
    V = to_fraction(vareps) ** 2
    eps, J1, J2, m = (to_fraction(x) for x in (eps, J1, J2, m))
    return {
        "gamma": J1 - Fraction(1, 2) + eps / 2 * (V + 1),
        "delta": -(eps * eps) / 16 * (V - 1) ** 2,
        "eta": (J1 * J1 - J2 * J2 + m * m - J1 + Fraction(3, 2)) / 4,
    }


def heun_transform(ode: ReducedODE, vareps, eps=None, J1=None, J2=None, m=None) -> HeunParams:
    """Derive (gamma, delta, eta) from a fully numeric reduced ODE.

    kappa is not assumed: the q^4 part of the theta-coefficient is quadratic in
    kappa and must vanish, and the theta'-coefficient must become linear. The
    optional parameters are used only for the printed-formula comparison.
    """
    V = to_fraction(vareps) ** 2
    if V <= 1:
        raise ValueError("metric parameter must exceed 1")
    # coefficient of z^2 in P0 as a quadratic in kappa, sampled at 0, 1, 2
    y = [_coef(transformed_coefficients(ode, V, Fraction(k))[2], 2) for k in range(3)]
    qa = (y[2] - 2 * y[1] + y[0]) / 2
    qb = y[1] - y[0] - qa
    qc = y[0]
    if qa == 0:
        roots = [-qc / qb] if qb else []
    else:
        root = _rational_sqrt(qb * qb - 4 * qa * qc)
        roots = [] if root is None else sorted({(-qb + root) / (2 * qa), (-qb - root) / (2 * qa)})
    kappa = None
    for r in roots:
        P2, P1, P0 = transformed_coefficients(ode, V, r)
        if len(P1) <= 2 and len(P0) <= 2:
            kappa = r
            break
    if kappa is None:
        P2, P1, P0 = transformed_coefficients(ode, V, Fraction(0))
        raise HeunShapeError(
            "no Gaussian exponent yields the confluent Heun shape",
            {"kappa_candidates": [str(r) for r in roots], "P2": [str(c) for c in P2], "P1": [str(c) for c in P1], "P0": [str(c) for c in P0]},
        )
    P2, P1, P0 = transformed_coefficients(ode, V, kappa)
    lead = _coef(P2, 2)
    dump = {"P2": [str(c) for c in P2], "P1": [str(c) for c in P1], "P0": [str(c) for c in P0]}
    if lead == 0 or _trim(P2) != _trim([0, -lead, lead]):
        raise HeunShapeError("theta'' coefficient is not proportional to z(z - 1)", dump)
    P1 = _scale(P1, 1 / lead)
    P0 = _scale(P0, 1 / lead)
    if _coef(P1, 0) != Fraction(-1, 2):
        raise HeunShapeError("theta' coefficient constant term is not -1/2", dump)
    gamma = _coef(P1, 1) - Fraction(3, 2)
    delta = _coef(P0, 1)
    c0 = _coef(P0, 0)
    eta = c0 - (gamma - 1) / 4
    report: dict = {
        "shape": "z(z-1) theta'' + ((3/2+gamma) z - 1/2) theta' + (delta z + c0) theta = 0",
        "kappa": str(kappa),
        "eta_convention": "c0 = (gamma - 1)/4 + eta",
        "eta_if_printed_sign": str(c0 + (gamma - 1) / 4),
    }
    if eps is not None:
        e = to_fraction(eps)
        report["exponent_readings"] = {
            "charge/4": {"value": str(e / 4), "match": e / 4 == kappa},
            "charge^2/4 (printed)": {"value": str(e * e / 4), "match": e * e / 4 == kappa},
            "vareps^2/4": {"value": str(V / 4), "match": V / 4 == kappa},
        }
    if None not in (eps, J1, J2, m):
        printed = printed_heun_params(to_fraction(vareps), eps, J1, J2, m)
        derived = {"gamma": gamma, "delta": delta, "eta": eta}
        report["printed_vs_derived"] = {
            k: {"derived": str(derived[k]), "printed": str(printed[k]), "match": derived[k] == printed[k]} for k in derived
        }
        report["eta_printed_sign_match"] = c0 + (gamma - 1) / 4 == printed["eta"]
    return HeunParams(gamma, delta, eta, c0, kappa, V, report=report)


# -- Frobenius series ----------------------------------------------------------


@dataclass
class SeriesSolution:
    s: Fraction
    coeffs: list[Fraction]
    N: int
    radius: float
    recurrence_residual: float

    def floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def evaluate(self, z: complex) -> tuple[complex, complex, complex]:
        """theta, theta', theta'' at z (principal branch of z^s)."""
        s = float(self.s)
        t = d1 = d2 = 0j
        for n, c in enumerate(self.floats()):
            p = n + s
            if c == 0:
                continue
            t += c * z**p
            if p != 0:
                d1 += c * p * z ** (p - 1)
            if p not in (0, 1):
                d2 += c * p * (p - 1) * z ** (p - 2)
        return t, d1, d2


def series_solution(hp: HeunParams, s=0, N: int = 40, c_first=1) -> SeriesSolution:
    """c_{n+1} (n+s+1)(n+s+1/2) = ((n+s)(n+s-1+A) + c0) c_n + delta c_{n-1}."""
    s = to_fraction(s)
    if s not in (0, Fraction(1, 2)):
        raise IndicialClash(f"exponent {s} is not a root of s(s - 1/2) = 0")
    if N < 10:
        raise ValueError("truncation N must be at least 10")
    A, c0, delta = hp.A, hp.c0, hp.delta
    c = [to_fraction(c_first)]
    prev = Fraction(0)
    for n in range(N):
        p = n + s
        den = (p + 1) * (p + Fraction(1, 2))
        if den == 0:
            raise IndicialClash(f"recurrence denominator vanishes at n = {n}")
        nxt = ((p * (p - 1 + A) + c0) * c[n] + delta * prev) / den
        prev = c[n]
        c.append(nxt)
    # float recheck of the recurrence
    fc = [float(x) for x in c]
    worst = 0.0
    fA, fc0, fd = float(A), float(c0), float(delta)
    for n in range(N):
        p = float(n + s)
        lhs = fc[n + 1] * (p + 1) * (p + 0.5)
        t1 = (p * (p - 1 + fA) + fc0) * fc[n]
        t2 = fd * (fc[n - 1] if n else 0.0)
        rhs = t1 + t2
        scale = max(abs(lhs) + abs(t1) + abs(t2), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    tail = [abs(fc[k] / fc[k + 1]) for k in range(N - 5, N) if fc[k + 1]]
    radius = min([1.0] + tail)
    return SeriesSolution(s, c, N, radius, worst)
