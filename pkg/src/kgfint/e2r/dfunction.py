"""Closed-form D-function on E(2) x R for F = e^1 ^ e^2 and its checks.

The exponent is polynomial in x1, x2, x4 and trigonometric in x3, so every
derivative needed for the defining first-order system is written out
analytically; no finite differences are involved.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..rational import to_fraction


@dataclass(frozen=True)
class DFunction:
    q: complex
    qbar_p: complex
    J1: Fraction
    J2: Fraction
    eps: Fraction

    @property
    def prefactor(self) -> float:
        return float(self.eps) / (2 * math.pi)

    def exponent(self, x) -> complex:
        x1, x2, x3, x4 = x
        e, b, q = float(self.eps), self.qbar_p, self.q
        w = cmath.exp(1j * x3)
        P = x1 + 1j * x2 + q
        Qm = x1 - 1j * x2 + q
        return (
            -e / 4 * (b * b - 2 * w * b * P + Qm * Qm + 2 * x2 * x2)
            + 1j * float(self.J1) * x3
            + 1j * float(self.J2) * x4
        )

    def __call__(self, x) -> complex:
        return self.prefactor * cmath.exp(self.exponent(x))

    def gradient(self, x) -> dict[str, complex]:
        """Derivatives of the exponent in x1..x4, q and qbar'."""
        x1, x2, x3, x4 = x
        e, b, q = float(self.eps), self.qbar_p, self.q
        w = cmath.exp(1j * x3)
        P = x1 + 1j * x2 + q
        Qm = x1 - 1j * x2 + q
        return {
            "x1": -e / 4 * (-2 * w * b + 2 * Qm),
            "x2": -e / 4 * (-2j * w * b - 2j * Qm + 4 * x2),
            "x3": -e / 4 * (-2j * w * b * P) + 1j * float(self.J1),
            "x4": 1j * float(self.J2),
            "q": -e / 4 * (-2 * w * b + 2 * Qm),
            "qbar": -e / 4 * (2 * b - 2 * w * P),
        }

    def delta_value(self) -> complex:
        """(eps / 2 pi) exp(-eps (q - qbar')^2 / 4)."""
        return self.prefactor * cmath.exp(-float(self.eps) * (self.q - self.qbar_p) ** 2 / 4)


def _lambda_log(a: int, z: complex, dz: complex, J1: float, J2: float, eps: float) -> complex:
    """(l_a D)/D for D with log-derivative dz in the variable z."""
    if a == 0:
        return dz
    if a == 1:
        return 1j * (dz + eps * z)
    if a == 2:
        return 1j * (z * dz + eps / 2 * z * z + J1)
    return 1j * J2


def _op_log(op, point, grad) -> complex:
    """(op D)/D for a first-order DiffOp op on the E(2) x R chart."""
    comps = op.first_order()
    total = op.zeroth().eval_at(point)
    for j, key in enumerate(("x1", "x2", "x3", "x4")):
        c = comps[j]
        if not c.is_zero:
            total += c.eval_at(point) * grad[key]
    return total


def dfunction_residuals(D: DFunction, eta_ops, xi_ops, point) -> list[complex]:
    """The eight relative residuals (eta^eps_a - l_a(q)) D / D, (xi^eps_a + conj l_a(q')) D / D."""
    g = D.gradient(point)
    J1, J2, e = float(D.J1), float(D.J2), float(D.eps)
    out = []
    for a in range(4):
        out.append(_op_log(eta_ops[a], point, g) - _lambda_log(a, D.q, g["q"], J1, J2, e))
    for a in range(4):
        # conj l_a(q') acting in the antiholomorphic variable qbar'
        conj_l = _lambda_log(a, D.qbar_p, g["qbar"], J1, J2, e)
        conj_l = conj_l if a == 0 else -conj_l
        out.append(_op_log(xi_ops[a], point, g) + conj_l)
    return out


def random_point(rng: random.Random) -> list[float]:
    return [rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-math.pi, math.pi), rng.uniform(-2, 2)]


def _random_complex(rng: random.Random) -> complex:
    return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))


@dataclass
class DFunctionReport:
    max_residual: float
    worst_point: list[float]
    n_points: int
    normalization_exact: bool
    passed: bool

    def to_json(self) -> dict:
        return {
            "max_relative_residual": self.max_residual,
            "worst_point": self.worst_point,
            "n_points": self.n_points,
            "normalization_at_origin": self.normalization_exact,
            "passed": self.passed,
        }


def verify_dfunction(n_points: int = 100, tol: float = 1e-10, seed: int = 0, eps=1, J1=1, J2=Fraction(1, 2)) -> DFunctionReport:
    """Residuals of the defining system at seeded random points and random q, qbar'."""
    from ..kgf import eta_eps, symmetry_ops
    from .model import E2RConfig, build_model, field_config

    eps, J1, J2 = to_fraction(eps), to_fraction(J1), to_fraction(J2)
    model = build_model()
    cfg = field_config(model, E2RConfig(mu=(1, 0, 0, 0), eps=eps))
    eta_ops = eta_eps(model, cfg)
    xi_ops = symmetry_ops(model, cfg)
    rng = random.Random(seed)
    worst, worst_pt = 0.0, []
    for _ in range(n_points):
        D = DFunction(_random_complex(rng), _random_complex(rng), J1, J2, eps)
        pt = random_point(rng)
        res = max(abs(r) for r in dfunction_residuals(D, eta_ops, xi_ops, pt))
        if res > worst:
            worst, worst_pt = res, pt
    D0 = DFunction(complex(0.3, -0.2), complex(-0.5, 0.4), J1, J2, eps)
    norm_ok = D0([0.0, 0.0, 0.0, 0.0]) == D0.delta_value()
    return DFunctionReport(worst, worst_pt, n_points, norm_ok, worst < tol and norm_ok)


def periodicity_check(J1, J2=Fraction(1, 2), eps=1, n_points: int = 20, seed: int = 0, tol: float = 1e-12) -> bool:
    """D(x3 = pi) equals D(x3 = -pi) at every sampled point (single-valuedness)."""
    rng = random.Random(seed)
    J1, J2, eps = to_fraction(J1), to_fraction(J2), to_fraction(eps)
    for _ in range(n_points):
        D = DFunction(_random_complex(rng), _random_complex(rng), J1, J2, eps)
        x1, x2, _, x4 = random_point(rng)
        a = D([x1, x2, math.pi, x4])
        b = D([x1, x2, -math.pi, x4])
        if abs(a - b) > tol * max(abs(a), abs(b)):
            return False
    return True
