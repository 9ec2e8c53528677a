"""The group E(2) x R in coordinates of the second kind.

g(x) = exp(x1 e1) exp(x2 e2) exp(x3 e3) exp(x4 e4), with x3 the periodic
angle. Brackets: [e1, e3] = e2, [e2, e3] = -e1, e4 central.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..cohomology import TwoCocycle
from ..kgf import FieldConfig, GroupModel, make_field_config
from ..lie import e2r_algebra
from ..rational import to_fraction
from ..symb import Chart, DiffOp, TrigPolyExpr

CHART = Chart(4, 2, ("x1", "x2", "x3", "x4"))


def build_model() -> GroupModel:
    """Left/right-invariant frames of E(2) x R; coframe derived and checked."""
    ch = CHART
    x1, x2, _, _ = ch.coords()
    c, s = ch.cos(), ch.sin()
    one, z = ch.one(), ch.zero()
    vf = DiffOp.vector_field
    xi = [
        vf(ch, [c, -s, z, z]),
        vf(ch, [s, c, z, z]),
        vf(ch, [z, z, one, z]),
        vf(ch, [z, z, z, one]),
    ]
    eta = [
        vf(ch, [one, z, z, z]),
        vf(ch, [z, one, z, z]),
        vf(ch, [x2, -x1, one, z]),
        vf(ch, [z, z, z, one]),
    ]
    # Haar density 1/(2 pi) is a constant multiple of the coordinate volume;
    # the weight stored here is the rational part.
    model = GroupModel(ch, e2r_algebra(), xi, eta, measure_weight=ch.one())
    model.verify()
    return model


def cocycle(mu: Sequence) -> TwoCocycle:
    """mu1 e^12 + mu2 e^34 + mu3 e^13 + mu4 e^23."""
    m1, m2, m3, m4 = (to_fraction(v) for v in mu)
    return TwoCocycle.from_entries(e2r_algebra(), [(1, 2, m1), (3, 4, m2), (1, 3, m3), (2, 3, m4)])


def extension_realization(mu: Sequence) -> list[TrigPolyExpr]:
    """d_0 coefficients of the right-invariant fields on the central extension."""
    m1, m2, m3, m4 = (to_fraction(v) for v in mu)
    x1, x2, x3, _ = CHART.coords()
    return [
        CHART.zero(),
        -x1 * m1,
        (x1 * x1 - x2 * x2) * (m1 / 2) - x1 * m3 - x2 * m4,
        -x3 * m2,
    ]


def metric_form(vareps) -> list[list[Fraction]]:
    """Covariant G_ab whose inverse is diag(-vareps^2, -1, -1, 1)."""
    v = to_fraction(vareps)
    if v <= 1:
        raise ValueError("metric parameter must exceed 1")
    return [
        [-1 / (v * v), 0, 0, 0],
        [0, Fraction(-1), 0, 0],
        [0, 0, Fraction(-1), 0],
        [0, 0, 0, Fraction(1)],
    ]


@dataclass(frozen=True)
class E2RConfig:
    mu: tuple = (1, 0, 0, 0)
    eps: Fraction = Fraction(1)
    vareps: Fraction = Fraction(2)
    m: Fraction = Fraction(1)
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(to_fraction(v) for v in self.mu))
        if len(self.mu) != 4:
            raise ValueError("mu needs four components")
        for name in ("eps", "vareps", "m"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.vareps <= 1:
            raise ValueError("metric parameter vareps must exceed 1")
        if self.m < 0:
            raise ValueError("mass must be nonnegative")

    @property
    def canonical(self) -> bool:
        return self.mu == (1, 0, 0, 0)


def field_config(model: GroupModel, cfg: E2RConfig, gauge: TrigPolyExpr | None = None) -> FieldConfig:
    return make_field_config(
        model,
        cocycle(cfg.mu),
        cfg.eps,
        metric_form(cfg.vareps),
        realization=extension_realization(cfg.mu),
        gauge=gauge,
    )
