"""Linear differential operators with TrigPolyExpr coefficients.

An operator is stored as ``{multi_index: coefficient}`` where the multi-index
counts derivatives per coordinate, so ``sum c_alpha * d^alpha``. The empty
multi-index (all zeros) is the inhomogeneous (multiplication) term.
"""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Sequence

from .expr import Chart, ChartMismatch, TrigPolyExpr


class OrderOverflow(ArithmeticError):
    """A commutator kept derivatives of order > 2.

    Signals a broken premise (non-Killing field, non-invariant field strength).
    """

    def __init__(self, op: "DiffOp"):
        high = {k: str(v) for k, v in op.coeffs.items() if sum(k) > 2}
        super().__init__(f"order overflow: surviving terms {high}")
        self.op = op


class DiffOp:
    __slots__ = ("chart", "coeffs")

    def __init__(self, chart: Chart, coeffs: dict | None = None):
        self.chart = chart
        clean = {}
        for k, v in (coeffs or {}).items():
            if len(k) != chart.dim:
                raise ValueError(f"multi-index {k} does not match chart dimension {chart.dim}")
            if not isinstance(v, TrigPolyExpr):
                v = chart.const(v)
            elif v.chart != chart:
                raise ChartMismatch("coefficient chart differs from operator chart")
            if not v.is_zero:
                clean[tuple(k)] = v
        self.coeffs = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def multiplication(cls, f: TrigPolyExpr) -> "DiffOp":
        return cls(f.chart, {(0,) * f.chart.dim: f})

    @classmethod
    def scalar(cls, chart: Chart, c) -> "DiffOp":
        return cls(chart, {(0,) * chart.dim: chart.const(c)})

    @classmethod
    def partial(cls, chart: Chart, i: int) -> "DiffOp":
        return cls(chart, {_unit(chart.dim, i): chart.one()})

    @classmethod
    def vector_field(cls, chart: Chart, components: Sequence) -> "DiffOp":
        coeffs = {}
        for i, c in enumerate(components):
            coeffs[_unit(chart.dim, i)] = c if isinstance(c, TrigPolyExpr) else chart.const(c)
        return cls(chart, coeffs)

    # -- inspection ---------------------------------------------------------
    @property
    def order(self) -> int:
        return max((sum(k) for k in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, alpha: Sequence[int]) -> TrigPolyExpr:
        return self.coeffs.get(tuple(alpha), self.chart.zero())

    def zeroth(self) -> TrigPolyExpr:
        return self.coefficient((0,) * self.chart.dim)

    def first_order(self) -> list[TrigPolyExpr]:
        return [self.coefficient(_unit(self.chart.dim, i)) for i in range(self.chart.dim)]

    def second_order(self) -> list[list[TrigPolyExpr]]:
        """Symmetric matrix a^{ij} with operator part sum_{i,j} a^{ij} d_i d_j."""
        n = self.chart.dim
        out = [[self.chart.zero()] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                alpha = [0] * n
                alpha[i] += 1
                alpha[j] += 1
                c = self.coefficient(alpha)
                out[i][j] = c if i == j else c / 2
        return out

    def vector_components(self) -> list[TrigPolyExpr]:
        if self.order > 1 or not self.zeroth().is_zero:
            raise ValueError("not a homogeneous first-order operator")
        return self.first_order()

    # -- algebra ------------------------------------------------------------
    def _coerce(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            if other.chart != self.chart:
                raise ChartMismatch("operators on different charts")
            return other
        if isinstance(other, TrigPolyExpr):
            return DiffOp.multiplication(other)
        return DiffOp.scalar(self.chart, other)

    def __add__(self, other):
        o = self._coerce(other)
        coeffs = dict(self.coeffs)
        for k, v in o.coeffs.items():
            coeffs[k] = coeffs[k] + v if k in coeffs else v
        return DiffOp(self.chart, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(self.chart, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        """Left multiplication by a function or number (not composition)."""
        if isinstance(other, DiffOp):
            raise TypeError("use @ for operator composition")
        return DiffOp(self.chart, {k: v * other for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        return compose(self, self._coerce(other))

    def apply(self, f: TrigPolyExpr) -> TrigPolyExpr:
        out = self.chart.zero()
        for alpha, c in self.coeffs.items():
            out = out + c * _derivative(f, alpha)
        return out

    def subs(self, j: int, value) -> "DiffOp":
        return DiffOp(self.chart, {k: v.subs(j, value) for k, v in self.coeffs.items()})

    def conjugate(self) -> "DiffOp":
        return DiffOp(self.chart, {k: v.conjugate() for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.chart == other.chart and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.chart, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.chart.names
        parts = []
        for alpha in sorted(self.coeffs, key=lambda a: (-sum(a), tuple(-x for x in a))):
            c = self.coeffs[alpha]
            d = "*".join(
                (f"d_{names[i]}" if n == 1 else f"d_{names[i]}^{n}") for i, n in enumerate(alpha) if n
            )
            parts.append(f"({c})" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self})"


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


def _derivative(f: TrigPolyExpr, alpha: Sequence[int]) -> TrigPolyExpr:
    for i, n in enumerate(alpha):
        for _ in range(n):
            f = f.diff(i)
            if f.is_zero:
                return f
    return f


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """A o B via the multivariate Leibniz rule."""
    chart = A.chart
    coeffs: dict = {}
    cache: dict = {}
    for alpha, f in A.coeffs.items():
        ranges = [range(a + 1) for a in alpha]
        for gamma in product(*ranges):
            binom = 1
            for a, g in zip(alpha, gamma):
                binom *= comb(a, g)
            rest = tuple(a - g for a, g in zip(alpha, gamma))
            for beta, g_coef in B.coeffs.items():
                key = (beta, gamma)
                if key not in cache:
                    cache[key] = _derivative(g_coef, gamma)
                dg = cache[key]
                if dg.is_zero:
                    continue
                term = f * dg * binom
                idx = tuple(r + b for r, b in zip(rest, beta))
                coeffs[idx] = coeffs[idx] + term if idx in coeffs else term
    return DiffOp(chart, coeffs)


def op_commutator(A: DiffOp, B: DiffOp, max_order: int = 2) -> DiffOp:
    """Exact [A, B] = AB - BA; raises OrderOverflow if order > max_order survives."""
    C = compose(A, B) - compose(B, A)
    if C.order > max_order:
        raise OrderOverflow(C)
    return C
