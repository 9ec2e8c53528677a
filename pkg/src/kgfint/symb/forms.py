"""Differential forms and symmetric 2-tensors on a chart, with exact calculus."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .diffop import DiffOp
from .expr import Chart, ChartMismatch, TrigPolyExpr


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` (0 if an index repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class DiffForm:
    """A p-form sum over increasing I of comps[I] dx^I.

    ``component(i, j, ...)`` gives the fully antisymmetric component, so for a
    2-form F the tensor F_ij = -F_ji is ``F.component(i, j)``.
    """

    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart: Chart, degree: int, comps: dict | None = None):
        if not 0 <= degree <= chart.dim:
            raise ValueError(f"degree {degree} invalid on a {chart.dim}-dimensional chart")
        self.chart = chart
        self.degree = degree
        clean: dict = {}
        for idx, v in (comps or {}).items():
            if len(idx) != degree:
                raise ValueError(f"index {idx} has wrong length for a {degree}-form")
            if not isinstance(v, TrigPolyExpr):
                v = chart.const(v)
            elif v.chart != chart:
                raise ChartMismatch("component chart differs from form chart")
            sign, key = _sort_sign(idx)
            if sign == 0:
                if not v.is_zero:
                    raise ValueError(f"repeated index {idx} with nonzero component")
                continue
            val = v * sign
            clean[key] = clean[key] + val if key in clean else val
        self.comps = {k: v for k, v in clean.items() if not v.is_zero}

    @classmethod
    def function(cls, f: TrigPolyExpr) -> "DiffForm":
        return cls(f.chart, 0, {(): f})

    @classmethod
    def one_form(cls, chart: Chart, components: Sequence) -> "DiffForm":
        return cls(chart, 1, {(i,): c for i, c in enumerate(components)})

    @classmethod
    def two_form_from_matrix(cls, chart: Chart, M: Sequence[Sequence[TrigPolyExpr]]) -> "DiffForm":
        """From an antisymmetric matrix M_ij (checked)."""
        n = chart.dim
        comps = {}
        for i in range(n):
            if not M[i][i].is_zero:
                raise ValueError("diagonal of a 2-form matrix must vanish")
            for j in range(i + 1, n):
                if not (M[i][j] + M[j][i]).is_zero:
                    raise ValueError(f"matrix not antisymmetric at ({i}, {j})")
                comps[(i, j)] = M[i][j]
        return cls(chart, 2, comps)

    def component(self, *idx: int) -> TrigPolyExpr:
        sign, key = _sort_sign(idx)
        if sign == 0:
            return self.chart.zero()
        c = self.comps.get(key)
        if c is None:
            return self.chart.zero()
        return c if sign > 0 else -c

    def function_value(self) -> TrigPolyExpr:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.component()

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def _check(self, other: "DiffForm"):
        if other.chart != self.chart or other.degree != self.degree:
            raise ChartMismatch("forms differ in chart or degree")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return DiffForm(self.chart, self.degree, comps)

    def __neg__(self):
        return DiffForm(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return DiffForm(self.chart, self.degree, {k: v * f for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((self.chart, self.degree, frozenset(self.comps.items())))

    def __str__(self):
        if not self.comps:
            return "0"
        names = self.chart.names
        parts = []
        for k in sorted(self.comps):
            basis = "^".join(f"d{names[i]}" for i in k)
            parts.append(f"({self.comps[k]})" + (f"*{basis}" if basis else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffForm[{self.degree}]({self})"


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if a.chart != b.chart:
        raise ChartMismatch("wedge of forms on different charts")
    comps: dict = {}
    for I, f in a.comps.items():
        for J, g in b.comps.items():
            sign, key = _sort_sign(I + J)
            if sign == 0:
                continue
            val = f * g * sign
            comps[key] = comps[key] + val if key in comps else val
    return DiffForm(a.chart, a.degree + b.degree, comps)


def exterior_d(w: DiffForm) -> DiffForm:
    """(dw)_{j0..jp} = sum_k (-1)^k d_{jk} w_{j0..^jk..jp}."""
    n = w.chart.dim
    p = w.degree
    if p >= n:
        raise ValueError("exterior derivative of a top-degree form leaves the chart")
    comps = {}
    for J in combinations(range(n), p + 1):
        total = w.chart.zero()
        for k, j in enumerate(J):
            rest = J[:k] + J[k + 1 :]
            c = w.comps.get(rest)
            if c is None:
                continue
            dc = c.diff(j)
            total = total + (dc if k % 2 == 0 else -dc)
        comps[J] = total
    return DiffForm(w.chart, p + 1, comps)


def _vector(v) -> list[TrigPolyExpr]:
    if isinstance(v, DiffOp):
        return v.vector_components()
    return list(v)


def interior(v, w: DiffForm) -> DiffForm:
    """(i_v w)_{J} = v^i w_{iJ}; for a 2-form this is F_ij v^i dx^j."""
    comps_v = _vector(v)
    p = w.degree
    if p == 0:
        raise ValueError("interior product of a 0-form is undefined")
    n = w.chart.dim
    comps = {}
    for J in combinations(range(n), p - 1):
        total = w.chart.zero()
        for i, vi in enumerate(comps_v):
            if vi.is_zero:
                continue
            c = w.component(i, *J)
            if not c.is_zero:
                total = total + vi * c
        comps[J] = total
    return DiffForm(w.chart, p - 1, comps)


def contract2(w: DiffForm, u, v) -> TrigPolyExpr:
    """w(u, v) = w_ij u^i v^j for a 2-form."""
    return interior(v, interior(u, w)).function_value()


class TensorField:
    """Covariant symmetric 2-tensor g_ij."""

    __slots__ = ("chart", "g")

    def __init__(self, chart: Chart, g: Sequence[Sequence[TrigPolyExpr]]):
        n = chart.dim
        if len(g) != n or any(len(r) != n for r in g):
            raise ValueError("metric matrix has wrong shape")
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise ValueError(f"metric not symmetric at ({i}, {j})")
        self.chart = chart
        self.g = [list(r) for r in g]

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        return self.chart == other.chart and self.g == other.g

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for r in self.g for x in r)

    def at_origin(self) -> list[list]:
        n = self.chart.dim
        out = []
        for r in self.g:
            e = r
            row = []
            for x in e:
                for k in range(n):
                    x = x.subs(k, 0)
                row.append(x.constant_value())
            out.append(row)
        return out


def lie_derivative(v, T):
    """Lie derivative of a form (component formula) or a symmetric 2-tensor."""
    vc = _vector(v)
    n = T.chart.dim
    dv = [[vc[k].diff(i) for k in range(n)] for i in range(n)]  # dv[i][k] = d_i v^k
    if isinstance(T, TensorField):
        g = T.g
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                total = T.chart.zero()
                for k in range(n):
                    if not vc[k].is_zero:
                        total = total + vc[k] * g[i][j].diff(k)
                    total = total + g[k][j] * dv[i][k] + g[i][k] * dv[j][k]
                row.append(total)
            out.append(row)
        return TensorField(T.chart, out)
    if isinstance(T, DiffForm):
        p = T.degree
        comps = {}
        for I in combinations(range(n), p):
            c = T.comps.get(I, T.chart.zero())
            total = T.chart.zero()
            for k in range(n):
                if not vc[k].is_zero and not c.is_zero:
                    total = total + vc[k] * c.diff(k)
            for r, ir in enumerate(I):
                for k in range(n):
                    if dv[ir][k].is_zero:
                        continue
                    J = I[:r] + (k,) + I[r + 1 :]
                    total = total + T.component(*J) * dv[ir][k]
            comps[I] = total
        return DiffForm(T.chart, p, comps)
    raise TypeError(f"cannot take the Lie derivative of {type(T).__name__}")
