"""Invariant metrics, fields and KGF symmetry operators on a Lie group chart.

Everything here is exact: the group is given by its left-invariant fields
``xi``, right-invariant fields ``eta`` and right-invariant coframe ``sigma``
on a coordinate chart, and all identities are checked as expression equalities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import linalg
from .cohomology import TwoCocycle, trivialize
from .lie import LieAlgebra, load_algebra, trace_vector
from .rational import GaussRat, to_fraction
from .symb import (
    Chart,
    DiffForm,
    DiffOp,
    TensorField,
    TrigPolyExpr,
    contract2,
    exterior_d,
    interior,
    lie_derivative,
    op_commutator,
    parse_expr,
)


class IdentityFailure(AssertionError):
    """An exact identity did not reduce to zero; ``residual`` holds the expression."""

    def __init__(self, what: str, residual=None):
        msg = what if residual is None else f"{what}: residual {residual}"
        super().__init__(msg)
        self.what = what
        self.residual = residual


class PathDependenceError(IdentityFailure):
    pass


class MissingExtensionError(ValueError):
    pass


def _invert_expr_matrix(M: Sequence[Sequence[TrigPolyExpr]]) -> list[list[TrigPolyExpr]]:
    """Gauss-Jordan inverse using only nonzero constant pivots."""
    n = len(M)
    chart = M[0][0].chart
    A = [list(r) + [chart.const(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        pr = next((r for r in range(c, n) if A[r][c].is_constant and not A[r][c].is_zero), None)
        if pr is None:
            raise ValueError(f"no constant pivot in column {c}; matrix is not invertible in this class")
        A[c], A[pr] = A[pr], A[c]
        inv = GaussRat(1) / A[c][c].constant_value()
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


@dataclass
class GroupModel:
    chart: Chart
    alg: LieAlgebra
    xi: list[DiffOp]
    eta: list[DiffOp]
    sigma: list[DiffForm] = field(default_factory=list)
    measure_weight: TrigPolyExpr | None = None

    def __post_init__(self):
        n = self.alg.dim
        if self.chart.dim != n:
            raise ValueError("simply transitive action: chart dimension must equal dim g")
        if len(self.xi) != n or len(self.eta) != n:
            raise ValueError("need one left- and one right-invariant field per basis element")
        if not self.sigma:
            self.sigma = coframe_from_eta(self.chart, self.eta)
        if self.measure_weight is None:
            self.measure_weight = self.chart.one()

    @property
    def dim(self) -> int:
        return self.alg.dim

    def violations(self) -> list[str]:
        """Every failed model invariant, described (empty when the model is sound)."""
        n = self.dim
        C = self.alg.C
        bad = []
        for a in range(n):
            for b in range(n):
                val = interior(self.eta[b], self.sigma[a]).function_value()
                if val != int(a == b):
                    bad.append(f"<sigma^{a + 1}, eta_{b + 1}> = {val}")
        for a in range(n):
            for b in range(n):
                if b > a:
                    lhs = op_commutator(self.xi[a], self.xi[b])
                    rhs = _combo(self.chart, [C[a][b][c] for c in range(n)], self.xi)
                    if lhs != rhs:
                        bad.append(f"[xi_{a + 1}, xi_{b + 1}] = {lhs}")
                    lhs = op_commutator(self.eta[a], self.eta[b])
                    rhs = _combo(self.chart, [-C[a][b][c] for c in range(n)], self.eta)
                    if lhs != rhs:
                        bad.append(f"[eta_{a + 1}, eta_{b + 1}] = {lhs}")
                comm = op_commutator(self.xi[a], self.eta[b])
                if not comm.is_zero:
                    bad.append(f"[xi_{a + 1}, eta_{b + 1}] = {comm}")
        return bad

    def verify(self) -> None:
        bad = self.violations()
        if bad:
            raise IdentityFailure("group model invariants", "; ".join(bad))

    def origin(self) -> list[int]:
        return [0] * self.dim


def _combo(chart: Chart, coeffs: Sequence, ops: Sequence[DiffOp]) -> DiffOp:
    out = DiffOp(chart)
    for c, op in zip(coeffs, ops):
        if c:
            out = out + op * c
    return out


def coframe_from_eta(chart: Chart, eta: Sequence[DiffOp]) -> list[DiffForm]:
    """sigma^a with <sigma^a, eta_b> = delta^a_b (exact matrix inverse)."""
    n = chart.dim
    E = [eta[b].vector_components() for b in range(n)]  # E[b][i] = eta_b^i
    Et = [[E[b][i] for b in range(n)] for i in range(n)]
    S = _invert_expr_matrix(Et)  # S = (E^T)^-1, S[a][i] = sigma^a_i
    return [DiffForm.one_form(chart, S[a]) for a in range(n)]


def adjoint_matrix(model: GroupModel) -> list[list[TrigPolyExpr]]:
    """Ad[b][a] = <sigma^b, xi_a>, i.e. xi_a = Ad[b][a] eta_b."""
    n = model.dim
    return [[interior(model.xi[a], model.sigma[b]).function_value() for a in range(n)] for b in range(n)]


def load_model(path) -> GroupModel:
    """Read a model bundle JSON file (see README for the format)."""
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    alg_src = data["algebra"]
    if isinstance(alg_src, str):
        alg = load_algebra(path.parent / alg_src)
    else:
        alg = load_algebra(alg_src)
    ch = data["chart"]
    names = tuple(ch.get("names", ()))
    periodic = ch.get("periodic")
    if isinstance(periodic, str):
        periodic = names.index(periodic) if names else int(periodic.lstrip("x")) - 1
    elif isinstance(periodic, int):
        periodic -= 1
    chart = Chart(int(ch["dim"]), periodic, names)
    xi = [DiffOp.vector_field(chart, [parse_expr(e, chart) for e in comps]) for comps in data["xi"]]
    eta = [DiffOp.vector_field(chart, [parse_expr(e, chart) for e in comps]) for comps in data["eta"]]
    sigma = [DiffForm.one_form(chart, [parse_expr(e, chart) for e in comps]) for comps in data.get("sigma", [])]
    weight = parse_expr(data["measure_weight"], chart) if "measure_weight" in data else None
    model = GroupModel(chart, alg, xi, eta, sigma, weight)
    model.verify()
    return model


# -- metric ------------------------------------------------------------------


def _check_metric_form(G: Sequence[Sequence]) -> list[list[Fraction]]:
    G = linalg.as_matrix(G)
    n = len(G)
    for i in range(n):
        for j in range(n):
            if G[i][j] != G[j][i]:
                raise ValueError(f"metric form not symmetric at ({i + 1},{j + 1})")
    if linalg.determinant(G) == 0:
        raise ValueError("degenerate metric form (det G = 0)")
    return G


def metric_from_tetrad(model: GroupModel, G: Sequence[Sequence]) -> TensorField:
    """g_ij = G_ab sigma^a_i sigma^b_j, checked to be Killing for every xi_a."""
    G = _check_metric_form(G)
    n = model.dim
    chart = model.chart
    S = [[model.sigma[a].component(i) for i in range(n)] for a in range(n)]
    g = [[chart.zero() for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if not G[a][b]:
                continue
            for i in range(n):
                for j in range(n):
                    g[i][j] = g[i][j] + S[a][i] * S[b][j] * G[a][b]
    metric = TensorField(chart, g)
    for a, xa in enumerate(model.xi):
        lg = lie_derivative(xa, metric)
        if not lg.is_zero:
            raise IdentityFailure(f"L_xi{a + 1} g != 0", lg.g)
    return metric


# -- field strength -----------------------------------------------------------


def field_form_from_cocycle(model: GroupModel, F: TwoCocycle, verify: bool = True) -> DiffForm:
    """F_ij = F_ab sigma^a_i sigma^b_j; with ``verify`` checks dF = 0 and L_xi F = 0."""
    n = model.dim
    chart = model.chart
    S = [[model.sigma[a].component(i) for i in range(n)] for a in range(n)]
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            total = chart.zero()
            for a in range(n):
                for b in range(n):
                    if F.F[a][b]:
                        total = total + S[a][i] * S[b][j] * F.F[a][b]
            comps[(i, j)] = total
    form = DiffForm(chart, 2, comps)
    if verify:
        dF = exterior_d(form)
        if not dF.is_zero:
            raise IdentityFailure("dF != 0 (F is not a cocycle)", dF)
        for a, xa in enumerate(model.xi):
            lf = lie_derivative(xa, form)
            if not lf.is_zero:
                raise IdentityFailure(f"L_xi{a + 1} F != 0", lf)
    return form


def staircase_integral(one_form: DiffForm) -> TrigPolyExpr:
    """f with f(origin) = 0 integrating w along the coordinate-axis staircase.

    Segment j runs x_j from 0 to its value with x_k (k < j) at their final
    values and x_k (k > j) still 0.
    """
    chart = one_form.chart
    n = chart.dim
    total = chart.zero()
    for j in range(n):
        w = one_form.component(j)
        for k in range(j + 1, n):
            w = w.subs(k, 0)
        if w.is_zero:
            continue
        prim = w.integrate(j)
        total = total + prim - prim.subs(j, 0)
    return total


def chi_functions(model: GroupModel, F_form: DiffForm) -> list[TrigPolyExpr]:
    """chi_a = -int i_{xi_a} F along the staircase path, chi_a(origin) = 0."""
    out = []
    for a, xa in enumerate(model.xi):
        w = -interior(xa, F_form)
        chi = staircase_integral(w)
        resid = exterior_d(DiffForm.function(chi)) - w
        if not resid.is_zero:
            raise PathDependenceError(f"d chi_{a + 1} != -i_xi F (i_xi F not closed)", resid)
        out.append(chi)
    return out


def eq4_residual(model: GroupModel, F_form: DiffForm, chi: Sequence[TrigPolyExpr]) -> list[DiffForm]:
    """d_j chi_a + xi_a^k F_kj for every a, as 1-forms."""
    return [exterior_d(DiffForm.function(c)) + interior(x, F_form) for x, c in zip(model.xi, chi)]


# -- potential ----------------------------------------------------------------


def eq16_residual(model: GroupModel, A: Sequence[TrigPolyExpr], F: TwoCocycle) -> list[list[TrigPolyExpr]]:
    """eta_a A_b - eta_b A_a + C_ab^c A_c - F_ab."""
    n = model.dim
    C = model.alg.C
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            r = model.eta[a].apply(A[b]) - model.eta[b].apply(A[a]) - F.F[a][b]
            for c in range(n):
                if C[a][b][c]:
                    r = r + A[c] * C[a][b][c]
            row.append(r)
        out.append(row)
    return out


def check_extension_realization(model: GroupModel, F: TwoCocycle, phi: Sequence[TrigPolyExpr]) -> None:
    """The lifted fields eta~_a = eta_a + phi_a d_0 close on the extended algebra.

    The central coordinate x0 is appended after the base coordinates; the
    extended basis puts e_0 first, as ``cohomology.extend`` does.
    """
    from .cohomology import extend

    ext = extend(model.alg, F).extended
    base = model.chart
    chart = Chart(base.dim + 1, base.periodic, base.names + ("x0",))
    n = base.dim
    d0 = DiffOp.partial(chart, n)
    lifted = [d0]
    for a in range(n):
        comps = [c.embed(chart) for c in model.eta[a].vector_components()] + [phi[a].embed(chart)]
        lifted.append(DiffOp.vector_field(chart, comps))
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            lhs = op_commutator(lifted[a], lifted[b])
            rhs = _combo(chart, [-ext.C[a][b][c] for c in range(n + 1)], lifted)
            if lhs != rhs:
                raise IdentityFailure(f"extended right-invariant fields fail at ({a}, {b})", lhs - rhs)


def potential_from_extension(
    model: GroupModel, F: TwoCocycle, realization: Sequence[TrigPolyExpr] | None = None
) -> list[TrigPolyExpr]:
    """Particular solution A_a of the potential equation.

    ``realization`` lists the d_0 coefficients phi_a of the extended
    right-invariant fields eta~_a = eta_a + phi_a d_0; with U = exp(x0) the
    potential is A_a = -U^-1 eta~_a U = -phi_a. Without a realization a
    trivial cocycle F = d lam gives the constant solution A_a = lam_a.
    """
    if realization is not None:
        check_extension_realization(model, F, realization)
        A = [-p for p in realization]
    else:
        lam = trivialize(model.alg, F)
        if lam is None:
            raise MissingExtensionError("nontrivial cocycle needs an extension realization")
        A = [model.chart.const(x) for x in lam]
    resid = eq16_residual(model, A, F)
    for a, row in enumerate(resid):
        for b, r in enumerate(row):
            if not r.is_zero:
                raise IdentityFailure(f"potential equation fails at ({a + 1},{b + 1})", r)
    return A


# -- operators ----------------------------------------------------------------


@dataclass
class FieldConfig:
    cocycle: TwoCocycle
    eps: Fraction
    metric_form: list[list[Fraction]]
    A: list[TrigPolyExpr]
    chi: list[TrigPolyExpr]
    F_form: DiffForm

    def __post_init__(self):
        self.eps = to_fraction(self.eps)
        self.metric_form = _check_metric_form(self.metric_form)

    @property
    def i_eps(self) -> GaussRat:
        return GaussRat(0, self.eps)


def make_field_config(
    model: GroupModel,
    F: TwoCocycle,
    eps,
    G: Sequence[Sequence],
    realization: Sequence[TrigPolyExpr] | None = None,
    gauge: TrigPolyExpr | None = None,
) -> FieldConfig:
    """Assemble and verify potentials and chi-functions for the field F."""
    F_form = field_form_from_cocycle(model, F)
    A = potential_from_extension(model, F, realization)
    if gauge is not None:
        A = [a + model.eta[i].apply(gauge) for i, a in enumerate(A)]
        resid = eq16_residual(model, A, F)
        if any(not r.is_zero for row in resid for r in row):
            raise IdentityFailure("gauge-shifted potential fails the potential equation")
    chi = chi_functions(model, F_form)
    for a, c in enumerate(chi):
        at0 = c
        for k in range(model.dim):
            at0 = at0.subs(k, 0)
        if not at0.is_zero:
            raise IdentityFailure(f"chi_{a + 1}(e) != 0", at0)
    return FieldConfig(F, eps, G, A, chi, F_form)


def eta_eps(model: GroupModel, config: FieldConfig) -> list[DiffOp]:
    """eta_a - i eps A_a."""
    return [eta - DiffOp.multiplication(A * config.i_eps) for eta, A in zip(model.eta, config.A)]


def _laplacian(model: GroupModel, G: Sequence[Sequence], ops: Sequence[DiffOp]) -> DiffOp:
    Ginv = linalg.inverse(_check_metric_form(G))
    tv, _ = trace_vector(model.alg)
    n = model.dim
    H = DiffOp(model.chart)
    for a in range(n):
        left = ops[a] + tv[a] if tv[a] else ops[a]
        for b in range(n):
            if Ginv[a][b]:
                H = H + (left @ ops[b]) * Ginv[a][b]
    return H


def build_H(model: GroupModel, G: Sequence[Sequence]) -> DiffOp:
    """G^{ab} (eta_a + C_a) eta_b."""
    return _laplacian(model, G, model.eta)


def build_H_eps(model: GroupModel, config: FieldConfig) -> DiffOp:
    """G^{ab} (eta^eps_a + C_a) eta^eps_b."""
    return _laplacian(model, config.metric_form, eta_eps(model, config))


def symmetry_ops(model: GroupModel, config: FieldConfig, H_eps: DiffOp | None = None) -> list[DiffOp]:
    """xi^eps_a = xi_a + i eps (chi_a - Ad^b_a A_b), each commuting with H^eps."""
    n = model.dim
    Ad = adjoint_matrix(model)
    ops = []
    for a in range(n):
        inh = config.chi[a]
        for b in range(n):
            if not Ad[b][a].is_zero and not config.A[b].is_zero:
                inh = inh - Ad[b][a] * config.A[b]
        ops.append(model.xi[a] + DiffOp.multiplication(inh * config.i_eps))
    H = H_eps if H_eps is not None else build_H_eps(model, config)
    for a, op in enumerate(ops):
        comm = op_commutator(H, op)
        if not comm.is_zero:
            raise IdentityFailure(f"[H^eps, xi^eps_{a + 1}] != 0", comm)
    return ops


def omega_eq8(model: GroupModel, config: FieldConfig) -> list[list[TrigPolyExpr]]:
    """F(xi_a, xi_b) - C_ab^c chi_c as expressions (constant when F is invariant)."""
    n = model.dim
    C = model.alg.C
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            val = contract2(config.F_form, model.xi[a], model.xi[b])
            for c in range(n):
                if C[a][b][c]:
                    val = val - config.chi[c] * C[a][b][c]
            row.append(val)
        out.append(row)
    return out


def omega_from_ops(model: GroupModel, config: FieldConfig, ops: Sequence[DiffOp] | None = None) -> TwoCocycle:
    """Extract Omega from [xi^eps_a, xi^eps_b] - C_ab^c xi^eps_c = i eps Omega_ab.

    Cross-checked against the closed formula F(xi_a, xi_b) - C_ab^c chi_c;
    the result must be a constant cocycle cohomologous to F.
    """
    n = model.dim
    C = model.alg.C
    chart = model.chart
    if ops is None:
        ops = symmetry_ops(model, config)
    direct = omega_eq8(model, config)
    values = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            d = direct[a][b]
            if not d.is_constant:
                raise IdentityFailure(f"Omega_{a + 1}{b + 1} is not constant", d)
            dv = d.constant_value()
            if dv.im:
                raise IdentityFailure(f"Omega_{a + 1}{b + 1} is not real", d)
            values[a][b] = dv.re
            if b <= a:
                continue
            resid = op_commutator(ops[a], ops[b]) - _combo(chart, [C[a][b][c] for c in range(n)], ops)
            if resid.order > 0 or not resid.zeroth().is_constant:
                raise IdentityFailure(f"[xi^eps_{a + 1}, xi^eps_{b + 1}] - C xi^eps is not a constant", resid)
            expected = GaussRat(0, config.eps) * dv
            got = resid.zeroth().constant_value() if not resid.is_zero else GaussRat(0)
            if got != expected:
                raise IdentityFailure(
                    f"commutator constant for ({a + 1},{b + 1}) is {got}, expected i*eps*Omega = {expected}"
                )
    omega = TwoCocycle(model.alg, values)
    if trivialize(model.alg, omega - config.cocycle) is None:
        raise IdentityFailure("Omega - F is not a coboundary")
    return omega
