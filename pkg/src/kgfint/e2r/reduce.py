"""Reduction of the field equation to an ODE in q through the lambda-representation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..rational import GaussRat, to_fraction
from ..symb import DiffOp, TrigPolyExpr
from .lambda_rep import IEPS, IJ1, IJ2, IM, IQ, IV, PCHART, LambdaRep

_PARAMS = {"eps": IEPS, "V": IV, "J1": IJ1, "J2": IJ2, "m": IM}


@dataclass
class ReducedODE:
    """d2(q) psi'' + d1(q) psi' + d0(q) psi = 0 on the parameter chart."""

    d2: TrigPolyExpr
    d1: TrigPolyExpr
    d0: TrigPolyExpr

    @classmethod
    def from_operator(cls, op: DiffOp) -> "ReducedODE":
        if op.order > 2:
            raise ValueError("reduced operator has order > 2")
        return cls(op.coefficient((2, 0, 0, 0, 0, 0)), op.coefficient((1, 0, 0, 0, 0, 0)), op.zeroth())

    @property
    def coefficients(self) -> tuple[TrigPolyExpr, TrigPolyExpr, TrigPolyExpr]:
        return self.d2, self.d1, self.d0

    def specialize(self, **values) -> "ReducedODE":
        """Substitute numbers for any of eps, V, J1, J2, m."""
        out = list(self.coefficients)
        for name, v in values.items():
            if v is None:
                continue
            j = _PARAMS[name]
            out = [c.subs(j, to_fraction(v)) for c in out]
        return ReducedODE(*out)

    def free_parameters(self) -> list[str]:
        return [n for n, j in _PARAMS.items() if any(c.depends_on(j) for c in self.coefficients)]

    def q_polynomials(self) -> tuple[list[Fraction], list[Fraction], list[Fraction]]:
        """Real coefficient lists (ascending powers of q); all parameters must be fixed."""
        out = []
        for c in self.coefficients:
            uni = c.univariate(IQ)
            deg = max(uni, default=0)
            row = []
            for k in range(deg + 1):
                v = uni.get(k, GaussRat(0))
                if v.im:
                    raise ValueError("reduced ODE has non-real coefficients")
                row.append(v.re)
            out.append(row)
        return tuple(out)

    def residual(self, q: complex, psi: complex, dpsi: complex, d2psi: complex) -> tuple[complex, float]:
        """(L psi, scale) at a numeric point, scale = sum of term magnitudes."""
        polys = self.q_polynomials()
        vals = [sum(float(c) * q**k for k, c in enumerate(p)) for p in polys]
        terms = [vals[0] * d2psi, vals[1] * dpsi, vals[2] * psi]
        return sum(terms), sum(abs(t) for t in terms)

    def to_json(self) -> dict:
        return {"d2": str(self.d2), "d1": str(self.d1), "d0": str(self.d0)}


def contravariant_metric() -> list[TrigPolyExpr]:
    """Diagonal of G^{ab} = diag(-V, -1, -1, 1), V = vareps^2."""
    ch = PCHART
    return [-ch.variable(IV), ch.const(-1), ch.const(-1), ch.const(1)]


def reduce_equation(rep: LambdaRep, vareps=None, m=None) -> ReducedODE:
    """G^{ab}(l_a + C_a) l_b + m^2, with C_a = 0 for this unimodular algebra."""
    from ..lie import e2r_algebra, trace_vector

    tv, unimodular = trace_vector(e2r_algebra())
    if not unimodular:
        raise ValueError("reduction assumes a unimodular algebra")
    ch = PCHART
    ginv = contravariant_metric()
    op = DiffOp(ch)
    for a, l in enumerate(rep.ops):
        op = op + (l @ l) * ginv[a]
    op = op + DiffOp.multiplication(ch.variable(IM) ** 2)
    ode = ReducedODE.from_operator(op)
    values = {}
    if vareps is not None:
        values["V"] = to_fraction(vareps) ** 2
    if m is not None:
        values["m"] = m
    return ode.specialize(**values)


def printed_coefficients(reading: str = "resolved") -> ReducedODE:
    """Coefficients as printed for the reduced equation, moved to the form L psi = 0.

    The printed text uses one symbol for both the charge and the metric
    parameter. ``reading='resolved'`` maps "1 - eps" in the leading
    coefficient to 1 - V (the only reading consistent with z = q^2/(V - 1));
    ``reading='literal'`` takes every symbol as the charge.
    """
    ch = PCHART
    q, eps, V, j1, j2, m = ch.coords()
    lead_const = V if reading == "resolved" else eps
    d2 = 1 - lead_const + q * q
    d1 = q * (1 + eps * (2 + q * q) + j1 * 2)
    d0 = eps * eps * q * q / 4 + eps * (1 + eps + j1) * q * q + j1 * j1 - j2 * j2 + eps + m * m
    return ReducedODE(d2, d1, d0)


def _term_diff(derived: TrigPolyExpr, printed: TrigPolyExpr) -> list[dict]:
    """Term-level mismatch list: monomials whose coefficients differ."""
    names = derived.chart.names
    out = []
    keys = set(derived.terms) | set(printed.terms)
    for key in sorted(keys):
        a = derived.terms.get(key, GaussRat(0))
        b = printed.terms.get(key, GaussRat(0))
        if a != b:
            mono, _ = key
            label = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, mono) if k) or "1"
            out.append({"monomial": label, "derived": str(a), "printed": str(b)})
    return out


def comparison_report(ode: ReducedODE, params: dict | None = None) -> dict:
    """Compare a derived reduced ODE with the printed coefficients, term by term."""
    params = {k: v for k, v in (params or {}).items() if v is not None}
    report = {}
    for reading in ("resolved", "literal"):
        printed = printed_coefficients(reading).specialize(**params)
        entries = {}
        for name, d, p in zip(("d2", "d1", "d0"), ode.coefficients, printed.coefficients):
            diff = _term_diff(d, p)
            entries[name] = {"derived": str(d), "printed": str(p), "match": not diff, "mismatches": diff}
        entries["all_match"] = all(entries[n]["match"] for n in ("d2", "d1", "d0"))
        report[reading] = entries
    degenerate = params.get("eps") is not None and to_fraction(params["eps"]) == 0
    report["note"] = (
        "charge-free limit: printed and derived forms coincide term by term"
        if degenerate and report["resolved"]["all_match"]
        else "derived operator is authoritative; mismatches list printed terms that do not follow from the derivation"
    )
    return report
