"""Lambda-representation of the extended algebra in one complex variable q.

Operators live on the parameter chart (q, eps, V, J1, J2, m), V = vareps^2;
only q is ever differentiated, the rest are symbolic parameters that may be
substituted by numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..rational import GaussRat, to_fraction
from ..symb import Chart, DiffOp, op_commutator

PCHART = Chart(6, None, ("q", "eps", "V", "J1", "J2", "m"))
IQ, IEPS, IV, IJ1, IJ2, IM = range(6)
I = GaussRat(0, 1)


@dataclass
class LambdaRep:
    J1: Fraction | None
    J2: Fraction | None
    eps: Fraction | None
    ops: list[DiffOp]

    def commutator_table(self) -> dict[tuple[int, int], DiffOp]:
        return {(a, b): op_commutator(self.ops[a], self.ops[b]) for a in range(4) for b in range(a + 1, 4)}

    def check_relations(self) -> list[str]:
        """[l_a, l_b] - C_ab^c l_c - i eps F_ab with F = e^1 ^ e^2; failures listed."""
        from ..lie import e2r_algebra

        C = e2r_algebra().C
        ch = PCHART
        eps = ch.const(self.eps) if self.eps is not None else ch.variable(IEPS)
        bad = []
        for (a, b), comm in self.commutator_table().items():
            expected = DiffOp(ch)
            for c in range(4):
                if C[a][b][c]:
                    expected = expected + self.ops[c] * C[a][b][c]
            if (a, b) == (0, 1):
                expected = expected + DiffOp.multiplication(eps * I)
            if comm != expected:
                bad.append(f"[l{a + 1}, l{b + 1}] = {comm}, expected {expected}")
        return bad


def _symbolic_ops() -> list[DiffOp]:
    ch = PCHART
    q, eps, j1, j2 = (ch.variable(i) for i in (IQ, IEPS, IJ1, IJ2))
    d = DiffOp.partial(ch, IQ)
    mult = DiffOp.multiplication
    return [
        d,
        (d + mult(eps * q)) * I,
        (d * q + mult(eps * q * q / 2 + j1)) * I,
        mult(j2 * I),
    ]


def lambda_rep(J1=None, J2=None, eps=None, check: bool = True) -> LambdaRep:
    """l1 = d_q, l2 = i(d_q + eps q), l3 = i(q d_q + eps q^2/2 + J1), l4 = i J2.

    ``None`` leaves a parameter symbolic. J1 must be an integer and eps nonzero.
    """
    subs = {}
    if J1 is not None:
        J1 = to_fraction(J1)
        if J1.denominator != 1:
            raise ValueError(f"J1 = {J1} violates the integer-valuedness condition")
        subs[IJ1] = J1
    if J2 is not None:
        J2 = to_fraction(J2)
        subs[IJ2] = J2
    if eps is not None:
        eps = to_fraction(eps)
        if eps == 0:
            raise ValueError("charge must be nonzero for the lambda-representation")
        subs[IEPS] = eps
    ops = _symbolic_ops()
    for j, v in subs.items():
        ops = [op.subs(j, v) for op in ops]
    rep = LambdaRep(J1, J2, eps, ops)
    if check:
        bad = rep.check_relations()
        if bad:
            from ..kgf import IdentityFailure

            raise IdentityFailure("lambda-representation relations", "; ".join(bad))
    return rep

