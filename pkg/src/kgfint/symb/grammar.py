"""Prefix (JSON-friendly) expression grammar for model bundle files.

Atoms: integers, ``"p/q"`` strings, ``"I"`` (imaginary unit) and coordinate
names. Lists are applications: ``["+", a, b, ...]``, ``["*", a, b, ...]``,
``["-", a]``, ``["-", a, b]``, ``["/", a, "p/q"]``, ``["^", a, n]``,
``["cos", arg]`` and ``["sin", arg]`` where ``arg`` is ``k * x_p`` for an
integer ``k`` (written ``"x3"`` or ``["*", 2, "x3"]``).
"""

from __future__ import annotations

from fractions import Fraction

from ..rational import GaussRat
from .expr import Chart, TrigPolyExpr


class GrammarError(ValueError):
    pass


def parse_expr(node, chart: Chart) -> TrigPolyExpr:
    if isinstance(node, bool):
        raise GrammarError("booleans are not expressions")
    if isinstance(node, int):
        return chart.const(node)
    if isinstance(node, str):
        s = node.strip()
        if s == "I":
            return chart.const(GaussRat(0, 1))
        if s in chart.names:
            return chart.variable(chart.index(s))
        try:
            return chart.const(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise GrammarError(f"unknown atom {node!r}") from None
    if not isinstance(node, list) or not node:
        raise GrammarError(f"malformed node {node!r}")
    op, args = node[0], node[1:]
    if op == "+":
        out = chart.zero()
        for a in args:
            out = out + parse_expr(a, chart)
        return out
    if op == "*":
        out = chart.one()
        for a in args:
            out = out * parse_expr(a, chart)
        return out
    if op == "-":
        if len(args) == 1:
            return -parse_expr(args[0], chart)
        if len(args) == 2:
            return parse_expr(args[0], chart) - parse_expr(args[1], chart)
        raise GrammarError("'-' takes one or two arguments")
    if op == "/":
        den = parse_expr(args[1], chart)
        if not den.is_constant or den.is_zero:
            raise GrammarError("division only by nonzero constants")
        return parse_expr(args[0], chart) / den.constant_value()
    if op == "^":
        if len(args) != 2 or not isinstance(args[1], int) or args[1] < 0:
            raise GrammarError("'^' needs a nonnegative integer exponent")
        return parse_expr(args[0], chart) ** args[1]
    if op in ("cos", "sin"):
        if len(args) != 1:
            raise GrammarError(f"{op} takes one argument")
        k = _harmonic_multiple(args[0], chart)
        if k == 0:
            return chart.one() if op == "cos" else chart.zero()
        sign = 1 if k > 0 or op == "cos" else -1
        return (chart.cos(abs(k)) if op == "cos" else chart.sin(abs(k))) * sign
    raise GrammarError(f"unknown operator {op!r}")


def _harmonic_multiple(arg, chart: Chart) -> int:
    e = parse_expr(arg, chart)
    p = chart.periodic
    if p is None:
        raise GrammarError("trigonometric functions need a periodic coordinate")
    lin = e.diff(p)
    if not lin.is_constant or not (e - chart.variable(p) * lin.constant_value()).is_zero:
        raise GrammarError(f"trig argument must be an integer multiple of {chart.names[p]}")
    k = lin.constant_value()
    if k.im or k.re.denominator != 1:
        raise GrammarError("harmonic multiple must be an integer")
    return int(k.re)


def _coef_node(c: GaussRat):
    def rat(x: Fraction):
        return int(x) if x.denominator == 1 else str(x)

    if not c.im:
        return rat(c.re)
    if not c.re:
        return ["*", rat(c.im), "I"]
    return ["+", rat(c.re), ["*", rat(c.im), "I"]]


def to_prefix(e: TrigPolyExpr):
    """Serialise to the prefix grammar (deterministic term order)."""
    names = e.chart.names
    terms = []
    for (mono, h), c in e._sorted_items():
        factors = [_coef_node(c)]
        for name, n in zip(names, mono):
            if n == 1:
                factors.append(name)
            elif n:
                factors.append(["^", name, n])
        if h:
            xp = names[e.chart.periodic]
            k = abs(h)
            arg = xp if k == 1 else ["*", k, xp]
            factors.append(["cos" if h > 0 else "sin", arg])
        if len(factors) > 1 and c == 1:
            factors = factors[1:]
        terms.append(factors[0] if len(factors) == 1 else ["*"] + factors)
    if not terms:
        return 0
    return terms[0] if len(terms) == 1 else ["+"] + terms
