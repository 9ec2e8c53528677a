from fractions import Fraction

import pytest
from hypothesis import given

from kgfint.rational import I
from kgfint.symb import GrammarError, parse_expr, to_prefix

from strategies import trig_chart, trig_exprs


@given(trig_exprs(max_terms=4))
def test_prefix_roundtrip(e):
    assert parse_expr(to_prefix(e), e.chart) == e


def test_parse_examples():
    ch = trig_chart()
    x1, x2, x3 = ch.coords()
    assert parse_expr(["*", ["cos", "x3"], "x1"], ch) == x1 * ch.cos()
    assert parse_expr(["sin", ["*", 2, "x3"]], ch) == ch.sin(2)
    assert parse_expr(["sin", ["-", "x3"]], ch) == -ch.sin()
    assert parse_expr(["/", ["^", "x2", 2], "1/2"], ch) == x2 * x2 * 2
    assert parse_expr(["+", "I", "3/4"], ch).constant_value() == I + Fraction(3, 4)


@pytest.mark.parametrize(
    "node",
    [["cos", "x1"], ["cos", ["*", "1/2", "x3"]], ["frob", 1], "y", ["/", "x1", "x2"], ["^", "x1", -1], True, []],
)
def test_grammar_errors(node):
    with pytest.raises(GrammarError):
        parse_expr(node, trig_chart())
