from .diffop import DiffOp, OrderOverflow, compose, op_commutator
from .expr import Chart, ChartMismatch, TrigPolyExpr
from .forms import DiffForm, TensorField, contract2, exterior_d, interior, lie_derivative, wedge
from .grammar import GrammarError, parse_expr, to_prefix

__all__ = [
    "Chart",
    "ChartMismatch",
    "DiffForm",
    "DiffOp",
    "GrammarError",
    "OrderOverflow",
    "TensorField",
    "TrigPolyExpr",
    "compose",
    "contract2",
    "exterior_d",
    "interior",
    "lie_derivative",
    "op_commutator",
    "parse_expr",
    "to_prefix",
    "wedge",
]
