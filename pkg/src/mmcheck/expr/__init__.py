"""Expression language, jet arithmetic and function oracles."""

from mmcheck.expr.functions import (
    CATALOG,
    CATALOG_TEXT,
    MAX_ORDER,
    AffinePullback,
    ExpFunction,
    ExpressionFunction,
    FunctionOracle,
    LinearCombination,
    LogFunction,
    PolynomialFunction,
    PowerFunction,
    RationalFunctionOracle,
    Resolvent,
    XLogXFunction,
    catalog,
    evaluate,
    function_from_text,
    resolvent,
)
from mmcheck.expr.jet import Jet
from mmcheck.expr.parser import parse, sexpr, unparse


def derivative(f, k, t):
    """``f^{(k)}(t)`` for any function oracle."""
    return f.derivative(k, t)


__all__ = [
    "CATALOG",
    "CATALOG_TEXT",
    "MAX_ORDER",
    "AffinePullback",
    "ExpFunction",
    "ExpressionFunction",
    "FunctionOracle",
    "Jet",
    "LinearCombination",
    "LogFunction",
    "PolynomialFunction",
    "PowerFunction",
    "RationalFunctionOracle",
    "Resolvent",
    "XLogXFunction",
    "catalog",
    "derivative",
    "evaluate",
    "function_from_text",
    "parse",
    "resolvent",
    "sexpr",
    "unparse",
]
