"""Command line, expression language and JSON documents."""

from .main import build_parser, main
from .parser import EvalError, Evaluator, ParseError, evaluate, parse

__all__ = ["EvalError", "Evaluator", "ParseError", "build_parser", "evaluate", "main", "parse"]
