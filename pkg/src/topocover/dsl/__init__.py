"""A small first-order language of recursive functions over the naturals."""
from .ast import (
    Arith, Call, Choice, Clause, FunctionDef, If, Lit, NatLit, Program, Var, VarPlus, VarRef,
    format_expr, format_program,
)
from .lower import input_element, lower, lower_singleton, match
from .parser import parse, tokenize
from .validate import ERROR, WARNING, Violation, errors, function_has_choice, validate

__all__ = [
    "Arith", "Call", "Choice", "Clause", "FunctionDef", "If", "Lit", "NatLit", "Program",
    "Var", "VarPlus", "VarRef", "format_expr", "format_program", "input_element", "lower",
    "lower_singleton", "match", "parse", "tokenize", "ERROR", "WARNING", "Violation",
    "errors", "function_has_choice", "validate",
]
