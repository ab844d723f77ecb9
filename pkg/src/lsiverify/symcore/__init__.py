"""Exact symbolic engine: scalars, closed forms, differentiation, parsing."""
from .scalars import (ExponentExpr, GaussQ, I, ParamScalar, SymcoreError,
                      UnsupportedSubstitution, as_bindings)
from .expr import (BranchContext, BranchRequired, ClosedForm, ClosureError,
                   Coordinate, canonicalize, class_polynomials, differentiate,
                   is_zero, render, substitute_params)
from .parser import Namespace, ParseError, parse_closed_form

__all__ = [
    "BranchContext", "BranchRequired", "ClosedForm", "ClosureError", "Coordinate",
    "ExponentExpr", "GaussQ", "I", "Namespace", "ParamScalar", "ParseError",
    "SymcoreError", "UnsupportedSubstitution", "as_bindings", "canonicalize",
    "class_polynomials", "differentiate", "is_zero", "parse_closed_form", "render",
    "substitute_params",
]
