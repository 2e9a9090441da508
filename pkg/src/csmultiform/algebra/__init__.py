"""Exact exterior algebra of matrix-valued forms with polynomial coefficients."""

from .atoms import FieldAtom, curvature_atom, decode, field, variation
from .forms import (
    MatrixForm,
    ScalarForm,
    exterior_derivative,
    scalar_wedge,
    trace,
    trace_wedge,
    wedge,
    wedge_all,
    word_indices,
    word_mask,
)
from .scalar import ScalarExpr
from .serialize import format_expr, format_form, parse_expr, parse_form

__all__ = [
    "FieldAtom",
    "MatrixForm",
    "ScalarExpr",
    "ScalarForm",
    "curvature_atom",
    "decode",
    "exterior_derivative",
    "field",
    "format_expr",
    "format_form",
    "parse_expr",
    "parse_form",
    "scalar_wedge",
    "trace",
    "trace_wedge",
    "variation",
    "wedge",
    "wedge_all",
    "word_indices",
    "word_mask",
]
