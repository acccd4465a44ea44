"""Exact identification of read-once Boolean functions with queries."""

from .core import PartialAssignment, TotalAssignment, TruthTable
from .formula import ReadOnceFormula, parse_formula, truth_table

__all__ = [
    "PartialAssignment",
    "ReadOnceFormula",
    "TotalAssignment",
    "TruthTable",
    "parse_formula",
    "truth_table",
]
__version__ = "0.1.0"
