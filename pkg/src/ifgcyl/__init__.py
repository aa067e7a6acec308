"""Team semantics for IFG logic and IFG-cylindric set algebras over finite structures."""
from .budget import Budget
from .errors import BudgetExceeded, FormulaSyntaxError, IFGError, StructureError, WellFormednessError
from .formula import Formula, is_perfect, parse, perfection, subformula_tree, polarity
from .model import Structure, load_structure, parse_structure, tarski_eval
from .semantics import is_false, is_true, meaning, models_minus, models_plus

__all__ = [
    "Budget", "BudgetExceeded", "FormulaSyntaxError", "IFGError", "StructureError",
    "WellFormednessError", "Formula", "is_perfect", "parse", "perfection",
    "subformula_tree", "polarity", "Structure", "load_structure", "parse_structure",
    "tarski_eval", "is_false", "is_true", "meaning", "models_minus", "models_plus",
]
