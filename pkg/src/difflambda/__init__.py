"""Workbench for the differential lambda-calculus, the resource calculus and
the relational model MRel."""

from .dmodel import Budgets, DElem, InadequateVariables, interp_eq, interpret
from .rewrite import Verdict, normalize_diff, normalize_res, theory_eq_diff, theory_eq_res
from .subst import dsubst, dsubst_multi, lsubst, rsubst, subst
from .syntax import ParseError, parse, parse_diff, parse_res, show
from .taylor import TaylorBudget, taylor, taylor_eq, taylor_nf
from .terms import DiffSum
from .resource import ResSum
from .translate import to_diff, to_res

__all__ = [
    "Budgets",
    "DElem",
    "DiffSum",
    "InadequateVariables",
    "ParseError",
    "ResSum",
    "TaylorBudget",
    "Verdict",
    "dsubst",
    "dsubst_multi",
    "interp_eq",
    "interpret",
    "lsubst",
    "normalize_diff",
    "normalize_res",
    "parse",
    "parse_diff",
    "parse_res",
    "rsubst",
    "show",
    "subst",
    "taylor",
    "taylor_eq",
    "taylor_nf",
    "theory_eq_diff",
    "theory_eq_res",
    "to_diff",
    "to_res",
]
