"""Constraint solving over lists, multisets, compact lists and sets built from a binary constructor."""

from .constraints import Constraint, Literal, Rel, Status, eq, mem, neq, nmem
from .equational import e_equal, eval_ground, normalize
from .limits import BranchLimitExceeded, Limits, ResourceLimit, Stats, StepLimitExceeded
from .oracle import Signature, brute_sat, enumerate_universe, is_instance
from .solver import SolveOutcome, SolvedForm, SolverConfig, Verdict, is_solved, sat
from .syntax import ParseError, format_constraint, format_term, parse, parse_term
from .terms import NIL, App, FreshSupply, Substitution, Term, Theory, Var, aggregate, cons, const, var
from .unify import UnificationProblem, UnifierSet, unify, unify_equations
from .witness import VerificationFailed, build_witness

__all__ = [
    "App", "BranchLimitExceeded", "Constraint", "FreshSupply", "Limits", "Literal", "NIL",
    "ParseError", "Rel", "ResourceLimit", "Signature", "SolveOutcome", "SolvedForm",
    "SolverConfig", "Stats", "Status", "StepLimitExceeded", "Substitution", "Term", "Theory",
    "UnificationProblem", "UnifierSet", "Var", "Verdict", "VerificationFailed",
    "aggregate", "brute_sat", "build_witness", "cons", "const", "e_equal", "enumerate_universe",
    "eq", "eval_ground", "format_constraint", "format_term", "is_instance", "is_solved", "mem",
    "neq", "nmem", "normalize", "parse", "parse_term", "sat", "unify", "unify_equations", "var",
]
