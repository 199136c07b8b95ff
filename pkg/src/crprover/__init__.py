"""Conflict Resolution prover for first-order clause sets."""

from .clauses import (
    EMPTY_CLAUSE, Clause, Literal, Problem, clause_equals, dual, format_clause,
    format_literal, relevant_instances,
)
from .proof import (
    Axiom, Conflict, ConflictDrivenClauseLearning, Decision, ProofError, RuleViolation,
    UnitPropagatingResolution, analyze_conflict, check_refutation, export_proof,
    mk_cdcl, mk_conflict, mk_upr, parse_proof,
)
from .search import (
    Satisfiable, SearchConfig, SearchStats, Solver, Unknown, Unsatisfiable, Variant, solve,
)
from .terms import BACKEND, Fn, FreshVars, Var, apply, compose, term_depth, unify
from .tptp import ParseDiagnostic, TPTPParseError, format_problem, parse_problem, parse_string
from .trail import Trail, TrailEntry

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "EMPTY_CLAUSE", "Axiom", "Clause", "Conflict", "ConflictDrivenClauseLearning",
    "Decision", "Fn", "FreshVars", "Literal", "ParseDiagnostic", "Problem", "ProofError",
    "RuleViolation", "Satisfiable", "SearchConfig", "SearchStats", "Solver", "TPTPParseError",
    "Trail", "TrailEntry", "UnitPropagatingResolution", "Unknown", "Unsatisfiable", "Var",
    "Variant", "analyze_conflict", "apply", "check_refutation", "clause_equals", "compose",
    "dual", "export_proof", "format_clause", "format_literal", "format_problem", "mk_cdcl",
    "mk_conflict", "mk_upr", "parse_problem", "parse_proof", "parse_string",
    "relevant_instances", "solve", "term_depth", "unify",
]
