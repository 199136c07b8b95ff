"""Literals, sequent clauses, problems and clause-level queries."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .terms import (
    FreshVars, Fn, Signature, Substitution, Term, Var, apply, term_vars,
    variant,
)


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Fn

    @property
    def key(self) -> Tuple[bool, str, int]:
        """Polarity and predicate symbol; literals with different keys never unify."""
        return (self.positive, self.atom.functor, len(self.atom.args))

    def dual(self) -> "Literal":
        return Literal(not self.positive, self.atom)

    def apply(self, subst: Substitution) -> "Literal":
        if not subst:
            return self
        atom = apply(self.atom, subst)
        if atom is self.atom:
            return self
        return Literal(self.positive, atom)

    def variables(self) -> Dict[Var, None]:
        return term_vars(self.atom)

    def __str__(self) -> str:
        return format_literal(self)


def dual(lit: Literal) -> Literal:
    return lit.dual()


def pos(atom: Fn) -> Literal:
    return Literal(True, atom)


def neg(atom: Fn) -> Literal:
    return Literal(False, atom)


def _dedupe(atoms: Iterable[Fn]) -> Tuple[Fn, ...]:
    return tuple(dict.fromkeys(atoms))


@dataclass(frozen=True)
class Clause:
    """Two-sided sequent: ``antecedent`` holds the atoms of negative literals,
    ``succedent`` those of positive ones. Both sides have set semantics and
    keep first-occurrence order. The empty clause is the refuted state."""

    antecedent: Tuple[Fn, ...] = ()
    succedent: Tuple[Fn, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "antecedent", _dedupe(self.antecedent))
        object.__setattr__(self, "succedent", _dedupe(self.succedent))

    @classmethod
    def of(cls, literals: Iterable[Literal]) -> "Clause":
        ante, succ = [], []
        for lit in literals:
            (succ if lit.positive else ante).append(lit.atom)
        return cls(tuple(ante), tuple(succ))

    @cached_property
    def literals(self) -> Tuple[Literal, ...]:
        return tuple(Literal(False, a) for a in self.antecedent) + tuple(
            Literal(True, a) for a in self.succedent
        )

    @property
    def is_empty(self) -> bool:
        return not self.antecedent and not self.succedent

    @property
    def is_unit(self) -> bool:
        return len(self.antecedent) + len(self.succedent) == 1

    def __len__(self) -> int:
        return len(self.antecedent) + len(self.succedent)

    @cached_property
    def variables(self) -> Tuple[Var, ...]:
        acc: Dict[Var, None] = {}
        for a in self.antecedent + self.succedent:
            term_vars(a, acc)
        return tuple(acc)

    @property
    def is_ground(self) -> bool:
        return not self.variables

    def apply(self, subst: Substitution) -> "Clause":
        if not subst:
            return self
        return Clause(
            tuple(apply(a, subst) for a in self.antecedent),
            tuple(apply(a, subst) for a in self.succedent),
        )

    def __str__(self) -> str:
        return format_clause(self)


EMPTY_CLAUSE = Clause()


def clause_queries(c: Clause) -> dict:
    return {"isEmpty": c.is_empty, "isUnit": c.is_unit, "literals": c.literals}


def rename_clause(c: Clause, fresh: FreshVars) -> Tuple[Clause, Substitution]:
    """Variant of ``c`` over fresh variables, plus the renaming used."""
    if not c.variables:
        return c, {}
    ren = fresh.renaming(c.variables)
    return c.apply(ren), ren


def relevant_instances(c: Clause, terms: Sequence[Term]) -> List[Clause]:
    """Every instance of ``c`` replacing each variable by a term from ``terms``.

    Ground clauses yield themselves; a non-ground clause with no terms yields
    nothing.
    """
    vs = c.variables
    if not vs:
        return [c]
    terms = list(dict.fromkeys(terms))
    if not terms:
        return []
    out = []
    for combo in itertools.product(terms, repeat=len(vs)):
        out.append(c.apply(dict(zip(vs, combo))))
    return list(dict.fromkeys(out))


def clause_equals(c1: Clause, c2: Clause) -> bool:
    """Equality as sequents up to a consistent renaming of variables."""
    if len(c1.antecedent) != len(c2.antecedent) or len(c1.succedent) != len(c2.succedent):
        return False
    if c1 == c2:
        return True
    lits1 = c1.literals
    lits2 = c2.literals
    used = [False] * len(lits2)

    def search(i, fwd, bwd):
        if i == len(lits1):
            return True
        a = lits1[i]
        for j, b in enumerate(lits2):
            if used[j] or a.key != b.key:
                continue
            r = variant(a.atom, b.atom, fwd, bwd)
            if r is None:
                continue
            used[j] = True
            if search(i + 1, r[0], r[1]):
                return True
            used[j] = False
        return False

    return search(0, None, None)


def is_tautology(c: Clause) -> bool:
    """Some atom occurs on both sides (syntactically)."""
    if not c.antecedent or not c.succedent:
        return False
    return not set(c.antecedent).isdisjoint(c.succedent)


def literal_variant(a: Literal, b: Literal) -> bool:
    return a.key == b.key and variant(a.atom, b.atom) is not None


@dataclass
class Problem:
    """A loaded clause set. ``learned`` is appended to by the search engine only."""

    clauses: List[Clause]
    names: List[str] = field(default_factory=list)
    roles: List[str] = field(default_factory=list)
    signature: Signature = field(default_factory=Signature)
    name: str = "problem"
    learned: List[Clause] = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        n = len(self.clauses)
        if len(self.names) < n:
            self.names = list(self.names) + ["c%d" % (i + 1) for i in range(len(self.names), n)]
        if len(self.roles) < n:
            self.roles = list(self.roles) + ["axiom"] * (n - len(self.roles))
        if not len(self.signature):
            for c in self.clauses:
                for a in c.antecedent + c.succedent:
                    self.signature.declare_atom(a)

    @classmethod
    def from_clauses(cls, clauses: Iterable[Clause], name: str = "problem") -> "Problem":
        return cls(list(clauses), name=name)


# --- text rendering (TPTP syntax) -------------------------------------------

_LOWER_WORD = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_NUMBER = re.compile(r"[+-]?[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?\Z|[+-]?[0-9]+/[0-9]+\Z")
_DOLLAR_WORD = re.compile(r"\$\$?[a-z][A-Za-z0-9_]*\Z")


def format_symbol(name: str) -> str:
    if _LOWER_WORD.match(name) or _NUMBER.match(name) or _DOLLAR_WORD.match(name):
        return name
    if len(name) >= 2 and name[0] == '"' and name[-1] == '"':
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_term(t: Term) -> str:
    if type(t) is Var:
        return t.name
    if not t.args:
        return format_symbol(t.functor)
    return "%s(%s)" % (format_symbol(t.functor), ",".join(format_term(a) for a in t.args))


def format_literal(lit: Literal) -> str:
    atom = lit.atom
    if atom.functor == "=" and len(atom.args) == 2:
        op = "=" if lit.positive else "!="
        return "%s %s %s" % (format_term(atom.args[0]), op, format_term(atom.args[1]))
    text = format_term(atom)
    return text if lit.positive else "~" + text


def format_clause(c: Clause) -> str:
    if c.is_empty:
        return "$false"
    return " | ".join(format_literal(lit) for lit in c.literals)


def format_substitution(subst: Optional[Substitution]) -> str:
    if not subst:
        return "{}"
    items = sorted(subst.items(), key=lambda kv: _var_sort_key(kv[0].name))
    return "{" + ", ".join("%s->%s" % (v.name, format_term(t)) for v, t in items) + "}"


def _var_sort_key(name: str):
    if name.startswith("_") and name[1:].isdigit():
        return (1, int(name[1:]), name)
    return (0, 0, name)
