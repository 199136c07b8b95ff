"""Terms, substitutions, fresh renaming and the signature table.

The hot primitives (``apply``, ``unify``, ``match``, ``variant``) come from
the selected term kernel; everything here is thin glue around them.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Iterator, Union

from .kernel import (  # noqa: F401
    BACKEND, Fn, Var, apply, is_ground, is_var, match, occurs, term_depth,
    term_vars, unify, variant,
)

Term = Union[Var, Fn]
Substitution = Dict[Var, Term]

__all__ = [
    "BACKEND", "Fn", "Var", "Term", "Substitution", "ArityError", "FreshVars",
    "Signature", "apply", "compose", "const", "is_ground", "is_var", "match",
    "occurs", "restrict", "subterms", "term_depth", "term_vars", "unify",
    "variant", "fn", "is_idempotent",
]


class ArityError(ValueError):
    """A symbol was used with two different arities (or as two kinds)."""


def const(name: str) -> Fn:
    return Fn(name, ())


def fn(functor: str, *args: Term) -> Fn:
    return Fn(functor, args)


def compose(first: Substitution, second: Substitution) -> Substitution:
    """Substitution equivalent to applying ``first`` and then ``second``."""
    if not first:
        return dict(second)
    if not second:
        return dict(first)
    out = {}
    for v, t in first.items():
        t2 = apply(t, second)
        if t2 != v:
            out[v] = t2
    for v, t in second.items():
        if v not in first:
            out[v] = t
    return out


def restrict(subst: Substitution, variables: Iterable[Var]) -> Substitution:
    if not subst:
        return {}
    return {v: subst[v] for v in variables if v in subst}


def is_idempotent(subst: Substitution) -> bool:
    return all(apply(t, subst) == t for t in subst.values())


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order traversal of ``t`` including ``t`` itself."""
    yield t
    if type(t) is Fn:
        for a in t.args:
            yield from subterms(a)


class FreshVars:
    """Supplies variables never seen before in this solver run.

    Names start with an underscore, which TPTP variables cannot, so fresh
    variables never collide with variables read from a problem file.
    """

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)

    def var(self) -> Var:
        return Var("_%d" % next(self._counter))

    def renaming(self, variables: Iterable[Var]) -> Substitution:
        return {v: self.var() for v in variables}


class Signature:
    """Symbol table: name -> (kind, arity). Kinds are ``"pred"`` and ``"func"``."""

    def __init__(self):
        self.symbols: Dict[str, tuple] = {}

    def declare(self, name: str, arity: int, kind: str) -> None:
        known = self.symbols.get(name)
        if known is None:
            self.symbols[name] = (kind, arity)
        elif known != (kind, arity):
            raise ArityError(
                "symbol %r used as %s/%d but previously as %s/%d"
                % (name, kind, arity, known[0], known[1])
            )

    def declare_atom(self, atom: Fn) -> None:
        self.declare(atom.functor, len(atom.args), "pred")
        for a in atom.args:
            self.declare_term(a)

    def declare_term(self, t: Term) -> None:
        if type(t) is Var:
            return
        self.declare(t.functor, len(t.args), "func")
        for a in t.args:
            self.declare_term(a)

    def arity(self, name: str) -> int:
        return self.symbols[name][1]

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)
