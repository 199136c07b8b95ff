"""Reference oracles that share no reasoning code with the prover.

Clauses are converted once to plain tuples: a literal is ``(sign, atom)``
where an atom or term is a string (variable names start upper-case) or a
tuple ``(functor, arg, ...)``. Everything below works on that form only.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple


# --- conversion ---------------------------------------------------------------


def to_plain_term(t):
    if hasattr(t, "functor"):
        return (t.functor,) + tuple(to_plain_term(a) for a in t.args)
    return "V:" + t.name


def to_plain_clause(c) -> Tuple[Tuple[bool, tuple], ...]:
    return tuple((lit.positive, to_plain_term(lit.atom)) for lit in c.literals)


def _is_var(t) -> bool:
    return isinstance(t, str)


def _subst(t, env):
    if _is_var(t):
        return env.get(t, t)
    return (t[0],) + tuple(_subst(a, env) for a in t[1:])


def _vars(t, acc):
    if _is_var(t):
        if t not in acc:
            acc.append(t)
    else:
        for a in t[1:]:
            _vars(a, acc)
    return acc


def _constants(t, acc):
    if not _is_var(t):
        if len(t) == 1:
            acc.add(t)
        for a in t[1:]:
            _constants(a, acc)
    return acc


# --- propositional reasoning ----------------------------------------------------


def truth_table_models(clauses: Sequence[Sequence[Tuple[bool, object]]]):
    """Yield every assignment (dict atom -> bool) satisfying ``clauses``."""
    atoms = sorted({a for c in clauses for _, a in c}, key=repr)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if all(any(val[a] == s for s, a in c) for c in clauses):
            yield val


def truth_table_sat(clauses) -> bool:
    return next(truth_table_models(clauses), None) is not None


def truth_table_entails(clauses, clause) -> bool:
    atoms = sorted({a for c in list(clauses) + [clause] for _, a in c}, key=repr)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if all(any(val[a] == s for s, a in c) for c in clauses):
            if not any(val[a] == s for s, a in clause):
                return False
    return True


def dpll_sat(clauses) -> bool:
    """Plain DPLL with unit propagation over hashable atoms."""
    clauses = [frozenset(c) for c in clauses]
    return _dpll(clauses, {})


def _dpll(clauses, val) -> bool:
    while True:
        simplified = []
        unit = None
        for c in clauses:
            if any(val.get(a) == s for s, a in c):
                continue
            rest = [(s, a) for s, a in c if a not in val]
            if not rest:
                return False
            if len(rest) == 1 and unit is None:
                unit = rest[0]
            simplified.append(rest)
        if not simplified:
            return True
        if unit is None:
            break
        val = dict(val)
        val[unit[1]] = unit[0]
        clauses = simplified
    s, a = simplified[0][0]
    for choice in (s, not s):
        v2 = dict(val)
        v2[a] = choice
        if _dpll(simplified, v2):
            return True
    return False


# --- function-free grounding ------------------------------------------------------------


def ground_function_free(clauses) -> List[Tuple[Tuple[bool, tuple], ...]]:
    """All ground instances over the constants of ``clauses``.

    Raises ``ValueError`` if a function symbol of arity > 0 occurs in a term.
    """
    consts: Set[tuple] = set()
    for c in clauses:
        for _, atom in c:
            for a in atom[1:]:
                if not _is_var(a) and len(a) > 1:
                    raise ValueError("not function-free")
                _constants(a, consts)
    if not consts:
        consts = {("c0",)}
    universe = sorted(consts)
    out = []
    for c in clauses:
        vs: List[str] = []
        for _, atom in c:
            _vars(atom, vs)
        for combo in itertools.product(universe, repeat=len(vs)):
            env = dict(zip(vs, combo))
            out.append(tuple((s, _subst(a, env)) for s, a in c))
    return out


def epr_sat(clauses) -> bool:
    return dpll_sat(ground_function_free(clauses))


# --- instance generators ----------------------------------------------------------------


def random_ground_cnf(rng: random.Random, max_atoms: int = 8, max_clauses: int = 40,
                      max_len: int = 3) -> List[List[Tuple[bool, str]]]:
    n_atoms = rng.randint(1, max_atoms)
    n_clauses = rng.randint(1, max_clauses)
    out = []
    for _ in range(n_clauses):
        k = rng.randint(1, max_len)
        out.append([(rng.random() < 0.5, "a%d" % rng.randrange(n_atoms)) for _ in range(k)])
    return out


def plain_to_tptp(clauses: Iterable[Sequence[Tuple[bool, str]]]) -> str:
    lines = []
    for i, c in enumerate(clauses):
        body = " | ".join(("" if s else "~") + a for s, a in c)
        lines.append("cnf(g%d, axiom, (%s))." % (i, body))
    return "\n".join(lines) + "\n"
