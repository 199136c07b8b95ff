"""The model under construction.

A :class:`Trail` is an ordered list of decision and propagated literals. Next
to the entries it keeps, for every literal position of every registered
clause, the entries whose literal unifies with the dual of that clause
literal. A clause with at most one position whose set is empty is
*quasi-falsified* and is worth trying for propagation.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .clauses import Clause, Literal, clause_equals, format_literal, is_tautology
from .terms import Fn, Var, apply, is_ground, match, term_vars, unify, variant


@dataclass(eq=False)
class TrailEntry:
    literal: Literal
    node: object  # Decision or UnitPropagatingResolution proof node
    depth: int
    seq: int
    premises: Tuple[int, ...] = ()
    clause_index: Optional[int] = None
    level: int = 0

    @property
    def is_decision(self) -> bool:
        return self.clause_index is None

    def __str__(self) -> str:
        tag = "decision" if self.is_decision else "c%d" % self.clause_index
        return "%d. %s  [%s, depth %d]" % (self.seq, format_literal(self.literal), tag, self.depth)


class Trail:
    def __init__(self, clauses: Sequence[Clause] = ()):
        self.entries: List[TrailEntry] = []
        self.clauses: List[Clause] = []
        self.index: Dict[Tuple[int, int], List[int]] = {}
        self._by_key: Dict[tuple, List[TrailEntry]] = defaultdict(list)
        # ground literals hash directly; only open entries need matching
        self._ground: set = set()
        self._open: Dict[tuple, List[TrailEntry]] = defaultdict(list)
        self._positions: Dict[tuple, List[Tuple[int, int]]] = defaultdict(list)
        self._probes: List[Tuple[Fn, ...]] = []
        self._terms: Dict[object, None] = {}
        self._probe_counter = itertools.count()
        self._usat: Dict[int, int] = {}  # clause -> entries already scanned, or -1 once satisfied
        for c in clauses:
            self.add_clause(c)

    # --- clause registration ------------------------------------------------

    def _probe_var(self) -> Var:
        return Var("#%d" % next(self._probe_counter))

    def _apart(self, atom: Fn) -> Fn:
        """Rename ``atom`` into the probe namespace no entry ever uses."""
        vs = term_vars(atom)
        if not vs:
            return atom
        return apply(atom, {v: self._probe_var() for v in vs})

    def add_clause(self, c: Clause) -> int:
        ci = len(self.clauses)
        self.clauses.append(c)
        ren = {v: self._probe_var() for v in c.variables}
        probes = tuple(apply(lit.atom, ren) for lit in c.literals)
        self._probes.append(probes)
        for k, lit in enumerate(c.literals):
            self._positions[lit.dual().key].append((ci, k))
            hits = []
            for e in self._by_key.get(lit.dual().key, ()):
                if unify(e.literal.atom, probes[k]) is not None:
                    hits.append(e.seq)
            self.index[(ci, k)] = hits
        return ci

    # --- mutation -------------------------------------------------------------

    def add_decision(self, lit: Literal, node, level: int = 0) -> TrailEntry:
        return self._push(lit, node, 0, (), None, level)

    def add_propagation(self, lit: Literal, node, premises: Sequence[TrailEntry] = (),
                        clause_index: int = -1, level: int = 0) -> TrailEntry:
        depth = 0 if not premises else 1 + max(p.depth for p in premises)
        return self._push(lit, node, depth, tuple(p.seq for p in premises), clause_index, level)

    def _push(self, lit, node, depth, premises, clause_index, level) -> TrailEntry:
        if self.is_strongly_true(lit):
            raise ValueError("literal %s is already on the trail" % format_literal(lit))
        e = TrailEntry(lit, node, depth, len(self.entries), premises, clause_index, level)
        self.entries.append(e)
        self._by_key[lit.key].append(e)
        if is_ground(lit.atom):
            self._ground.add(lit)
        else:
            self._open[lit.key].append(e)
        for ci, k in self._positions.get(lit.key, ()):
            if unify(lit.atom, self._probes[ci][k]) is not None:
                self.index[(ci, k)].append(e.seq)
        for a in lit.atom.args:
            _collect_subterms(a, self._terms)
        return e

    def reset(self) -> None:
        self.entries.clear()
        self._by_key.clear()
        self._ground.clear()
        self._open.clear()
        self._terms.clear()
        self._usat.clear()
        for key in self.index:
            self.index[key] = []

    # --- truth queries ----------------------------------------------------------

    def is_true(self, lit: Literal) -> bool:
        """Some trail literal generalises ``lit``."""
        if lit in self._ground:
            return True
        # a ground entry generalises only itself
        entries = self._open.get(lit.key, ()) if is_ground(lit.atom) else self._by_key.get(lit.key, ())
        for e in entries:
            if match(e.literal.atom, lit.atom) is not None:
                return True
        return False

    def is_strongly_true(self, lit: Literal) -> bool:
        """``lit`` is on the trail up to variable renaming."""
        if is_ground(lit.atom):
            return lit in self._ground
        for e in self._open.get(lit.key, ()):
            if variant(e.literal.atom, lit.atom) is not None:
                return True
        return False

    def is_falsified(self, lit: Literal) -> bool:
        return self.is_true(lit.dual())

    def unifiable_entries(self, lit: Literal) -> Iterator[TrailEntry]:
        """Entries whose literal unifies with ``lit`` (renamed apart)."""
        entries = self._by_key.get(lit.key)
        if not entries:
            return
        atom = self._apart(lit.atom)
        for e in entries:
            if unify(e.literal.atom, atom) is not None:
                yield e

    def first_conflicting(self, lit: Literal) -> Optional[TrailEntry]:
        """First entry whose literal unifies with the dual of ``lit``."""
        for e in self.unifiable_entries(lit.dual()):
            return e
        return None

    # --- clause queries -----------------------------------------------------------

    def uniformly_satisfied(self, c: Clause) -> bool:
        return any(self.is_true(lit) for lit in c.literals)

    def uniformly_satisfied_at(self, ci: int) -> bool:
        """Cached :meth:`uniformly_satisfied` for a registered clause.

        Truth only grows while the trail grows, so only entries added since the
        last call need to be examined.
        """
        seen = self._usat.get(ci, 0)
        if seen < 0:
            return True
        n = len(self.entries)
        if seen == n:
            return False
        c = self.clauses[ci]
        for e in self.entries[seen:]:
            for lit in c.literals:
                if lit.key == e.literal.key and match(e.literal.atom, lit.atom) is not None:
                    self._usat[ci] = -1
                    return True
        self._usat[ci] = n
        return False

    def quasi_falsified(self, ci: int) -> bool:
        n = len(self.clauses[ci])
        empty = 0
        for k in range(n):
            if not self.index[(ci, k)]:
                empty += 1
                if empty > 1:
                    return False
        return True

    @property
    def model_terms(self) -> List[object]:
        """Ground subterms of trail literals, in order of first appearance."""
        return [t for t in self._terms if is_ground(t)]

    def satisfied_by_relevant_instances(self, c: Clause) -> bool:
        return self.first_unsatisfied_instance(c) is None

    def first_unsatisfied_instance(self, c: Clause) -> Optional[Clause]:
        if self.uniformly_satisfied(c):
            return None
        vs = c.variables
        if not vs:
            return None if is_tautology(c) else c
        terms = self.model_terms
        for combo in itertools.product(terms, repeat=len(vs)):
            inst = c.apply(dict(zip(vs, combo)))
            # a tautological instance holds in every interpretation
            if not self.uniformly_satisfied(inst) and not is_tautology(inst):
                return inst
        return None

    def useless_decision(self, lit: Literal, learned: Sequence[Clause]) -> bool:
        """Every immediate conflict of deciding ``lit`` teaches nothing new.

        For each entry whose literal unifies with the dual of ``lit`` the clause
        that conflict would learn is computed; the decision is useless when all
        such clauses are already learned, tautologies, or units whose literal
        is true.
        A literal with no immediate conflict is not useless.
        """
        hits = list(self.unifiable_entries(lit.dual()))
        if not hits:
            return False
        return self.informative_conflict(lit, hits, learned) is None

    def informative_conflict(self, lit: Literal, hits: Sequence[TrailEntry],
                             learned: Sequence[Clause]) -> Optional[TrailEntry]:
        """First entry in ``hits`` whose conflict with decision ``lit`` learns something new.

        Nothing is new about a clause already learned, a unit whose literal is
        already true, or a tautology.
        """
        from .proof import Decision, analyze_conflict, mk_conflict

        probe = Decision(lit, -1)
        for e in hits:
            clause = analyze_conflict(mk_conflict(probe, e.node))
            if clause.is_unit and self.is_true(clause.literals[0]):
                continue
            if is_tautology(clause):
                continue
            if any(clause_equals(clause, c) for c in learned):
                continue
            return e
        return None

    def weakly_satisfied(self, c: Clause, learned: Sequence[Clause]) -> bool:
        if c.is_empty:
            return False
        return all(self.useless_decision(lit, learned) for lit in c.literals)

    # --- debugging ----------------------------------------------------------------

    def recompute_index(self) -> Dict[Tuple[int, int], List[int]]:
        out = {}
        for ci, c in enumerate(self.clauses):
            for k, lit in enumerate(c.literals):
                d = lit.dual()
                out[(ci, k)] = [
                    e.seq for e in self.entries
                    if e.literal.key == d.key and unify(e.literal.atom, self._probes[ci][k]) is not None
                ]
        return out

    def literals(self) -> List[Literal]:
        return [e.literal for e in self.entries]

    def dump(self) -> str:
        return "\n".join(str(e) for e in self.entries) or "(empty trail)"

    def __len__(self) -> int:
        return len(self.entries)


def _collect_subterms(t, acc: Dict[object, None]) -> None:
    acc[t] = None
    if type(t) is Fn:
        for a in t.args:
            _collect_subterms(a, acc)

