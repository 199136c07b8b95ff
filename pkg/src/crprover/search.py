"""The CR search loop with its three bounding regimes.

``EP`` propagates without bound and decides only at quiescence. ``PD`` bounds
propagation by propagation depth and raises the bound once every open clause
has been put to use. ``TD`` bounds propagation by term depth and flips a
seeded coin between deciding and raising the bound. Every conflict that does
not refute the problem is learned and followed by a restart from the empty
trail.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from .clauses import Clause, Literal, Problem, clause_equals, literal_variant
from .proof import (
    Axiom, Conflict, Decision, ProofNode,
    build_upr, mk_cdcl, mk_conflict, open_decisions,
)
from .terms import FreshVars, term_depth, unify
from .trail import Trail, TrailEntry


class Variant(str, enum.Enum):
    EP = "EP"
    PD = "PD"
    TD = "TD"

    @classmethod
    def parse(cls, text: Union[str, "Variant"]) -> "Variant":
        if isinstance(text, Variant):
            return text
        try:
            return cls(str(text).upper())
        except ValueError:
            raise ValueError("unknown variant %r (expected ep, pd or td)" % text) from None


@dataclass
class SearchConfig:
    variant: Variant = Variant.EP
    initial_threshold: int = 0
    rng_seed: int = 0
    max_conflicts: Optional[int] = None
    time_budget: Optional[float] = 60.0
    debug: bool = False

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        if self.initial_threshold < 0:
            raise ValueError("initial threshold must be a natural number")
        if self.rng_seed is None:
            raise ValueError("TD needs a seed")


@dataclass
class SearchStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    restarts: int = 0
    learned_count: int = 0
    threshold: int = 0
    elapsed: float = 0.0

    def lines(self) -> List[str]:
        """Deterministic part of the statistics (no timing)."""
        return [
            "decisions: %d" % self.decisions,
            "propagations: %d" % self.propagations,
            "conflicts: %d" % self.conflicts,
            "restarts: %d" % self.restarts,
            "learned: %d" % self.learned_count,
        ]


@dataclass
class Unsatisfiable:
    refutation: ProofNode
    stats: SearchStats
    learned: List[Clause] = field(default_factory=list)
    status = "Unsatisfiable"


@dataclass
class Satisfiable:
    model: Trail
    stats: SearchStats
    learned: List[Clause] = field(default_factory=list)
    status = "Satisfiable"


@dataclass
class Unknown:
    reason: str  # "timeout", "conflictLimit" or "incomplete"
    stats: SearchStats
    learned: List[Clause] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "Timeout" if self.reason == "timeout" else "GaveUp"


SearchResult = Union[Unsatisfiable, Satisfiable, Unknown]


class Solver:
    """One run of the search on one problem. Not thread-safe; use one per thread."""

    def __init__(self, problem: Problem, config: Optional[SearchConfig] = None, cancel=None):
        self.problem = problem
        self.config = config or SearchConfig()
        self.variant = self.config.variant
        self.cancel = cancel
        self.fresh = FreshVars()
        self.rng = random.Random(self.config.rng_seed)
        self.stats = SearchStats()
        self.trail = Trail()
        self.nodes: List[ProofNode] = []
        for c, name in zip(problem.clauses, problem.names):
            self.trail.add_clause(c)
            self.nodes.append(Axiom(c, name))
        self.n_input = len(problem.clauses)
        self.learned: List[Clause] = []
        problem.learned[:] = []
        self.threshold = self.config.initial_threshold
        self.used: Dict[int, bool] = {}
        self.blocked = False
        self.cursor = 0
        self._tags = 0
        # decisions seen to lead back to an already learned clause; forgotten
        # whenever a new clause is learned, since the clause set then changed
        self.futile: List[Literal] = []
        self._deadline = None
        self._t0 = time.monotonic()

    # --- propagation ------------------------------------------------------------

    def _bound_allows(self, lit: Literal, premises: Sequence[TrailEntry]) -> bool:
        if self.variant is Variant.PD:
            depth = 1 + max(p.depth for p in premises) if premises else 0
            return depth <= self.threshold
        if self.variant is Variant.TD:
            return term_depth(lit.atom) < self.threshold
        return True

    def _try_clause(self, ci: int):
        """First propagation or conflict available from clause ``ci``, or ``None``."""
        trail = self.trail
        clause = trail.clauses[ci]
        lits = clause.literals
        n = len(lits)
        empty = [k for k in range(n) if not trail.index[(ci, k)]]
        targets = empty if empty else range(n)
        for k in targets:
            others = [j for j in range(n) if j != k]
            ren_c = self.fresh.renaming(clause.variables) if clause.variables else {}
            wants = [lits[j].apply(ren_c).dual() for j in others]
            chosen: List[TrailEntry] = []
            renamings: List[dict] = []
            found = self._search(ci, k, others, wants, 0, {}, chosen, renamings, ren_c)
            if found is not None:
                return found
        return None

    def _search(self, ci, k, others, wants, i, sigma, chosen, renamings, ren_c):
        trail = self.trail
        if i == len(others):
            return self._conclude(ci, k, sigma, chosen, renamings, ren_c)
        for seq in trail.index[(ci, others[i])]:
            e = trail.entries[seq]
            lit = e.literal
            vs = lit.variables()
            ren = self.fresh.renaming(vs) if vs else {}
            s2 = unify(lit.apply(ren).atom, wants[i].atom, sigma)
            if s2 is None:
                continue
            chosen.append(e)
            renamings.append(ren)
            got = self._search(ci, k, others, wants, i + 1, s2, chosen, renamings, ren_c)
            chosen.pop()
            renamings.pop()
            if got is not None:
                return got
        return None

    def _conclude(self, ci, k, sigma, chosen, renamings, ren_c):
        trail = self.trail
        clause = trail.clauses[ci]
        concl = clause.literals[k].apply(ren_c).apply(sigma)
        hit = trail.first_conflicting(concl)
        if hit is None:
            if trail.is_true(concl):
                return None
            if not self._bound_allows(concl, chosen):
                self.blocked = True
                return None
        units = [e.node for e in chosen]
        node = build_upr(units, self.nodes[ci], k, ren_c, list(renamings), sigma)
        if hit is not None:
            return ("conflict", mk_conflict(node, hit.node, self.fresh), ci)
        entry = trail.add_propagation(node.conclusion, node, list(chosen), ci,
                                      level=self._level())
        return ("new", entry, ci)

    def _level(self) -> int:
        return self.threshold + 1 if self.variant is not Variant.EP else 0

    def propagate_step(self):
        """One propagation, a conflict, or ``("quiescent", None)`` after a full fruitless scan."""
        self.blocked = False
        total = len(self.trail.clauses)
        start = self.cursor % total if total else 0
        for off in range(total):
            ci = (start + off) % total
            if self.trail.uniformly_satisfied_at(ci) or not self.trail.quasi_falsified(ci):
                continue
            got = self._try_clause(ci)
            if got is None:
                continue
            self.cursor = ci + 1
            kind, payload, _ = got
            if kind == "new":
                self.stats.propagations += 1
                self.used[ci] = True
            return kind, payload
        return "quiescent", None

    # --- decisions ---------------------------------------------------------------

    def _is_futile(self, lit: Literal) -> bool:
        return any(literal_variant(lit, f) for f in self.futile)

    def _eligible(self, lit: Literal) -> bool:
        return (not self.trail.is_falsified(lit) and not self._is_futile(lit)
                and not self.trail.useless_decision(lit, self.learned))

    def _weakly_satisfied(self, c: Clause) -> bool:
        if c.is_empty:
            return False
        return all(self._is_futile(lit) or self.trail.useless_decision(lit, self.learned)
                   for lit in c.literals)

    def open_clauses(self) -> List[int]:
        """Clauses neither uniformly nor (for EP and PD) weakly satisfied."""
        out = []
        for ci, c in enumerate(self.trail.clauses):
            if self.trail.uniformly_satisfied_at(ci):
                continue
            if self.variant is not Variant.TD and self._weakly_satisfied(c):
                continue
            out.append(ci)
        return out

    def choose_decision(self, candidates: Optional[List[int]] = None) -> Optional[Literal]:
        if candidates is None:
            candidates = self.open_clauses()
        for ci in candidates:
            for lit in self.trail.clauses[ci].literals:
                if self._eligible(lit):
                    return self._freshen(lit)
        return None

    def fallback_decision(self) -> Optional[Literal]:
        """A literal from the first relevant instance the trail leaves unsatisfied."""
        for c in self.problem.clauses + self.learned:
            inst = self.trail.first_unsatisfied_instance(c)
            if inst is None:
                continue
            for lit in inst.literals:
                if (not self.trail.is_falsified(lit) and not self.trail.is_strongly_true(lit)
                        and not self._is_futile(lit)):
                    return self._freshen(lit)
        return None

    def _freshen(self, lit: Literal) -> Literal:
        vs = lit.variables()
        return lit.apply(self.fresh.renaming(vs)) if vs else lit

    def decide(self, lit: Literal):
        node = Decision(lit, self._tags)
        self._tags += 1
        self.stats.decisions += 1
        hits = list(self.trail.unifiable_entries(lit.dual()))
        if hits:
            hit = self.trail.informative_conflict(lit, hits, self.learned) or hits[0]
            return mk_conflict(node, hit.node, self.fresh)
        self.trail.add_decision(lit, node, level=self._level())
        return None

    def certify(self) -> bool:
        return all(self.trail.satisfied_by_relevant_instances(c) for c in self.problem.clauses)

    # --- conflicts ------------------------------------------------------------------

    def handle_conflict(self, conflict: Conflict) -> Optional[SearchResult]:
        self.stats.conflicts += 1
        cdcl = mk_cdcl(conflict)
        if cdcl.clause.is_empty:
            return self._finish(Unsatisfiable(conflict, self.stats))
        self.stats.restarts += 1
        duplicate = any(clause_equals(cdcl.clause, c) for c in self.learned)
        if duplicate:
            latest = max(open_decisions(conflict), key=lambda d: d.tag)
            self.futile.append(latest.literal)
        else:
            self.futile.clear()
            self.learned.append(cdcl.clause)
            self.problem.learned.append(cdcl.clause)
            self.trail.add_clause(cdcl.clause)
            self.nodes.append(cdcl)
            self.stats.learned_count += 1
        self.trail.reset()
        self.cursor = 0
        limit = self.config.max_conflicts
        if limit is not None and self.stats.conflicts >= limit:
            return self._finish(Unknown("conflictLimit", self.stats))
        return None

    def _raise_threshold(self) -> None:
        self.threshold += 1
        self.used.clear()

    # --- main loop -----------------------------------------------------------------

    def _finish(self, result):
        result.learned = list(self.learned)
        self.stats.threshold = self.threshold
        self.stats.elapsed = time.monotonic() - self._t0
        return result

    def _check_budget(self) -> Optional[SearchResult]:
        if self._deadline is not None and time.monotonic() >= self._deadline:
            return self._finish(Unknown("timeout", self.stats))
        if self.cancel is not None and self.cancel.is_set():
            return self._finish(Unknown("timeout", self.stats))
        return None

    def solve(self) -> SearchResult:
        self._t0 = time.monotonic()
        budget = self.config.time_budget
        self._deadline = self._t0 + budget if budget is not None else None
        if any(c.is_empty for c in self.problem.clauses):
            i = next(i for i, c in enumerate(self.problem.clauses) if c.is_empty)
            return self._finish(Unsatisfiable(self.nodes[i], self.stats))
        while True:
            stop = self._check_budget()
            if stop is not None:
                return stop
            kind, payload = self.propagate_step()
            if kind == "new":
                if self.config.debug:
                    self._dump()
                continue
            if kind == "conflict":
                res = self.handle_conflict(payload)
                if res is not None:
                    return res
                continue
            res = self._at_quiescence()
            if res is not None:
                return res

    def _at_quiescence(self) -> Optional[SearchResult]:
        v = self.variant
        blocked = self.blocked
        if v is Variant.PD:
            cands = self.open_clauses()
            if cands and all(self.used.get(ci) for ci in cands):
                self._raise_threshold()
                return None
            lit = self.choose_decision(cands)
        elif v is Variant.TD:
            lit = self.choose_decision()
            if lit is not None and self.rng.random() >= 0.5:
                self._raise_threshold()
                return None
        else:
            lit = self.choose_decision()
        if lit is None:
            if blocked:
                self._raise_threshold()
                return None
            if self.certify():
                return self._finish(Satisfiable(self.trail, self.stats))
            lit = self.fallback_decision()
            if lit is None:
                return self._finish(Unknown("incomplete", self.stats))
        conflict = self.decide(lit)
        if conflict is not None:
            return self.handle_conflict(conflict)
        return None

    def _dump(self) -> None:
        import sys
        print(self.trail.dump(), file=sys.stderr)


def solve(problem: Problem, config: Optional[SearchConfig] = None, cancel=None) -> SearchResult:
    return Solver(problem, config, cancel).solve()
