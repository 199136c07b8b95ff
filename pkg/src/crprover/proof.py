"""Conflict Resolution derivations.

Nodes form a DAG. Every inference node stores the substitutions it applied to
each premise, so a premise's conclusion instantiated by the stored
substitution must equal what the rule consumed. Those equalities are the
side conditions :meth:`ProofNode.validate` checks.

Unit premises and clause premises are always renamed apart before unifying,
so each inference has its own variable namespace and a node's conclusion
never shares variables with other trail literals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .clauses import (
    EMPTY_CLAUSE, Clause, Literal, Problem, clause_equals, format_clause,
    format_literal, format_substitution,
)
from .terms import FreshVars, Substitution, apply, compose, restrict, unify

_DEFAULT_FRESH = FreshVars()


class RuleViolation(ValueError):
    """An inference whose side conditions do not hold."""


class ProofError(ValueError):
    """A refutation rejected by :func:`check_refutation`."""

    def __init__(self, node_id: int, rule: str, message: str):
        self.node_id = node_id
        self.rule = rule
        super().__init__("node %d (%s): %s" % (node_id, rule, message))


class ProofNode:
    rule = "?"

    @property
    def premises(self) -> Tuple["ProofNode", ...]:
        return ()

    @property
    def conclusion(self) -> Union[Clause, Literal]:
        raise NotImplementedError

    @property
    def concludes_literal(self) -> bool:
        return isinstance(self.conclusion, Literal)

    def validate(self) -> None:
        pass


@dataclass(frozen=True, eq=False)
class Axiom(ProofNode):
    clause: Clause
    name: str = ""
    rule = "axiom"

    @property
    def conclusion(self) -> Clause:
        return self.clause


@dataclass(frozen=True, eq=False)
class Decision(ProofNode):
    literal: Literal
    tag: int
    rule = "decision"

    @property
    def conclusion(self) -> Literal:
        return self.literal


@dataclass(frozen=True, eq=False)
class UnitPropagatingResolution(ProofNode):
    """``units[i]`` resolves against clause position ``positions[i]``;
    the remaining position ``target`` is the conclusion."""

    units: Tuple[ProofNode, ...]
    clause_node: ProofNode
    target: int
    clause_sub: Substitution
    unit_subs: Tuple[Substitution, ...]
    conclusion_literal: Literal
    rule = "upr"

    @property
    def premises(self):
        return (self.clause_node,) + tuple(self.units)

    @property
    def conclusion(self) -> Literal:
        return self.conclusion_literal

    @property
    def positions(self) -> List[int]:
        n = len(self.clause_node.conclusion)
        return [k for k in range(n) if k != self.target]

    def validate(self) -> None:
        clause = self.clause_node.conclusion
        if not isinstance(clause, Clause):
            raise RuleViolation("clause premise does not conclude a clause")
        lits = clause.literals
        if not 0 <= self.target < len(lits):
            raise RuleViolation("target position %d out of range" % self.target)
        if len(self.units) != len(lits) - 1 or len(self.unit_subs) != len(self.units):
            raise RuleViolation("expected %d unit premises, got %d" % (len(lits) - 1, len(self.units)))
        for unit, sub, k in zip(self.units, self.unit_subs, self.positions):
            u = unit.conclusion
            if not isinstance(u, Literal):
                raise RuleViolation("premise for position %d is not a unit" % k)
            if u.apply(sub) != lits[k].apply(self.clause_sub).dual():
                raise RuleViolation("position %d: unit %s does not resolve with %s"
                                    % (k, format_literal(u), format_literal(lits[k])))
        if self.conclusion_literal != lits[self.target].apply(self.clause_sub):
            raise RuleViolation("conclusion is not the target literal under the unifier")


@dataclass(frozen=True, eq=False)
class Conflict(ProofNode):
    left: ProofNode
    right: ProofNode
    left_sub: Substitution
    right_sub: Substitution
    rule = "conflict"

    @property
    def premises(self):
        return (self.left, self.right)

    @property
    def conclusion(self) -> Clause:
        return EMPTY_CLAUSE

    @property
    def unifier(self) -> Substitution:
        out = dict(self.right_sub)
        out.update(self.left_sub)
        return out

    def validate(self) -> None:
        a, b = self.left.conclusion, self.right.conclusion
        if not (isinstance(a, Literal) and isinstance(b, Literal)):
            raise RuleViolation("conflict premises must be unit")
        if a.positive == b.positive:
            raise RuleViolation("conflict premises have the same polarity")
        if a.apply(self.left_sub) != b.apply(self.right_sub).dual():
            raise RuleViolation("unifier does not make %s and %s complementary"
                                % (format_literal(a), format_literal(b)))


@dataclass(frozen=True, eq=False)
class ConflictDrivenClauseLearning(ProofNode):
    conflict: ProofNode
    clause: Clause
    discharged: FrozenSet[int] = field(default_factory=frozenset)
    rule = "cdcl"

    @property
    def premises(self):
        return (self.conflict,)

    @property
    def conclusion(self) -> Clause:
        return self.clause

    def validate(self) -> None:
        if not isinstance(self.conflict, Conflict):
            raise RuleViolation("clause learning needs a conflict premise")
        learned, tags = _analyze(self.conflict)
        if not clause_equals(learned, self.clause):
            raise RuleViolation("learned clause %s differs from the analysed %s"
                                % (format_clause(self.clause), format_clause(learned)))
        if set(tags) != set(self.discharged):
            raise RuleViolation("discharged decisions do not match the conflict")


# --- builders -----------------------------------------------------------------


def _rename(lit: Literal, fresh: FreshVars) -> Tuple[Literal, Substitution]:
    vs = lit.variables()
    if not vs:
        return lit, {}
    ren = fresh.renaming(vs)
    return lit.apply(ren), ren


def mk_upr(units: Sequence[ProofNode], clause_node: ProofNode, target: int,
           fresh: Optional[FreshVars] = None) -> UnitPropagatingResolution:
    """Unit-propagating resolution with one simultaneous most general unifier.

    ``units`` line up with the clause positions other than ``target``, in order.
    """
    fresh = fresh or _DEFAULT_FRESH
    clause = clause_node.conclusion
    if not isinstance(clause, Clause):
        raise RuleViolation("clause premise does not conclude a clause")
    lits = clause.literals
    if not 0 <= target < len(lits):
        raise RuleViolation("target position %d out of range" % target)
    positions = [k for k in range(len(lits)) if k != target]
    if len(units) != len(positions):
        raise RuleViolation("expected %d unit premises, got %d" % (len(positions), len(units)))
    ren_c = fresh.renaming(clause.variables) if clause.variables else {}
    sigma: Substitution = {}
    renamings = []
    for unit, k in zip(units, positions):
        u = unit.conclusion
        if not isinstance(u, Literal):
            raise RuleViolation("premise for position %d is not a unit" % k)
        ur, ren_u = _rename(u, fresh)
        renamings.append(ren_u)
        want = lits[k].apply(ren_c).dual()
        if ur.positive != want.positive:
            raise RuleViolation("position %d: polarity mismatch" % k)
        sigma = unify(ur.atom, want.atom, sigma)
        if sigma is None:
            raise RuleViolation("position %d: %s does not unify with the dual of %s"
                                % (k, format_literal(u), format_literal(lits[k])))
    return build_upr(units, clause_node, target, ren_c, renamings, sigma)


def build_upr(units, clause_node, target, clause_renaming, unit_renamings, sigma
              ) -> UnitPropagatingResolution:
    """Assemble (and validate) a UPR node from renamings and their joint unifier."""
    clause = clause_node.conclusion
    clause_sub = restrict(compose(clause_renaming, sigma), clause.variables)
    unit_subs = tuple(
        restrict(compose(ren, sigma), unit.conclusion.variables())
        for unit, ren in zip(units, unit_renamings)
    )
    concl = clause.literals[target].apply(clause_sub)
    node = UnitPropagatingResolution(tuple(units), clause_node, target, clause_sub, unit_subs, concl)
    node.validate()
    return node


def mk_conflict(left: ProofNode, right: ProofNode, fresh: Optional[FreshVars] = None) -> Conflict:
    fresh = fresh or _DEFAULT_FRESH
    a, b = left.conclusion, right.conclusion
    if not (isinstance(a, Literal) and isinstance(b, Literal)):
        raise RuleViolation("conflict premises must be unit")
    if a.positive == b.positive:
        raise RuleViolation("conflict premises have the same polarity")
    ar, ra = _rename(a, fresh)
    br, rb = _rename(b, fresh)
    sigma = unify(ar.atom, br.atom)
    if sigma is None:
        raise RuleViolation("%s and %s do not unify" % (format_literal(a), format_literal(b.dual())))
    node = Conflict(
        left, right,
        restrict(compose(ra, sigma), a.variables()),
        restrict(compose(rb, sigma), b.variables()),
    )
    node.validate()
    return node


def mk_cdcl(conflict: Conflict) -> ConflictDrivenClauseLearning:
    learned, tags = _analyze(conflict)
    return ConflictDrivenClauseLearning(conflict, learned, frozenset(tags))


# --- conflict analysis ---------------------------------------------------------


def _edges(node: ProofNode):
    """(premise, substitution) pairs along which decisions can flow."""
    if isinstance(node, UnitPropagatingResolution):
        return zip(node.units, node.unit_subs)
    if isinstance(node, Conflict):
        return ((node.left, node.left_sub), (node.right, node.right_sub))
    return ()


def _analyze(conflict: ProofNode) -> Tuple[Clause, List[int]]:
    has_decision: Dict[int, bool] = {}

    def reaches(node) -> bool:
        key = id(node)
        got = has_decision.get(key)
        if got is None:
            if isinstance(node, Decision):
                got = True
            else:
                got = any(reaches(p) for p, _ in _edges(node))
            has_decision[key] = got
        return got

    found: Dict[Literal, None] = {}
    tags: Dict[int, None] = {}
    seen = set()
    # Walk from the conflict towards the leaves, carrying the composition of the
    # substitutions between the current node and the conflict. At a decision
    # leaf the leaf-to-root composition is (edge sub) followed by that carry.
    stack = [(conflict, {})]
    while stack:
        node, carry = stack.pop()
        for prem, sub in reversed(list(_edges(node))):
            if not reaches(prem):
                continue
            path = compose(sub, carry)
            if isinstance(prem, Decision):
                found[prem.literal.apply(path).dual()] = None
                tags[prem.tag] = None
                continue
            concl = prem.conclusion
            key = (id(prem), concl.apply(path))
            if key in seen:
                continue
            seen.add(key)
            stack.append((prem, restrict(path, concl.variables())))
    return Clause.of(found), list(tags)


def analyze_conflict(conflict: ProofNode) -> Clause:
    """Learned clause: duals of every decision instance along every path to the conflict."""
    return _analyze(conflict)[0]


def open_decisions(root: ProofNode) -> List[Decision]:
    """Decisions in ``root``'s derivation not discharged by a clause-learning step."""
    out: Dict[int, Decision] = {}
    seen = set()
    stack = [root]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        if isinstance(n, Decision):
            out[id(n)] = n
        elif isinstance(n, ConflictDrivenClauseLearning):
            continue
        else:
            stack.extend(n.premises)
    return list(out.values())


# --- checking -------------------------------------------------------------------


def topological(root: ProofNode) -> List[ProofNode]:
    """Premises before conclusions; raises ``ValueError`` on a cycle."""
    order: List[ProofNode] = []
    state: Dict[int, int] = {}  # 1 = on stack, 2 = done
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        key = id(node)
        if expanded:
            state[key] = 2
            order.append(node)
            continue
        st = state.get(key)
        if st == 2:
            continue
        if st == 1:
            raise ValueError("proof graph has a cycle")
        state[key] = 1
        stack.append((node, True))
        for p in reversed(node.premises):
            ps = state.get(id(p))
            if ps == 1:
                raise ValueError("proof graph has a cycle")
            if ps is None:
                stack.append((p, False))
    return order


def check_refutation(root: ProofNode, problem: Problem) -> None:
    """Re-verify a refutation from scratch; raises :class:`ProofError`."""
    try:
        order = topological(root)
    except ValueError as exc:
        raise ProofError(-1, "graph", str(exc)) from None
    ids = {id(n): i for i, n in enumerate(order)}
    fresh = FreshVars()
    for i, node in enumerate(order):
        rule = getattr(node, "rule", "?")
        if isinstance(node, Axiom):
            if not any(clause_equals(node.clause, c) for c in problem.clauses):
                raise ProofError(i, rule, "%s is not an input clause" % format_clause(node.clause))
            continue
        if isinstance(node, Decision):
            if not isinstance(node.literal, Literal):
                raise ProofError(i, rule, "decision without a literal")
            continue
        if isinstance(node, UnitPropagatingResolution):
            if not isinstance(node.clause_node, (Axiom, ConflictDrivenClauseLearning)):
                raise ProofError(i, rule, "clause premise %d is not an axiom or learned clause"
                                 % ids[id(node.clause_node)])
            for u in node.units:
                if not isinstance(u, (Decision, UnitPropagatingResolution)):
                    raise ProofError(i, rule, "unit premise %d is not a literal" % ids[id(u)])
        elif isinstance(node, Conflict):
            pass
        elif isinstance(node, ConflictDrivenClauseLearning):
            pass
        else:
            raise ProofError(i, rule, "unknown node type %r" % type(node).__name__)
        try:
            node.validate()
            if isinstance(node, UnitPropagatingResolution):
                # the rule asks for a unifier: it must exist for the renamed-apart pairs
                mk_upr(node.units, node.clause_node, node.target, fresh)
            elif isinstance(node, Conflict):
                mk_conflict(node.left, node.right, fresh)
        except RuleViolation as exc:
            raise ProofError(i, rule, str(exc)) from None
    last = len(order) - 1
    if not (isinstance(root.conclusion, Clause) and root.conclusion.is_empty):
        raise ProofError(last, root.rule, "root does not conclude $false")
    if open_decisions(root):
        raise ProofError(last, root.rule, "undischarged decision")


def is_refutation(root: ProofNode, problem: Problem) -> bool:
    try:
        check_refutation(root, problem)
    except ProofError:
        return False
    return True


# --- text format -------------------------------------------------------------------


def export_proof(root: ProofNode) -> str:
    """One node per line, premises first::

        <id>. <rule> [<premise ids>] <substitutions> <conclusion>

    ``upr`` lines list the clause premise first, then the units, then ``@<target>``
    and the clause substitution followed by one substitution per unit.
    """
    order = topological(root)
    ids = {id(n): i for i, n in enumerate(order)}
    lines = []
    for i, n in enumerate(order):
        prem = "[" + ",".join(str(ids[id(p)]) for p in n.premises) + "]"
        parts = ["%d." % i, n.rule, prem]
        if isinstance(n, UnitPropagatingResolution):
            parts.append("@%d" % n.target)
            parts.append(format_substitution(n.clause_sub))
            parts.extend(format_substitution(s) for s in n.unit_subs)
            parts.append(format_literal(n.conclusion))
        elif isinstance(n, Conflict):
            parts.append(format_substitution(n.left_sub))
            parts.append(format_substitution(n.right_sub))
            parts.append("$false")
        elif isinstance(n, Decision):
            parts.append(format_literal(n.literal))
        else:
            parts.append(format_clause(n.conclusion))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


@dataclass
class ProofRecord:
    """One parsed line of exported proof text, before nodes are linked."""

    id: int
    rule: str
    premises: List[int]
    target: Optional[int]
    subs: List[Substitution]
    conclusion: Union[Clause, Literal]


def parse_proof_records(text: str) -> List[ProofRecord]:
    from .tptp import Lexer, TermParser, TPTPParseError, _Abort

    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        try:
            p = TermParser(Lexer(line, "<proof:%d>" % lineno).tokens(), "<proof:%d>" % lineno)
            rec = _parse_record(p)
        except (_Abort, TPTPParseError) as exc:
            raise ValueError("proof line %d: %s" % (lineno, exc)) from None
        records.append(rec)
    return records


def _parse_record(p) -> ProofRecord:
    t = p.next()
    if t.kind != "number":
        p.fail("expected a node id")
    node_id = int(t.text.rstrip("."))
    if not t.text.endswith("."):
        p.expect(".")
    rule = p.next().text
    p.expect("[")
    prem = []
    while not p.at("]"):
        n = p.next()
        if n.kind != "number":
            p.fail("expected a premise id")
        prem.append(int(n.text))
        if p.at(","):
            p.next()
    p.expect("]")
    target = None
    if p.at("@"):
        p.next()
        target = int(p.next().text)
    subs = []
    while p.at("{"):
        p.next()
        s = {}
        while not p.at("}"):
            v = p.term()
            p.expect("->")
            s[v] = p.term()
            if p.at(","):
                p.next()
        p.expect("}")
        subs.append(s)
    if rule in ("upr", "decision"):
        lits = p.disjunction()
        if len(lits) != 1:
            p.fail("expected a single literal")
        concl = lits[0]
    else:
        concl = Clause.of(p.disjunction())
    if p.tok.kind != "eof":
        p.fail("trailing text")
    return ProofRecord(node_id, rule, prem, target, subs, concl)


def link_records(records: Sequence[ProofRecord]) -> List[ProofNode]:
    """Build nodes from records without validating them (the checker does that)."""
    nodes: Dict[int, ProofNode] = {}
    out = []
    for r in records:
        try:
            prem = [nodes[i] for i in r.premises]
        except KeyError as exc:
            raise ValueError("node %d refers to unknown or later node %s" % (r.id, exc)) from None
        if r.rule == "axiom":
            n = Axiom(r.conclusion)
        elif r.rule == "decision":
            n = Decision(r.conclusion, r.id)
        elif r.rule == "upr":
            if not prem or r.target is None or len(r.subs) != len(prem):
                raise ValueError("malformed upr node %d" % r.id)
            n = UnitPropagatingResolution(tuple(prem[1:]), prem[0], r.target, r.subs[0],
                                          tuple(r.subs[1:]), r.conclusion)
        elif r.rule == "conflict":
            if len(prem) != 2 or len(r.subs) != 2:
                raise ValueError("malformed conflict node %d" % r.id)
            n = Conflict(prem[0], prem[1], r.subs[0], r.subs[1])
        elif r.rule == "cdcl":
            if len(prem) != 1:
                raise ValueError("malformed cdcl node %d" % r.id)
            n = ConflictDrivenClauseLearning(prem[0], r.conclusion,
                                             frozenset(d.tag for d in open_decisions(prem[0])))
        else:
            raise ValueError("unknown rule %r on node %d" % (r.rule, r.id))
        nodes[r.id] = n
        out.append(n)
    return out


def parse_proof(text: str) -> List[ProofNode]:
    """Nodes of an exported proof, in file order; the last one is the root."""
    return link_records(parse_proof_records(text))
