import json
import random

import pytest

from conftest import DATA, clause, lit, problem
from crprover.clauses import clause_equals
from crprover.proof import check_refutation, export_proof
from crprover.search import (
    SearchConfig, Satisfiable, Solver, Unknown, Unsatisfiable, Variant, solve,
)
from crprover.tptp import parse_problem, parse_string

import oracles

EPR = sorted((DATA / "epr").glob("*.p"))
EPR_EXPECTED = json.loads((DATA / "epr" / "expected.json").read_text())


def steps_until(solver, kind, limit=200):
    for _ in range(limit):
        got, payload = solver.propagate_step()
        if got == kind:
            return payload
        assert got != "quiescent" or kind == "quiescent", "went quiet before %s" % kind
    raise AssertionError("no %s within %d steps" % (kind, limit))


# --- propagateStep ------------------------------------------------------------


def test_propagate_chain():
    s = Solver(problem("p(a)", "~p(X) | p(f(X))"))
    assert s.propagate_step()[1].literal == lit("p(a)")
    kind, entry = s.propagate_step()
    assert kind == "new" and entry.literal == lit("p(f(a))")
    assert entry.depth == 1


def test_propagate_conflict():
    s = Solver(problem("~q | ~r"))
    assert s.decide(lit("q")) is None
    assert s.decide(lit("r")) is None
    kind, conflict = s.propagate_step()
    assert kind == "conflict" and conflict.conclusion.is_empty


def test_propagate_quiescent_when_conclusion_true():
    s = Solver(problem("p(X) | q(X)", "~p(a)", "q(a)"))
    steps_until(s, "quiescent")
    assert s.trail.literals() == [lit("~p(a)"), lit("q(a)")]


def test_pd_bounds_by_depth():
    s = Solver(problem("p(a)", "~p(X) | p(f(X))"), SearchConfig(variant="pd"))
    steps_until(s, "quiescent")
    assert s.trail.literals() == [lit("p(a)")]
    assert s.blocked
    s._raise_threshold()
    steps_until(s, "quiescent")
    assert s.trail.literals()[-1] == lit("p(f(a))")


def test_td_bounds_by_term_depth():
    s = Solver(problem("p(a)", "~p(X) | p(f(X))"), SearchConfig(variant="td", initial_threshold=2))
    steps_until(s, "quiescent")
    # p(a) has term depth 1, p(f(a)) has 2 and is not below the bound
    assert s.trail.literals() == [lit("p(a)")]
    assert s.blocked


def test_conflicts_ignore_bounds():
    # the conflicting conclusion ~p(f(a)) is deeper than the bound allows
    s = Solver(problem("p(f(a))", "~p(f(X)) | ~q(X)", "q(a)"), SearchConfig(variant="pd"))
    steps_until(s, "conflict")
    assert s.threshold == 0


# --- chooseDecision -----------------------------------------------------------------


def test_first_decision():
    s = Solver(problem("q | r", "~q | ~r"))
    assert s.choose_decision() == lit("q")


def test_no_decision_when_all_satisfied():
    s = Solver(problem("p(a)", "p(X) | q(X)"))
    s.decide(lit("p(Y)"))
    assert s.choose_decision() is None


@pytest.mark.parametrize("variant", ["ep", "pd"])
def test_weakly_satisfied_clause_is_skipped(variant):
    s = Solver(parse_problem(DATA / "sat1.p"), SearchConfig(variant=variant))
    steps_until(s, "quiescent")
    assert 0 not in s.open_clauses()
    assert s.choose_decision() is None


def test_td_sees_the_clause_but_finds_no_eligible_literal():
    s = Solver(parse_problem(DATA / "sat1.p"), SearchConfig(variant="td", initial_threshold=2))
    steps_until(s, "quiescent")
    assert 0 in s.open_clauses()
    assert s.choose_decision() is None


def test_decisions_are_renamed_and_never_falsified():
    s = Solver(problem("~p(a)", "p(X) | q(X)"))
    steps_until(s, "quiescent")
    d = s.choose_decision()
    assert d.atom.functor in ("p", "q")
    assert not s.trail.is_falsified(d)
    assert all(v.name.startswith("_") for v in d.variables())


# --- handleConflict -----------------------------------------------------------------


def _challenge_solver():
    return Solver(parse_problem(DATA / "challenge1.p"))


def test_learn_not_q_then_refute():
    s = _challenge_solver()
    assert s.decide(lit("q")) is None
    res = s.handle_conflict(steps_until(s, "conflict"))
    assert res is None
    assert s.learned == [clause("~q")]
    assert len(s.trail) == 0 and s.stats.restarts == 1
    res = s.handle_conflict(steps_until(s, "conflict"))
    assert isinstance(res, Unsatisfiable)
    check_refutation(res.refutation, s.problem)


def test_learn_r_of_g_a():
    s = Solver(parse_problem(DATA / "depth6.p"))
    assert s.decide(lit("r(X)")) is None
    res = s.handle_conflict(steps_until(s, "conflict"))
    assert res is None
    assert len(s.learned) == 1 and clause_equals(s.learned[0], clause("~r(g(a))"))


def test_duplicate_learned_clause_is_not_stored():
    s = _challenge_solver()
    s.decide(lit("q"))
    conflict = steps_until(s, "conflict")
    s.handle_conflict(conflict)
    s.handle_conflict(conflict)
    assert s.learned == [clause("~q")]
    assert s.stats.restarts == 2 and s.stats.learned_count == 1
    # the decision behind the repeat is remembered as futile
    assert s.futile == [lit("q")]


# --- solve --------------------------------------------------------------------------


@pytest.mark.parametrize("variant", ["pd", "td"])
def test_challenge_refuted_by_bounded_variants(variant):
    p = parse_problem(DATA / "challenge1.p")
    res = solve(p, SearchConfig(variant=variant, time_budget=30))
    assert isinstance(res, Unsatisfiable)
    check_refutation(res.refutation, p)


def test_challenge_times_out_for_ep():
    res = solve(parse_problem(DATA / "challenge1.p"), SearchConfig(variant="ep", time_budget=1.0))
    assert isinstance(res, Unknown) and res.reason == "timeout" and res.status == "Timeout"
    assert res.stats.propagations > 50


def test_conflict_limit():
    p = parse_problem(DATA / "challenge1.p")
    res = solve(p, SearchConfig(variant="pd", max_conflicts=1))
    assert isinstance(res, Unknown) and res.status == "GaveUp" and res.reason == "conflictLimit"


def test_depth6_by_ep_without_decisions():
    p = parse_problem(DATA / "depth6.p")
    res = solve(p, SearchConfig(variant="ep"))
    assert isinstance(res, Unsatisfiable)
    assert res.stats.decisions == 0
    # fairness: the six-step chain is reached in a bounded number of steps
    assert res.stats.propagations <= 20


@pytest.mark.parametrize("variant", list(Variant))
def test_sat1(variant):
    p = parse_problem(DATA / "sat1.p")
    res = solve(p, SearchConfig(variant=variant))
    assert isinstance(res, Satisfiable)
    assert all(res.model.satisfied_by_relevant_instances(c) for c in p.clauses)


def test_empty_input_clause():
    p = parse_string("cnf(a, axiom, p). cnf(b, axiom, $false).")
    res = solve(p)
    assert isinstance(res, Unsatisfiable) and res.stats.conflicts == 0
    check_refutation(res.refutation, p)


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("path", EPR, ids=[p.stem for p in EPR])
def test_epr_verdicts(variant, path):
    p = parse_problem(path)
    res = solve(p, SearchConfig(variant=variant, time_budget=30))
    assert res.status == EPR_EXPECTED[path.stem]
    if isinstance(res, Unsatisfiable):
        check_refutation(res.refutation, p)


# --- properties ---------------------------------------------------------------------


class CheckedSolver(Solver):
    """Asserts the no-silent-contradiction invariant after every step."""

    def propagate_step(self):
        kind, payload = super().propagate_step()
        lits = self.trail.literals()
        for a in lits:
            for b in lits:
                if a.positive and not b.positive and a.key[1:] == b.key[1:]:
                    from crprover.terms import variant as is_variant
                    assert is_variant(a.atom, b.atom) is None, "complementary pair on the trail"
        return kind, payload


def _check_result(p, res, plain=None):
    st = res.stats
    assert st.learned_count == len(res.learned)
    refuted_by_conflict = isinstance(res, Unsatisfiable) and st.conflicts > 0
    assert st.restarts == st.conflicts - (1 if refuted_by_conflict else 0)
    for i, a in enumerate(res.learned):
        assert not any(clause_equals(a, b) for b in res.learned[:i])
    if isinstance(res, Unsatisfiable):
        check_refutation(res.refutation, p)
    elif isinstance(res, Satisfiable):
        assert all(res.model.satisfied_by_relevant_instances(c) for c in p.clauses)
    if plain is not None:
        for c in res.learned:
            assert oracles.truth_table_entails(plain, [(l.positive, l.atom.functor) for l in c.literals])


@pytest.mark.parametrize("variant", list(Variant))
def test_ground_oracle_equivalence(variant):
    rng = random.Random(2024)
    for _ in range(60):
        plain = oracles.random_ground_cnf(rng)
        p = parse_string(oracles.plain_to_tptp(plain), "g")
        res = CheckedSolver(p, SearchConfig(variant=variant, time_budget=20)).solve()
        expected = "Satisfiable" if oracles.truth_table_sat(plain) else "Unsatisfiable"
        assert res.status == expected
        _check_result(p, res, plain)


@pytest.mark.parametrize("variant", list(Variant))
def test_worked_problems_keep_invariants(variant):
    for name in ("challenge1.p", "depth6.p", "sat1.p"):
        p = parse_problem(DATA / name)
        res = CheckedSolver(p, SearchConfig(variant=variant, time_budget=2)).solve()
        _check_result(p, res)


@pytest.mark.parametrize("seed", [0, 1, 7, 12345])
def test_td_is_deterministic(seed):
    runs = []
    for _ in range(2):
        p = parse_problem(DATA / "challenge1.p")
        res = solve(p, SearchConfig(variant="td", rng_seed=seed, time_budget=30))
        runs.append((res.status, res.stats.lines(), export_proof(res.refutation)))
    assert runs[0] == runs[1]


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(variant="xx")
    with pytest.raises(ValueError):
        SearchConfig(initial_threshold=-1)
    assert Variant.parse("td") is Variant.TD
