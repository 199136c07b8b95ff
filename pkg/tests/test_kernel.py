"""Term kernel: worked examples and properties, run against every available backend."""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import KERNELS, each_kernel

# Plain terms: "X" (variable) or ("f", arg, ...). Built into a kernel on demand.
VARS = ["X", "Y", "Z", "W"]
FUNS = [("a", 0), ("b", 0), ("f", 1), ("g", 2), ("h", 3)]


def plain_terms(max_leaves=8, vars_=VARS):
    leaf = st.one_of(st.sampled_from(vars_), st.sampled_from([("a",), ("b",)]))

    def extend(children):
        return st.one_of(
            st.tuples(st.just("f"), children),
            st.tuples(st.just("g"), children, children),
            st.tuples(st.just("h"), children, children, children),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


def build(k, t):
    if isinstance(t, str):
        return k.Var(t)
    return k.Fn(t[0], tuple(build(k, a) for a in t[1:]))


def plain(t):
    if hasattr(t, "functor"):
        return (t.functor,) + tuple(plain(a) for a in t.args)
    return t.name


def plain_sub(s):
    return None if s is None else {v.name: plain(t) for v, t in s.items()}


def p_(k, *args):
    return k.Fn("p", args)


# --- worked examples -------------------------------------------------------------


@each_kernel
def test_unify_examples(kernel):
    k = kernel
    X, Y = k.Var("X"), k.Var("Y")
    a = k.Fn("a")
    assert k.unify(p_(k, X), p_(k, a)) == {X: a}
    assert k.unify(p_(k, X), k.Fn("q", (X,))) is None
    assert k.unify(p_(k, X, k.Fn("f", (X,))), p_(k, Y, Y)) is None
    assert k.unify(p_(k, X, Y), p_(k, Y, a)) == {X: a, Y: a}


@each_kernel
def test_apply_examples(kernel):
    k = kernel
    X, Y = k.Var("X"), k.Var("Y")
    a = k.Fn("a")
    assert k.apply(p_(k, X), {X: a}) == p_(k, a)
    assert k.apply(p_(k, X), {}) == p_(k, X)
    f = k.Fn("f", (X, Y))
    assert k.apply(f, {X: k.Fn("g", (Y,))}) == k.Fn("f", (k.Fn("g", (Y,)), Y))


@each_kernel
def test_term_depth_examples(kernel):
    k = kernel
    a = k.Fn("a")
    assert k.term_depth(a) == 0
    assert k.term_depth(k.Var("X")) == 0
    assert k.term_depth(k.Fn("f", (a,))) == 1
    assert k.term_depth(k.Fn("f", (k.Fn("g", (k.Var("X"),)), a))) == 2


@each_kernel
def test_match_is_one_way(kernel):
    k = kernel
    X = k.Var("X")
    a = k.Fn("a")
    assert k.match(p_(k, X), p_(k, a)) == {X: a}
    assert k.match(p_(k, a), p_(k, X)) is None
    # identity bindings are allowed, inconsistent ones are not
    assert k.match(p_(k, X, X), p_(k, X, a)) is None
    assert k.match(p_(k, X, X), p_(k, X, X)) is not None


@each_kernel
def test_variant(kernel):
    k = kernel
    X, Y, Z = k.Var("X"), k.Var("Y"), k.Var("Z")
    assert k.variant(p_(k, X, Y), p_(k, Y, Z)) is not None
    assert k.variant(p_(k, X, X), p_(k, Y, Z)) is None
    assert k.variant(p_(k, X, Y), p_(k, Z, Z)) is None
    assert k.variant(p_(k, X), p_(k, k.Fn("a"))) is None


@each_kernel
def test_term_vars_order(kernel):
    k = kernel
    X, Y = k.Var("X"), k.Var("Y")
    t = k.Fn("g", (k.Fn("f", (Y,)), k.Fn("g", (X, Y))))
    assert list(k.term_vars(t)) == [Y, X]


@each_kernel
def test_terms_are_hashable_and_picklable(kernel):
    import pickle

    k = kernel
    t = k.Fn("g", (k.Var("X"), k.Fn("a")))
    assert pickle.loads(pickle.dumps(t)) == t
    assert len({t, k.Fn("g", (k.Var("X"), k.Fn("a")))}) == 1
    assert k.Var("X") != k.Fn("X")


@each_kernel
def test_occurs_check_deep(kernel):
    k = kernel
    X, Y = k.Var("X"), k.Var("Y")
    # X = f(Y), Y = f(X) has no finite solution
    assert k.unify(k.Fn("g", (X, Y)), k.Fn("g", (k.Fn("f", (Y,)), k.Fn("f", (X,))))) is None


# --- properties -------------------------------------------------------------------

PROP = settings(max_examples=150, deadline=None)


@PROP
@given(a=plain_terms(), b=plain_terms())
@each_kernel
def test_unifier_soundness_and_shape(kernel, a, b):
    k = kernel
    ta, tb = build(k, a), build(k, b)
    s = k.unify(ta, tb)
    if s is None:
        return
    assert k.apply(ta, s) == k.apply(tb, s)
    # idempotent, so bindings are acyclic and no variable maps to itself
    for v, t in s.items():
        assert t != v
        assert k.apply(t, s) == t
        assert not k.occurs(v, t)


def _abstract(t, vars_, draw):
    """Replace some subterms of ``t`` by variables, recording what they stood for."""
    env = {}

    def go(t):
        if draw(st.booleans()) and len(env) < len(vars_):
            v = vars_[len(env)]
            env[v] = t
            return v
        if isinstance(t, str):
            return t
        return (t[0],) + tuple(go(x) for x in t[1:])

    return go(t), env


def _plain_match(pat, tgt, env):
    if isinstance(pat, str):
        if pat in env:
            return env if env[pat] == tgt else None
        env = dict(env)
        env[pat] = tgt
        return env
    if isinstance(tgt, str) or pat[0] != tgt[0] or len(pat) != len(tgt):
        return None
    for x, y in zip(pat[1:], tgt[1:]):
        env = _plain_match(x, y, env)
        if env is None:
            return None
    return env


def _plain_apply(t, env):
    if isinstance(t, str):
        return env.get(t, t)
    return (t[0],) + tuple(_plain_apply(x, env) for x in t[1:])


@PROP
@given(t=plain_terms(vars_=["X", "Y"]), data=st.data())
@each_kernel
def test_unifier_generality(kernel, t, data):
    k = kernel
    a, env_a = _abstract(t, ["A1", "A2", "A3"], data.draw)
    b, env_b = _abstract(t, ["B1", "B2", "B3"], data.draw)
    tau = dict(env_a)
    tau.update(env_b)
    pair = ("pair", a, b)
    # tau is a unifier by construction
    assert _plain_apply(a, tau) == _plain_apply(b, tau) == t
    s = k.unify(build(k, a), build(k, b))
    assert s is not None
    inst = plain(k.apply(build(k, pair), s))
    delta = _plain_match(inst, _plain_apply(pair, tau), {})
    assert delta is not None, "mgu is not more general than the known unifier"


def _plain_subs(draw_vars=VARS):
    return st.dictionaries(st.sampled_from(draw_vars), plain_terms(max_leaves=4), max_size=3)


def _ksub(k, s):
    return {k.Var(v): build(k, t) for v, t in s.items() if t != v}


@PROP
@given(s1=_plain_subs(), s2=_plain_subs(), s3=_plain_subs(), t=plain_terms())
def test_compose_defining_equation_and_associativity(s1, s2, s3, t):
    from crprover import terms as k
    from crprover.terms import compose

    a, b, c = _ksub(k, s1), _ksub(k, s2), _ksub(k, s3)
    tt = build(k, t)
    assert k.apply(tt, compose(a, b)) == k.apply(k.apply(tt, a), b)
    lhs = compose(compose(a, b), c)
    rhs = compose(a, compose(b, c))
    assert k.apply(tt, lhs) == k.apply(tt, rhs)
    for v, u in compose(a, b).items():
        assert u != v


@PROP
@given(t=plain_terms(), s=st.dictionaries(st.sampled_from(VARS),
                                         plain_terms(max_leaves=4).filter(lambda x: not isinstance(x, str)),
                                         max_size=4))
@each_kernel
def test_depth_grows_under_nonvariable_substitution(kernel, t, s):
    k = kernel
    tt = build(k, t)
    assert k.term_depth(k.apply(tt, _ksub(k, s))) >= k.term_depth(tt)


@PROP
@given(p=plain_terms(), s=_plain_subs())
@each_kernel
def test_match_finds_instances(kernel, p, s):
    k = kernel
    pat = build(k, p)
    target = k.apply(pat, _ksub(k, s))
    th = k.match(pat, target)
    assert th is not None
    assert k.apply(pat, th) == target


@PROP
@given(t=plain_terms())
@each_kernel
def test_variant_of_renaming(kernel, t):
    k = kernel
    tt = build(k, t)
    ren = {v: k.Var("R" + v.name) for v in k.term_vars(tt)}
    r = k.apply(tt, ren)
    assert k.variant(tt, r) is not None
    assert k.variant(r, tt) is not None


@settings(max_examples=200, deadline=None)
@given(a=plain_terms(), b=plain_terms(), s=_plain_subs())
def test_backends_agree(a, b, s):
    py, cy = KERNELS["python"], KERNELS["cython"]
    if cy is None:
        pytest.skip("compiled kernel not built")
    for k in (py, cy):
        assert plain(build(k, a)) == a
    assert plain_sub(py.unify(build(py, a), build(py, b))) == plain_sub(cy.unify(build(cy, a), build(cy, b)))
    assert plain_sub(py.match(build(py, a), build(py, b))) == plain_sub(cy.match(build(cy, a), build(cy, b)))
    assert (py.variant(build(py, a), build(py, b)) is None) == (cy.variant(build(cy, a), build(cy, b)) is None)
    assert plain(py.apply(build(py, a), _ksub(py, s))) == plain(cy.apply(build(cy, a), _ksub(cy, s)))
    assert py.term_depth(build(py, a)) == cy.term_depth(build(cy, a))
    assert [v.name for v in py.term_vars(build(py, a))] == [v.name for v in cy.term_vars(build(cy, a))]
    assert py.is_ground(build(py, a)) == cy.is_ground(build(cy, a))
