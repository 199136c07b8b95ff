"""Pure-Python term kernel.

This module and ``_ckernel.pyx`` implement the same API; :mod:`crprover.kernel`
picks one at import time. Keep the two in lockstep.

Terms are ``Var`` or ``Fn`` (a constant is an ``Fn`` with no arguments).
Substitutions are plain ``dict`` objects from ``Var`` to term.
"""

BACKEND = "python"


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name):
        self.name = name
        self._hash = hash(("?", name))

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (Var, (self.name,))


class Fn:
    __slots__ = ("functor", "args", "_hash")

    def __init__(self, functor, args=()):
        self.functor = functor
        self.args = tuple(args)
        self._hash = hash((functor, self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Fn
            and other._hash == self._hash
            and other.functor == self.functor
            and other.args == self.args
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return self.functor
        return "%s(%s)" % (self.functor, ",".join([repr(a) for a in self.args]))

    def __reduce__(self):
        return (Fn, (self.functor, self.args))


def is_var(t):
    return type(t) is Var


def is_ground(t):
    if type(t) is Var:
        return False
    for a in t.args:
        if not is_ground(a):
            return False
    return True


def apply(t, subst):
    """Simultaneous substitution; bound variables are replaced exactly once."""
    if not subst:
        return t
    return _apply(t, subst)


def _apply(t, s):
    if type(t) is Var:
        return s.get(t, t)
    args = t.args
    if not args:
        return t
    changed = False
    new = []
    for a in args:
        b = _apply(a, s)
        if b is not a:
            changed = True
        new.append(b)
    if not changed:
        return t
    return Fn(t.functor, new)


def _walk(t, bind):
    while type(t) is Var:
        nxt = bind.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


def _occurs(v, t, bind):
    t = _walk(t, bind)
    if type(t) is Var:
        return t == v
    for a in t.args:
        if _occurs(v, a, bind):
            return True
    return False


def _resolve(t, bind):
    t = _walk(t, bind)
    if type(t) is Var or not t.args:
        return t
    changed = False
    new = []
    for a in t.args:
        b = _resolve(a, bind)
        if b is not a:
            changed = True
        new.append(b)
    if not changed:
        return t
    return Fn(t.functor, new)


def unify(a, b, subst=None):
    """Most general unifier of ``a`` and ``b`` extending ``subst``.

    ``subst`` must be idempotent. Returns a new idempotent dict, or ``None``
    when no unifier exists (clash or occurs check).
    """
    bind = dict(subst) if subst else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = _walk(x, bind)
        y = _walk(y, bind)
        if x is y:
            continue
        if type(x) is Var:
            if type(y) is Var and x == y:
                continue
            if _occurs(x, y, bind):
                return None
            bind[x] = y
        elif type(y) is Var:
            if _occurs(y, x, bind):
                return None
            bind[y] = x
        else:
            if x.functor != y.functor or len(x.args) != len(y.args):
                return None
            if x._hash == y._hash and x == y:
                continue
            stack.extend(zip(x.args, y.args))
    out = {}
    for v in bind:
        r = _resolve(v, bind)
        if r != v:
            out[v] = r
    return out


def match(pattern, target, subst=None):
    """One-way matching: ``apply(pattern, result) == target``.

    Variables of ``target`` are rigid. Returns a dict or ``None``; the dict
    may hold identity bindings so it can be passed back in as ``subst``.
    """
    s = dict(subst) if subst else {}
    stack = [(pattern, target)]
    while stack:
        x, y = stack.pop()
        if type(x) is Var:
            bound = s.get(x)
            if bound is None:
                s[x] = y
            elif bound != y:
                return None
        elif type(y) is Var:
            return None
        else:
            if x.functor != y.functor or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
    return s


def variant(a, b, fwd=None, bwd=None):
    """Injective variable renaming taking ``a`` to ``b``.

    Returns ``(fwd, bwd)`` maps or ``None``. Pass the maps back in to extend a
    renaming across several terms consistently.
    """
    f = dict(fwd) if fwd else {}
    g = dict(bwd) if bwd else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is Var:
            if type(y) is not Var:
                return None
            fx = f.get(x)
            gy = g.get(y)
            if fx is None and gy is None:
                f[x] = y
                g[y] = x
            elif fx != y or gy != x:
                return None
        elif type(y) is Var:
            return None
        else:
            if x.functor != y.functor or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
    return f, g


def occurs(v, t):
    if type(t) is Var:
        return t == v
    for a in t.args:
        if occurs(v, a):
            return True
    return False


def term_depth(t):
    if type(t) is Var or not t.args:
        return 0
    best = 0
    for a in t.args:
        d = term_depth(a)
        if d > best:
            best = d
    return best + 1


def term_vars(t, acc=None):
    """Variables of ``t`` in first-occurrence order (a dict used as ordered set)."""
    if acc is None:
        acc = {}
    if type(t) is Var:
        acc[t] = None
    else:
        for a in t.args:
            term_vars(a, acc)
    return acc
