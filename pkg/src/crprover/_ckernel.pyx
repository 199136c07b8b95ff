# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernel; same API as ``_pykernel``."""

BACKEND = "cython"


cdef class Var:
    cdef readonly str name
    cdef readonly Py_hash_t _hash

    def __init__(self, str name):
        self.name = name
        self._hash = hash(("?", name))

    def __eq__(self, other):
        return type(other) is Var and (<Var>other).name == self.name

    def __ne__(self, other):
        return not (type(other) is Var and (<Var>other).name == self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (Var, (self.name,))


cdef class Fn:
    cdef readonly str functor
    cdef readonly tuple args
    cdef readonly Py_hash_t _hash

    def __init__(self, str functor, args=()):
        self.functor = functor
        self.args = tuple(args)
        self._hash = hash((functor, self.args))

    def __eq__(self, other):
        return _fn_eq(self, other)

    def __ne__(self, other):
        return not _fn_eq(self, other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return self.functor
        return "%s(%s)" % (self.functor, ",".join([repr(a) for a in self.args]))

    def __reduce__(self):
        return (Fn, (self.functor, self.args))


cdef inline bint _fn_eq(Fn a, object other):
    if a is other:
        return True
    if type(other) is not Fn:
        return False
    cdef Fn b = <Fn>other
    return b._hash == a._hash and b.functor == a.functor and b.args == a.args


cdef inline bint _term_eq(object a, object b):
    if a is b:
        return True
    if type(a) is Var:
        return type(b) is Var and (<Var>a).name == (<Var>b).name
    return _fn_eq(<Fn>a, b)


def is_var(t):
    return type(t) is Var


cdef bint _is_ground(object t):
    if type(t) is Var:
        return False
    for a in (<Fn>t).args:
        if not _is_ground(a):
            return False
    return True


def is_ground(t):
    return _is_ground(t)


def apply(t, subst):
    """Simultaneous substitution; bound variables are replaced exactly once."""
    if not subst:
        return t
    return _apply(t, <dict>subst)


cdef object _apply(object t, dict s):
    if type(t) is Var:
        return s.get(t, t)
    cdef Fn f = <Fn>t
    cdef tuple args = f.args
    if not args:
        return t
    cdef bint changed = False
    cdef list new = []
    for a in args:
        b = _apply(a, s)
        if b is not a:
            changed = True
        new.append(b)
    if not changed:
        return t
    return Fn(f.functor, new)


cdef inline object _walk(object t, dict bind):
    cdef object nxt
    while type(t) is Var:
        nxt = bind.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


cdef bint _occurs_w(object v, object t, dict bind):
    t = _walk(t, bind)
    if type(t) is Var:
        return _term_eq(t, v)
    for a in (<Fn>t).args:
        if _occurs_w(v, a, bind):
            return True
    return False


cdef object _resolve(object t, dict bind):
    t = _walk(t, bind)
    if type(t) is Var:
        return t
    cdef Fn f = <Fn>t
    if not f.args:
        return t
    cdef bint changed = False
    cdef list new = []
    for a in f.args:
        b = _resolve(a, bind)
        if b is not a:
            changed = True
        new.append(b)
    if not changed:
        return t
    return Fn(f.functor, new)


def unify(a, b, subst=None):
    """Most general unifier of ``a`` and ``b`` extending ``subst``.

    ``subst`` must be idempotent. Returns a new idempotent dict, or ``None``
    when no unifier exists (clash or occurs check).
    """
    cdef dict bind = dict(subst) if subst else {}
    cdef list stack = [(a, b)]
    cdef object x, y
    cdef Fn fx, fy
    while stack:
        x, y = stack.pop()
        x = _walk(x, bind)
        y = _walk(y, bind)
        if x is y:
            continue
        if type(x) is Var:
            if type(y) is Var and (<Var>x).name == (<Var>y).name:
                continue
            if _occurs_w(x, y, bind):
                return None
            bind[x] = y
        elif type(y) is Var:
            if _occurs_w(y, x, bind):
                return None
            bind[y] = x
        else:
            fx = <Fn>x
            fy = <Fn>y
            if fx.functor != fy.functor or len(fx.args) != len(fy.args):
                return None
            if fx._hash == fy._hash and fx.args == fy.args:
                continue
            stack.extend(zip(fx.args, fy.args))
    cdef dict out = {}
    for v in bind:
        r = _resolve(v, bind)
        if not _term_eq(r, v):
            out[v] = r
    return out


def match(pattern, target, subst=None):
    """One-way matching: ``apply(pattern, result) == target``.

    Variables of ``target`` are rigid. Returns a dict or ``None``; the dict
    may hold identity bindings so it can be passed back in as ``subst``.
    """
    cdef dict s = dict(subst) if subst else {}
    cdef list stack = [(pattern, target)]
    cdef object x, y, bound
    cdef Fn fx, fy
    while stack:
        x, y = stack.pop()
        if type(x) is Var:
            bound = s.get(x)
            if bound is None:
                s[x] = y
            elif not _term_eq(bound, y):
                return None
        elif type(y) is Var:
            return None
        else:
            fx = <Fn>x
            fy = <Fn>y
            if fx.functor != fy.functor or len(fx.args) != len(fy.args):
                return None
            stack.extend(zip(fx.args, fy.args))
    return s


def variant(a, b, fwd=None, bwd=None):
    """Injective variable renaming taking ``a`` to ``b``.

    Returns ``(fwd, bwd)`` maps or ``None``. Pass the maps back in to extend a
    renaming across several terms consistently.
    """
    cdef dict f = dict(fwd) if fwd else {}
    cdef dict g = dict(bwd) if bwd else {}
    cdef list stack = [(a, b)]
    cdef object x, y, fxv, gyv
    cdef Fn fx, fy
    while stack:
        x, y = stack.pop()
        if type(x) is Var:
            if type(y) is not Var:
                return None
            fxv = f.get(x)
            gyv = g.get(y)
            if fxv is None and gyv is None:
                f[x] = y
                g[y] = x
            elif fxv is None or gyv is None:
                return None
            elif not (_term_eq(fxv, y) and _term_eq(gyv, x)):
                return None
        elif type(y) is Var:
            return None
        else:
            fx = <Fn>x
            fy = <Fn>y
            if fx.functor != fy.functor or len(fx.args) != len(fy.args):
                return None
            stack.extend(zip(fx.args, fy.args))
    return f, g


cdef bint _occurs(object v, object t):
    if type(t) is Var:
        return _term_eq(t, v)
    for a in (<Fn>t).args:
        if _occurs(v, a):
            return True
    return False


def occurs(v, t):
    return _occurs(v, t)


cdef int _depth(object t):
    if type(t) is Var:
        return 0
    cdef Fn f = <Fn>t
    if not f.args:
        return 0
    cdef int best = 0
    cdef int d
    for a in f.args:
        d = _depth(a)
        if d > best:
            best = d
    return best + 1


def term_depth(t):
    return _depth(t)


cdef void _vars(object t, dict acc):
    if type(t) is Var:
        acc[t] = None
    else:
        for a in (<Fn>t).args:
            _vars(a, acc)


def term_vars(t, acc=None):
    """Variables of ``t`` in first-occurrence order (a dict used as ordered set)."""
    if acc is None:
        acc = {}
    _vars(t, acc)
    return acc
