import importlib
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
DATA = TESTS / "data"
sys.path.insert(0, str(TESTS))

from crprover.clauses import Clause  # noqa: E402
from crprover.tptp import TermParser, Lexer, parse_string  # noqa: E402


def _load(name):
    try:
        return importlib.import_module(name)
    except ImportError:
        return None


KERNELS = {"python": _load("crprover._pykernel"), "cython": _load("crprover._ckernel")}


# parametrize (not a fixture) so hypothesis tests can take it too
each_kernel = pytest.mark.parametrize("kernel", [
    pytest.param(mod, id=name, marks=pytest.mark.skipif(mod is None, reason="compiled kernel not built"))
    for name, mod in KERNELS.items()
])


def clause(text: str) -> Clause:
    """``"~p(X) | q(X)"`` -> Clause; variables are shared within the text."""
    p = TermParser(Lexer(text).tokens())
    return Clause.of(p.disjunction())


def lit(text: str):
    p = TermParser(Lexer(text).tokens())
    return p.literal()


def term(text: str):
    p = TermParser(Lexer(text).tokens())
    return p.term()


def problem(*clauses: str, name: str = "t"):
    body = "\n".join("cnf(c%d, axiom, (%s))." % (i + 1, c) for i, c in enumerate(clauses))
    return parse_string(body, name)
