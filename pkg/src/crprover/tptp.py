"""Reader and writer for the CNF subset of TPTP.

Supports ``cnf(name, role, formula[, annotations]).``, ``include('file'[, [names]]).``,
``%`` line comments and ``/* */`` block comments. Equality atoms are read as an
uninterpreted binary predicate ``=`` with a warning.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .clauses import (
    Clause, Literal, Problem, format_clause, format_literal, format_symbol,
    format_term,
)
from .terms import ArityError, Fn, Signature, Var

__all__ = [
    "ParseDiagnostic", "TPTPParseError", "parse_problem", "parse_string",
    "format_clause", "format_literal", "format_term", "format_problem",
    "Lexer", "TermParser",
]

KNOWN_ROLES = {
    "axiom", "hypothesis", "definition", "assumption", "lemma", "theorem",
    "corollary", "conjecture", "negated_conjecture", "plain", "unknown",
}
OTHER_LANGUAGES = {"fof", "tff", "thf", "tcf", "tpi"}


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    file: str
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return "%s:%d:%d: %s: %s" % (self.file, self.line, self.column, self.severity, self.message)


class TPTPParseError(Exception):
    def __init__(self, diagnostics: Sequence[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class _Abort(Exception):
    """Unrecoverable syntax error inside one annotated formula."""


@dataclass(frozen=True)
class Token:
    kind: str  # lower, upper, squote, dquote, dollar, number, punct, eof
    text: str
    line: int
    col: int


_PUNCT2 = ("!=", "=>", "<=", "<~>", "~|", "~&", "-->", "->")
_PUNCT1 = "()[],.|&~=:!?*+<>{}@^-"


class Lexer:
    def __init__(self, text: str, filename: str = "<string>"):
        self.text = text
        self.filename = filename

    def tokens(self) -> List[Token]:
        text, n = self.text, len(self.text)
        out: List[Token] = []
        i, line, col = 0, 1, 1

        def advance(k):
            nonlocal i, line, col
            for ch in text[i:i + k]:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            i += k

        while i < n:
            ch = text[i]
            if ch in " \t\r\n\f":
                advance(1)
            elif ch == "%":
                j = text.find("\n", i)
                advance((n if j < 0 else j) - i)
            elif text.startswith("/*", i):
                j = text.find("*/", i + 2)
                if j < 0:
                    raise TPTPParseError([ParseDiagnostic(
                        "error", self.filename, line, col, "unterminated block comment")])
                advance(j + 2 - i)
            elif ch.isalpha() or ch == "_" or ch == "$":
                j = i + 1
                if ch == "$" and j < n and text[j] == "$":
                    j += 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if ch == "$":
                    kind = "dollar"
                elif ch.isupper() or ch == "_":
                    kind = "upper"
                else:
                    kind = "lower"
                out.append(Token(kind, word, line, col))
                advance(j - i)
            elif ch.isdigit() or (ch in "+-" and i + 1 < n and text[i + 1].isdigit()):
                j = i + 1
                while j < n and (text[j].isdigit() or text[j] in "./eE" or
                                 (text[j] in "+-" and text[j - 1] in "eE")):
                    j += 1
                out.append(Token("number", text[i:j], line, col))
                advance(j - i)
            elif ch in "'\"":
                j = i + 1
                buf = []
                while j < n and text[j] != ch:
                    if text[j] == "\\" and j + 1 < n:
                        j += 1
                    buf.append(text[j])
                    j += 1
                if j >= n:
                    raise TPTPParseError([ParseDiagnostic(
                        "error", self.filename, line, col, "unterminated quoted string")])
                body = "".join(buf)
                if ch == "'":
                    out.append(Token("squote", body, line, col))
                else:
                    out.append(Token("dquote", '"' + body + '"', line, col))
                advance(j + 1 - i)
            else:
                for p in _PUNCT2:
                    if text.startswith(p, i):
                        out.append(Token("punct", p, line, col))
                        advance(len(p))
                        break
                else:
                    if ch in _PUNCT1:
                        out.append(Token("punct", ch, line, col))
                        advance(1)
                    else:
                        raise TPTPParseError([ParseDiagnostic(
                            "error", self.filename, line, col, "unexpected character %r" % ch)])
        out.append(Token("eof", "", line, col))
        return out


class TermParser:
    """Recursive-descent reader for terms, literals and CNF disjunctions.

    Shared by the problem reader and the proof-text reader.
    """

    def __init__(self, tokens: List[Token], filename: str = "<string>"):
        self.toks = tokens
        self.pos = 0
        self.filename = filename
        self.diagnostics: List[ParseDiagnostic] = []
        self.varmap: Dict[str, Var] = {}
        self.saw_true = False

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind == "punct" and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail("expected %r, found %r" % (text, self.tok.text or "end of file"))
        return self.next()

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        self.diagnostics.append(ParseDiagnostic("error", self.filename, tok.line, tok.col, message))
        raise _Abort(message)

    def warn(self, message: str, tok: Token):
        self.diagnostics.append(ParseDiagnostic("warning", self.filename, tok.line, tok.col, message))

    # grammar
    def variable(self, name: str) -> Var:
        v = self.varmap.get(name)
        if v is None:
            v = self.varmap[name] = Var(name)
        return v

    def term(self):
        t = self.tok
        if t.kind == "upper":
            self.next()
            return self.variable(t.text)
        if t.kind in ("lower", "squote", "dollar"):
            self.next()
            args = self.arguments()
            return Fn(t.text, args)
        if t.kind in ("number", "dquote"):
            self.next()
            return Fn(t.text, ())
        self.fail("expected a term, found %r" % (t.text or "end of file"))

    def arguments(self) -> tuple:
        if not self.at("("):
            return ()
        self.next()
        args = [self.term()]
        while self.at(","):
            self.next()
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def literal(self) -> Optional[Literal]:
        """One literal, or ``None`` for ``$false`` and ``$true`` (the latter sets ``saw_true``)."""
        start = self.tok
        if self.at("~"):
            self.next()
            before, self.saw_true = self.saw_true, False
            if self.at("("):
                self.next()
                lit = self.literal()
                self.expect(")")
            else:
                lit = self.literal()
            inner_true, self.saw_true = self.saw_true, before
            if lit is None:
                # ~$true is $false; ~$false is $true
                self.saw_true = self.saw_true or not inner_true
                return None
            return lit.dual()
        lhs = self.term()
        if self.at("=") or self.at("!="):
            op = self.next()
            rhs = self.term()
            self.warn("equality is read as an uninterpreted predicate", op)
            return Literal(op.text == "=", Fn("=", (lhs, rhs)))
        if type(lhs) is Var:
            self.fail("a variable is not an atom", start)
        if lhs.functor == "$false" and not lhs.args:
            return None
        if lhs.functor == "$true" and not lhs.args:
            self.saw_true = True
            return None
        return Literal(True, lhs)

    def disjunction(self) -> List[Literal]:
        lits: List[Literal] = []
        self._disjunct(lits)
        while self.at("|"):
            self.next()
            self._disjunct(lits)
        return lits

    def _disjunct(self, lits: List[Literal]) -> None:
        if self.at("("):
            self.next()
            lits.extend(self.disjunction())
            self.expect(")")
            return
        lit = self.literal()
        if lit is not None:
            lits.append(lit)

    def name(self) -> str:
        t = self.tok
        if t.kind in ("lower", "squote", "number", "upper"):
            self.next()
            return t.text
        self.fail("expected a formula name, found %r" % (t.text or "end of file"))

    def skip_balanced(self) -> None:
        """Skip tokens up to (not including) the ``)`` closing the current level."""
        depth = 0
        while self.tok.kind != "eof":
            if self.at("(") or self.at("["):
                depth += 1
            elif self.at(")") or self.at("]"):
                if depth == 0:
                    return
                depth -= 1
            self.next()

    def recover(self) -> None:
        """Skip to just past the next top-level ``.`` terminator."""
        depth = 0
        while self.tok.kind != "eof":
            if self.at("(") or self.at("["):
                depth += 1
            elif self.at(")") or self.at("]"):
                depth = max(0, depth - 1)
            elif self.at(".") and depth == 0:
                self.next()
                return
            self.next()


class _Reader:
    def __init__(self, include_dirs: Sequence[str]):
        self.include_dirs = [Path(d) for d in include_dirs]
        self.clauses: List[Clause] = []
        self.names: List[str] = []
        self.roles: List[str] = []
        self.signature = Signature()
        self.diagnostics: List[ParseDiagnostic] = []
        self.stack: List[Path] = []
        self.first_name: Optional[str] = None

    def read_file(self, path: Path, only: Optional[set] = None, where: Optional[Tuple[str, int, int]] = None):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            f, ln, col = where or (str(path), 1, 1)
            self.diagnostics.append(ParseDiagnostic("error", f, ln, col, "cannot read %s: %s" % (path, exc.strerror or exc)))
            return
        self.stack.append(path.resolve())
        try:
            self.read_text(text, str(path), path.parent, only)
        finally:
            self.stack.pop()

    def resolve_include(self, target: str, base: Optional[Path]) -> Optional[Path]:
        candidates = [d / target for d in self.include_dirs]
        if base is not None:
            candidates.append(base / target)
        if os.path.isabs(target):
            candidates.insert(0, Path(target))
        for c in candidates:
            if c.is_file():
                return c
        return None

    def read_text(self, text: str, filename: str, base: Optional[Path], only: Optional[set] = None):
        try:
            tokens = Lexer(text, filename).tokens()
        except TPTPParseError as exc:
            self.diagnostics.extend(exc.diagnostics)
            return
        p = TermParser(tokens, filename)
        while p.tok.kind != "eof":
            start = p.tok
            try:
                if start.kind != "lower":
                    p.fail("expected an annotated formula or include, found %r" % start.text)
                if start.text == "include":
                    self._include(p, base, only)
                elif start.text == "cnf":
                    self._cnf(p, only)
                elif start.text in OTHER_LANGUAGES:
                    p.fail("CNF only: %s formulas are not supported" % start.text)
                else:
                    p.fail("unknown directive %r" % start.text)
            except _Abort:
                p.recover()
        self.diagnostics.extend(p.diagnostics)

    def _include(self, p: TermParser, base: Optional[Path], only: Optional[set]):
        kw = p.next()
        p.expect("(")
        t = p.tok
        if t.kind != "squote":
            p.fail("include expects a quoted file name")
        p.next()
        selection = None
        if p.at(","):
            p.next()
            p.expect("[")
            selection = set()
            if not p.at("]"):
                selection.add(p.name())
                while p.at(","):
                    p.next()
                    selection.add(p.name())
            p.expect("]")
        p.expect(")")
        p.expect(".")
        if only is not None:
            selection = only if selection is None else selection & only
        path = self.resolve_include(t.text, base)
        if path is None:
            p.fail("cannot find included file %r" % t.text, t)
        if path.resolve() in self.stack:
            p.fail("include cycle through %r" % t.text, t)
        self.read_file(path, selection, (p.filename, kw.line, kw.col))

    def _cnf(self, p: TermParser, only: Optional[set]):
        p.next()
        p.expect("(")
        name = p.name()
        p.expect(",")
        role_tok = p.tok
        if role_tok.kind != "lower":
            p.fail("expected a formula role")
        p.next()
        p.expect(",")
        p.varmap = {}
        formula_tok = p.tok
        p.saw_true = False
        lits = p.disjunction()
        trivially_true = p.saw_true
        if p.at(","):
            p.next()
            p.skip_balanced()
        p.expect(")")
        p.expect(".")
        if only is not None and name not in only:
            return
        if self.first_name is None:
            self.first_name = name
        if role_tok.text not in KNOWN_ROLES:
            p.warn("unknown role %r, clause kept" % role_tok.text, role_tok)
        if trivially_true:
            p.warn("clause %s contains $true and is dropped" % name, formula_tok)
            return
        clause = Clause.of(lits)
        try:
            for a in clause.antecedent + clause.succedent:
                self.signature.declare_atom(a)
        except ArityError as exc:
            p.fail(str(exc), formula_tok)
        self.clauses.append(clause)
        self.names.append(name)
        self.roles.append(role_tok.text)

    def problem(self, name: str) -> Problem:
        errors = [d for d in self.diagnostics if d.severity == "error"]
        if errors:
            raise TPTPParseError(self.diagnostics)
        warnings = [d for d in self.diagnostics if d.severity == "warning"]
        return Problem(
            self.clauses, self.names, self.roles, self.signature, name=name, warnings=warnings,
        )


def parse_problem(path, include_dirs: Sequence[str] = ()) -> Problem:
    """Read a TPTP CNF file; raises :class:`TPTPParseError` carrying diagnostics."""
    path = Path(path)
    r = _Reader(include_dirs)
    r.read_file(path)
    return r.problem(path.stem)


def parse_string(text: str, name: str = "problem", include_dirs: Sequence[str] = (),
                 base_dir=None) -> Problem:
    r = _Reader(include_dirs)
    r.read_text(text, "<%s>" % name, Path(base_dir) if base_dir else None)
    return r.problem(name)


def format_problem(problem: Problem) -> str:
    lines = []
    for c, n, role in zip(problem.clauses, problem.names, problem.roles):
        lines.append("cnf(%s, %s, (%s))." % (format_symbol(n), role, format_clause(c)))
    return "\n".join(lines) + "\n"
