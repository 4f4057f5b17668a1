"""HyQL abstract syntax, recursive-descent parser and pretty-printer."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Union

from hyperkb.errors import ParseError
from hyperkb.hyql.relations import SPACE_ALIASES, SPACE_OPS, TIME_OPS

MODIFIERS = ("distinct", "count", "max", "min", "sum", "avg")
AGGREGATES = ("count", "max", "min", "sum", "avg")
BINOPS = ("<", "<=", ">", ">=", "==", "!=")
FUNCTIONS = ("count", "id")
KEYWORDS = frozenset(
    {"let", "as", "select", "where", "and", "from", "true", "false"}
    | set(MODIFIERS) | set(TIME_OPS) | set(SPACE_OPS) | set(SPACE_ALIASES)
)

# -- syntax tree -----------------------------------------------------------------


@dataclass(frozen=True)
class Decl:
    """A variable: over a concept's instances, a connector's links, or anything."""

    name: str
    kind: str  # "concept" | "connector" | "free"
    binding: str | None = None
    implicit: bool = False


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class AttrRef:
    var: str
    attr: str


@dataclass(frozen=True)
class AnchorRef:
    var: str
    anchor: str


@dataclass(frozen=True)
class Const:
    value: Any


@dataclass(frozen=True)
class FunCall:
    name: str
    args: tuple


Exp = Union[Const, VarRef, AttrRef]
Target = Union[VarRef, AttrRef, AnchorRef, FunCall]
Operand = Union[VarRef, AnchorRef]


@dataclass(frozen=True)
class LinkClause:
    var: str
    binds: tuple  # of (role, var)


@dataclass(frozen=True)
class RelClause:
    left: Operand
    op: str
    right: Operand

    @property
    def temporal(self) -> bool:
        return self.op in TIME_OPS


@dataclass(frozen=True)
class ContextClause:
    var: str
    context: str


@dataclass(frozen=True)
class SpoClause:
    subject: Operand
    connector: str
    object: str


@dataclass(frozen=True)
class AttrClause:
    left: AttrRef
    op: str
    right: Exp


@dataclass(frozen=True)
class FunClause:
    left: FunCall
    op: str
    right: Exp


Clause = Union[LinkClause, RelClause, ContextClause, SpoClause, AttrClause, FunClause]


@dataclass(frozen=True)
class HyqlQuery:
    decls: tuple[Decl, ...]
    modifier: str | None
    targets: tuple
    where: tuple = ()

    def decl(self, name: str) -> Decl | None:
        return next((d for d in self.decls if d.name == name), None)

    @property
    def is_aggregate(self) -> bool:
        return self.modifier in AGGREGATES


# -- tokens --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>-?[0-9]+(?:\.[0-9]+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<op><=|>=|==|!=|[<>,.\#()\[\]:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i in range(pos, m.end()):
            if text[i] == "\n":
                line, line_start = line + 1, i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# -- parser --------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("name", "op") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of query'!r}")
        tok = self.tok
        self.i += 1
        return tok

    def name(self, what: str = "name") -> str:
        tok = self.tok
        if tok.kind != "name" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}, found {tok.text or 'end of query'!r}")
        self.i += 1
        return tok.text

    # varlist
    def decls(self) -> list[Decl]:
        out: list[Decl] = []
        if not self.accept("let"):
            return out
        while True:
            name = self.name("variable name")
            if any(d.name == name for d in out):
                raise self.error(f"variable {name!r} declared twice", self.toks[self.i - 1])
            if self.accept("as"):
                out.append(Decl(name, "concept", self.name("concept name")))
            elif self.accept(":"):
                out.append(Decl(name, "connector", self.name("connector name")))
            else:
                out.append(Decl(name, "free"))
            # "let a, b" and "let a, let b" are both accepted
            if self.accept(","):
                self.accept("let")
            elif not self.accept("let"):
                return out

    def modifier(self) -> str | None:
        tok = self.tok
        if tok.kind == "name" and tok.text in MODIFIERS and not (
            tok.text in FUNCTIONS and self.peek().text == "("
        ):
            self.i += 1
            return tok.text
        return None

    def funcall(self, fname: str, tok: Token) -> FunCall:
        if fname not in FUNCTIONS:
            raise self.error(f"unknown function {fname!r}", tok)
        self.expect("(")
        args = [self.exp()]
        while self.accept(","):
            args.append(self.exp())
        self.expect(")")
        if len(args) != 1:
            raise self.error(f"{fname}() takes exactly one argument", tok)
        return FunCall(fname, tuple(args))

    def target(self) -> Target:
        tok = self.tok
        if tok.kind == "name" and self.peek().text == "(":
            self.i += 1
            return self.funcall(tok.text, tok)
        return self.access(allow_attr=True)

    def access(self, allow_attr: bool) -> VarRef | AttrRef | AnchorRef:
        var = self.name("variable")
        if self.accept("."):
            if not allow_attr:
                raise self.error("attribute access is not allowed here", self.toks[self.i - 1])
            return AttrRef(var, self.name("attribute name"))
        if self.accept("#"):
            return AnchorRef(var, self.name("anchor name"))
        return VarRef(var)

    def exp(self) -> Exp:
        tok = self.tok
        if tok.kind == "string":
            self.i += 1
            return Const(json.loads(tok.text))
        if tok.kind == "number":
            self.i += 1
            return Const(float(tok.text) if "." in tok.text else int(tok.text))
        if tok.kind == "name" and tok.text in ("true", "false"):
            self.i += 1
            return Const(tok.text == "true")
        ref = self.access(allow_attr=True)
        if isinstance(ref, AnchorRef):
            raise self.error("anchors are not expressions", tok)
        return ref

    def binop(self) -> str:
        tok = self.tok
        if tok.kind != "op" or tok.text not in BINOPS:
            raise self.error(f"expected a comparison operator, found {tok.text or 'end of query'!r}")
        self.i += 1
        return tok.text

    def clause(self) -> Clause:
        tok = self.tok
        if tok.kind == "name" and self.peek().text == "(":
            self.i += 1
            call = self.funcall(tok.text, tok)
            return FunClause(call, self.binop(), self.exp())
        if tok.kind == "name" and self.peek().text == "[":
            var = self.name("link variable")
            self.expect("[")
            binds = []
            while not self.accept("]"):
                role = self.name("role name")
                self.expect(":")
                binds.append((role, self.name("variable")))
            return LinkClause(var, tuple(binds))
        left = self.access(allow_attr=True)
        if isinstance(left, AttrRef):
            return AttrClause(left, self.binop(), self.exp())
        word = self.tok
        if word.kind == "name" and word.text in TIME_OPS + SPACE_OPS + tuple(SPACE_ALIASES):
            self.i += 1
            op = SPACE_ALIASES.get(word.text, word.text)
            return RelClause(left, op, self.access(allow_attr=False))
        if self.accept("from"):
            if not isinstance(left, VarRef):
                raise self.error("'from' needs a plain variable on its left", word)
            return ContextClause(left.name, self.name("context"))
        if word.kind == "name" and word.text not in KEYWORDS:
            connector = self.name("connector")
            return SpoClause(left, connector, self.name("variable"))
        raise self.error(f"expected a clause operator, found {word.text or 'end of query'!r}")

    def query(self) -> HyqlQuery:
        decls = self.decls()
        self.expect("select")
        modifier = self.modifier()
        targets = [self.target()]
        while self.accept(","):
            targets.append(self.target())
        where = []
        if self.accept("where"):
            where.append(self.clause())
            while self.accept("and"):
                where.append(self.clause())
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return HyqlQuery(tuple(decls + _implicit(decls, targets, where)), modifier, tuple(targets), tuple(where))


def _exp_vars(e: Any) -> list[str]:
    if isinstance(e, (VarRef,)):
        return [e.name]
    if isinstance(e, (AttrRef, AnchorRef)):
        return [e.var]
    if isinstance(e, FunCall):
        return [v for a in e.args for v in _exp_vars(a)]
    return []


def clause_vars(c: Clause, decls: dict[str, Decl] | None = None) -> list[str]:
    """Variable names a clause mentions, in textual order."""
    if isinstance(c, LinkClause):
        return [c.var] + [v for _, v in c.binds]
    if isinstance(c, RelClause):
        return _exp_vars(c.left) + _exp_vars(c.right)
    if isinstance(c, ContextClause):
        return [c.var, c.context]
    if isinstance(c, SpoClause):
        middle = [c.connector] if decls and c.connector in decls and decls[c.connector].kind == "connector" else []
        return _exp_vars(c.subject) + middle + [c.object]
    return _exp_vars(c.left) + _exp_vars(c.right)


def _implicit(decls: list[Decl], targets: list, where: list) -> list[Decl]:
    known = {d.name: d for d in decls}
    names: dict[str, None] = {}
    for t in targets:
        names.update(dict.fromkeys(_exp_vars(t)))
    for c in where:
        names.update(dict.fromkeys(clause_vars(c, known)))
    return [Decl(n, "concept", n, implicit=True) for n in names if n not in known]


def parse_hyql(text: str) -> HyqlQuery:
    return _Parser(text).query()


# -- printer -------------------------------------------------------------------


def _fmt_exp(e: Any) -> str:
    if isinstance(e, Const):
        if isinstance(e.value, bool):
            return "true" if e.value else "false"
        if isinstance(e.value, str):
            return json.dumps(e.value, ensure_ascii=False)
        return repr(e.value)
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, AttrRef):
        return f"{e.var}.{e.attr}"
    if isinstance(e, AnchorRef):
        return f"{e.var}#{e.anchor}"
    if isinstance(e, FunCall):
        return f"{e.name}({', '.join(_fmt_exp(a) for a in e.args)})"
    raise TypeError(f"not an expression: {e!r}")


def format_clause(c: Clause) -> str:
    if isinstance(c, LinkClause):
        inner = " ".join(f"{r}: {v}" for r, v in c.binds)
        return f"{c.var} [{' ' + inner + ' ' if inner else ''}]"
    if isinstance(c, RelClause):
        return f"{_fmt_exp(c.left)} {c.op} {_fmt_exp(c.right)}"
    if isinstance(c, ContextClause):
        return f"{c.var} from {c.context}"
    if isinstance(c, SpoClause):
        return f"{_fmt_exp(c.subject)} {c.connector} {c.object}"
    return f"{_fmt_exp(c.left)} {c.op} {_fmt_exp(c.right)}"


def _fmt_decl(d: Decl) -> str:
    if d.kind == "concept":
        return f"let {d.name} as {d.binding}"
    if d.kind == "connector":
        return f"let {d.name} : {d.binding}"
    return f"let {d.name}"


def format_hyql(q: HyqlQuery) -> str:
    parts = []
    explicit = [d for d in q.decls if not d.implicit]
    if explicit:
        parts.append(", ".join(_fmt_decl(d) for d in explicit))
    parts.append("select")
    if q.modifier:
        parts.append(q.modifier)
    parts.append(", ".join(_fmt_exp(t) for t in q.targets))
    if q.where:
        parts.append("where " + " and ".join(format_clause(c) for c in q.where))
    return " ".join(parts)


def target_label(t: Target) -> str:
    return _fmt_exp(t)
