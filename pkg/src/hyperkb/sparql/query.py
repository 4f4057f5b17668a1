"""SPARQL subset: AST and parser.

::

    PREFIX : <http://example.org/#>
    SELECT ?x1 ?x2
    WHERE {
      ?x1 :actsIn ?x3 . ?x1 :type :Person .
      FILTER (?x1 != ?x2 && ?x3 != :other)
    }

    SELECT ?x ?y WHERE ?x (:actsIn/^:actsIn)+ ?y

Paths use ``/`` (sequence), ``^`` (inverse), ``+`` (one or more) and
parentheses.  ``PREFIX:`` with no space before the colon declares the empty
prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union
from urllib.parse import urljoin

from hyperkb.errors import ParseError
from hyperkb.rdf.terms import XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, Iri, Literal, Term
from hyperkb.rdf.turtle import ECHAR, PN_LOCAL, PN_PREFIX, RDF_TYPE, unescape


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


Node = Union[Var, Term]


@dataclass(frozen=True)
class Edge:
    predicate: Iri


@dataclass(frozen=True)
class Inverse:
    path: PathExpr


@dataclass(frozen=True)
class Seq:
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class Plus:
    path: PathExpr


@dataclass(frozen=True)
class Group:
    path: PathExpr


PathExpr = Union[Edge, Inverse, Seq, Plus, Group]


@dataclass(frozen=True)
class TriplePattern:
    subject: Node
    predicate: Union[Var, Iri]
    object: Node


@dataclass(frozen=True)
class PathClause:
    start: Node
    path: PathExpr
    end: Node


COMPARISON_OPS = ("!=", "==", "=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Comparison:
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class SelectQuery:
    projection: tuple[Var, ...]
    patterns: tuple[TriplePattern, ...] = ()
    filters: tuple[Comparison, ...] = ()
    paths: tuple[PathClause, ...] = ()
    prefixes: dict[str, str] = field(default_factory=dict, compare=False)

    def variables(self) -> list[Var]:
        seen: dict[Var, None] = {}
        for pat in self.patterns:
            for t in (pat.subject, pat.predicate, pat.object):
                if isinstance(t, Var):
                    seen.setdefault(t)
        for pc in self.paths:
            for t in (pc.start, pc.end):
                if isinstance(t, Var):
                    seen.setdefault(t)
        return list(seen)


_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{{}}|^`\\\x00-\x20]*>)
  | (?P<string>"(?:[^"\\\n\r]|{ECHAR})*"|'(?:[^'\\\n\r]|{ECHAR})*')
  | (?P<langtag>@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)
  | (?P<var>[?$][A-Za-z0-9_]+)
  | (?P<double>[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+))
  | (?P<decimal>[+-]?[0-9]*\.[0-9]+)
  | (?P<integer>[+-]?[0-9]+)
  | (?P<keyword>(?i:PREFIX|BASE)(?=:))
  | (?P<pname>(?:{PN_PREFIX})?:(?:{PN_LOCAL})?)
  | (?P<word>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>!=|==|<=|>=|&&|\^\^|[=<>{{}}().;,/^+*])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "keyword":
            kind = "word"
        if kind not in ("ws", "comment"):
            tokens.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Tok("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, prefixes: dict[str, str] | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes = dict(prefixes or {})
        self.base: str | None = None

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.pos]

    def advance(self) -> _Tok:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of query" if tok.kind == "eof" else repr(tok.value)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def at(self, value: str) -> bool:
        return self.tok.kind in ("op", "word") and self.tok.value == value

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "word" and self.tok.value.upper() == word

    def expect(self, value: str) -> None:
        if not self.at(value):
            raise self.error(f"expected {value!r}")
        self.advance()

    def query(self) -> SelectQuery:
        while self.at_word("PREFIX") or self.at_word("BASE"):
            if self.advance().value.upper() == "PREFIX":
                tok = self.tok
                if tok.kind != "pname" or not tok.value.endswith(":") or tok.value.count(":") != 1:
                    raise self.error("expected a prefix label ending in ':'")
                self.advance()
                self.prefixes[tok.value[:-1]] = self.iri_ref()
            else:
                self.base = self.iri_ref()
        if not self.at_word("SELECT"):
            raise self.error("expected SELECT")
        self.advance()
        projection: list[Var] = []
        var_toks: list[_Tok] = []
        while self.tok.kind == "var":
            var_toks.append(self.tok)
            projection.append(Var(self.advance().value[1:]))
        if not projection:
            raise self.error("expected at least one projected variable")
        if not self.at_word("WHERE"):
            raise self.error("expected WHERE")
        self.advance()
        patterns: list[TriplePattern] = []
        filters: list[Comparison] = []
        paths: list[PathClause] = []
        if self.at("{"):
            self.advance()
            self.group_body(patterns, filters, paths)
            self.expect("}")
        else:
            self.triples_same_subject(patterns, paths)
            if self.at("."):
                self.advance()
        if self.tok.kind != "eof":
            raise self.error("unexpected input after the query")
        query = SelectQuery(tuple(projection), tuple(patterns), tuple(filters), tuple(paths), self.prefixes)
        bound = set(query.variables())
        for var, tok in zip(projection, var_toks):
            if var not in bound:
                raise ParseError(f"projected variable {var} does not occur in the WHERE clause",
                                 tok.line, tok.column)
        return query

    def group_body(self, patterns, filters, paths) -> None:
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("expected '}'")
            if self.at_word("FILTER"):
                self.advance()
                filters.extend(self.filter_expr())
                if self.at("."):
                    self.advance()
                continue
            self.triples_same_subject(patterns, paths)
            if self.at("."):
                self.advance()
            elif not self.at("}") and not self.at_word("FILTER"):
                raise self.error("expected '.' or '}'")

    def filter_expr(self) -> list[Comparison]:
        self.expect("(")
        out = [self.comparison()]
        while self.at("&&"):
            self.advance()
            out.append(self.comparison())
        self.expect(")")
        return out

    def comparison(self) -> Comparison:
        if self.at("("):
            self.advance()
            cmp = self.comparison()
            self.expect(")")
            return cmp
        left = self.node()
        if not (self.tok.kind == "op" and self.tok.value in COMPARISON_OPS):
            raise self.error("expected a comparison operator")
        op = self.advance().value
        right = self.node()
        return Comparison("==" if op == "=" else op, left, right)

    def triples_same_subject(self, patterns, paths) -> None:
        subject = self.node()
        while True:
            verb = self.verb()
            while True:
                obj = self.node()
                if isinstance(verb, (Var, Iri)):
                    patterns.append(TriplePattern(subject, verb, obj))
                else:
                    paths.append(PathClause(subject, verb, obj))
                if not self.at(","):
                    break
                self.advance()
            if not self.at(";"):
                return
            self.advance()
            if self.at(".") or self.at("}") or self.tok.kind == "eof":
                return

    def verb(self) -> Var | Iri | PathExpr:
        if self.tok.kind == "var":
            return Var(self.advance().value[1:])
        if self.tok.kind in ("iri", "pname") or self.at("a"):
            start = self.pos
            path = self.path()
            if isinstance(path, Edge) and self.pos == start + 1:
                return path.predicate
            return path
        path = self.path()
        return path.path if isinstance(path, Group) else path

    def path(self) -> PathExpr:
        left = self.path_elt()
        while self.at("/"):
            self.advance()
            left = Seq(left, self.path_elt())
        return left

    def path_elt(self) -> PathExpr:
        if self.at("^"):
            self.advance()
            return Inverse(self.path_elt())
        primary = self.path_primary()
        if self.at("+"):
            self.advance()
            return Plus(primary)
        if self.at("*"):
            raise self.error("zero-or-more paths are not supported")
        return primary

    def path_primary(self) -> PathExpr:
        if self.at("a"):
            self.advance()
            return Edge(RDF_TYPE)
        if self.tok.kind in ("iri", "pname"):
            return Edge(self.iri())
        if self.at("("):
            self.advance()
            inner = self.path()
            self.expect(")")
            return Group(inner)
        raise self.error("expected a predicate or path")

    def iri_ref(self) -> str:
        tok = self.tok
        if tok.kind != "iri":
            raise self.error("expected an IRI reference")
        self.advance()
        ref = unescape(tok.value[1:-1])
        if self.base and not re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", ref):
            ref = urljoin(self.base, ref)
        return ref

    def iri(self) -> Iri:
        tok = self.tok
        if tok.kind == "iri":
            return Iri(self.iri_ref())
        self.advance()
        prefix, _, local = tok.value.partition(":")
        if prefix not in self.prefixes:
            raise ParseError(f"unknown prefix {prefix!r}:", tok.line, tok.column)
        return Iri(self.prefixes[prefix] + re.sub(r"\\(.)", r"\1", local))

    def node(self) -> Node:
        tok = self.tok
        if tok.kind == "var":
            self.advance()
            return Var(tok.value[1:])
        if tok.kind in ("iri", "pname"):
            return self.iri()
        if tok.kind == "string":
            self.advance()
            lexical = unescape(tok.value[1:-1])
            if self.tok.kind == "langtag":
                return Literal(lexical, language=self.advance().value[1:])
            if self.at("^^"):
                self.advance()
                return Literal(lexical, datatype=self.iri().value)
            return Literal(lexical)
        if tok.kind in ("integer", "decimal", "double"):
            self.advance()
            dt = {"integer": XSD_INTEGER, "decimal": XSD_DECIMAL, "double": XSD_DOUBLE}[tok.kind]
            return Literal(tok.value, datatype=dt)
        if tok.kind == "word" and tok.value in ("true", "false"):
            self.advance()
            return Literal(tok.value, datatype=XSD_BOOLEAN)
        raise self.error("expected a variable, IRI or literal")


def parse_sparql(text: str, prefixes: dict[str, str] | None = None) -> SelectQuery:
    """Parse a SELECT query.

    ``prefixes`` are defaults (for example those of the queried graph);
    ``PREFIX`` declarations in the text override them.
    """
    return _Parser(text, prefixes).query()


def format_path(path: PathExpr, prefixes: dict[str, str] | None = None) -> str:
    if isinstance(path, Edge):
        for p, ns in (prefixes or {}).items():
            if path.predicate.value.startswith(ns):
                return f"{p}:{path.predicate.value[len(ns):]}"
        return str(path.predicate)
    if isinstance(path, Inverse):
        return "^" + format_path(path.path, prefixes)
    if isinstance(path, Seq):
        return f"{format_path(path.left, prefixes)}/{format_path(path.right, prefixes)}"
    if isinstance(path, Plus):
        return format_path(path.path, prefixes) + "+"
    return f"({format_path(path.path, prefixes)})"
