"""Turtle subset: parser and deterministic serializer.

Supported: ``@base``/``@prefix`` and their ``BASE``/``PREFIX`` forms, IRI
references resolved against the base, prefixed names (including the empty
prefix), ``a``, string literals with ``@lang`` or ``^^datatype``, integer,
decimal, double and boolean shorthands, ``;`` and ``,`` lists, ``[ ... ]``
blank nodes, ``_:label`` blank nodes and ``( ... )`` collections.

Blank nodes are relabelled ``b0, b1, ...`` in order of first appearance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from urllib.parse import urljoin

from hyperkb.errors import ParseError
from hyperkb.rdf.graph import Graph, collection_items
from hyperkb.rdf.terms import (
    RDF, XSD, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, BNode, Iri, Literal,
    Term, Triple, term_key,
)

RDF_TYPE = Iri(RDF + "type")
RDF_FIRST = Iri(RDF + "first")
RDF_REST = Iri(RDF + "rest")
RDF_NIL = Iri(RDF + "nil")

_PN_CHARS_BASE = "A-Za-z\u00c0-\u00d6\u00d8-\u00f6\u00f8-\u02ff\u0370-\u037d\u037f-\u1fff\u200c-\u200d\u2070-\u218f\u2c00-\u2fef\u3001-\ud7ff\uf900-\ufdcf\ufdf0-\ufffd\U00010000-\U000effff"
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + r"\-0-9\u00b7\u0300-\u036f\u203f-\u2040"
PN_PREFIX = rf"[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?"
_PLX = r"%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]"
PN_LOCAL = rf"(?:[{_PN_CHARS_U}:0-9]|{_PLX})(?:(?:[{_PN_CHARS}.:]|{_PLX})*(?:[{_PN_CHARS}:]|{_PLX}))?"
ECHAR = r"\\[tbnrf\"'\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{{}}|^`\\\x00-\x20]*>)
  | (?P<long_string>\"\"\"(?:[^"\\]|{ECHAR}|"(?!""))*\"\"\"|'''(?:[^'\\]|{ECHAR}|'(?!''))*''')
  | (?P<string>"(?:[^"\\\n\r]|{ECHAR})*"|'(?:[^'\\\n\r]|{ECHAR})*')
  | (?P<directive>@prefix\b|@base\b)
  | (?P<langtag>@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)
  | (?P<bnode>_:[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)
  | (?P<double>[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+))
  | (?P<decimal>[+-]?[0-9]*\.[0-9]+)
  | (?P<integer>[+-]?[0-9]+)
  | (?P<pname>(?:{PN_PREFIX})?:(?:{PN_LOCAL})?)
  | (?P<keyword>[A-Za-z][A-Za-z0-9]*)
  | (?P<punct>\^\^|[.;,\[\]()])
    """,
    re.VERBOSE,
)

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_UNESCAPE_RE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.S)
_LOCAL_ESCAPE_RE = re.compile(r"\\(.)")
_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")


def unescape(s: str) -> str:
    def repl(m: re.Match) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        return _ESCAPES.get(m.group(3), "\\" + m.group(3))
    return _UNESCAPE_RE.sub(repl, s)


@dataclass
class PrefixEnv:
    """Prefix bindings (label without colon -> namespace IRI) and an optional base."""

    prefixes: dict[str, str] = field(default_factory=dict)
    base: str | None = None

    def expand(self, pname: str) -> str:
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            raise KeyError(prefix)
        return self.prefixes[prefix] + _LOCAL_ESCAPE_RE.sub(r"\1", local)

    def abbreviate(self, iri: str) -> str | None:
        best = None
        for prefix, ns in self.prefixes.items():
            if iri.startswith(ns) and (best is None or len(ns) > len(self.prefixes[best])):
                local = iri[len(ns):]
                if local == "" or _SAFE_LOCAL_RE.fullmatch(local):
                    best = prefix
        if best is None:
            return None
        return f"{best}:{iri[len(self.prefixes[best]):]}"


_SAFE_LOCAL_RE = re.compile(rf"[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?")


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
        if kind not in ("ws", "comment"):
            tokens.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Tok("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, base: str | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.env = PrefixEnv(base=base)
        self.graph = Graph()
        self.bnode_labels: dict[str, BNode] = {}
        self.bnode_count = 0

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
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def at_punct(self, value: str) -> bool:
        return self.tok.kind == "punct" and self.tok.value == value

    def expect_punct(self, value: str) -> None:
        if not self.at_punct(value):
            raise self.error(f"expected {value!r}")
        self.advance()

    def fresh(self) -> BNode:
        node = BNode(f"b{self.bnode_count}")
        self.bnode_count += 1
        return node

    def resolve(self, ref: str, tok: _Tok) -> str:
        if _SCHEME_RE.match(ref):
            return ref
        if self.env.base is None:
            raise ParseError(f"relative IRI <{ref}> with no base", tok.line, tok.column)
        return urljoin(self.env.base, ref)

    def emit(self, s, p, o) -> None:
        self.graph.add(Triple(s, p, o))

    # -- grammar --------------------------------------------------------------

    def document(self) -> None:
        while self.tok.kind != "eof":
            self.statement()

    def statement(self) -> None:
        tok = self.tok
        if tok.kind == "directive":
            self.advance()
            if tok.value == "@prefix":
                self.prefix_decl()
            else:
                self.base_decl()
            self.expect_punct(".")
            return
        if tok.kind == "keyword" and tok.value.upper() in ("PREFIX", "BASE"):
            self.advance()
            if tok.value.upper() == "PREFIX":
                self.prefix_decl()
            else:
                self.base_decl()
            return
        self.triples()
        self.expect_punct(".")

    def prefix_decl(self) -> None:
        tok = self.tok
        if tok.kind != "pname" or not tok.value.endswith(":") or tok.value.count(":") != 1:
            raise self.error("expected a prefix label ending in ':'")
        self.advance()
        iri_tok = self.tok
        if iri_tok.kind != "iri":
            raise self.error("expected an IRI reference")
        self.advance()
        self.env.prefixes[tok.value[:-1]] = self.resolve(unescape(iri_tok.value[1:-1]), iri_tok)

    def base_decl(self) -> None:
        tok = self.tok
        if tok.kind != "iri":
            raise self.error("expected an IRI reference")
        self.advance()
        ref = unescape(tok.value[1:-1])
        self.env.base = ref if _SCHEME_RE.match(ref) or self.env.base is None else urljoin(self.env.base, ref)
        if not _SCHEME_RE.match(self.env.base):
            raise ParseError(f"base IRI <{ref}> is not absolute", tok.line, tok.column)

    def triples(self) -> None:
        if self.at_punct("["):
            subject = self.blank_property_list()
            if not self.at_punct("."):
                self.predicate_object_list(subject)
            return
        subject = self.subject()
        self.predicate_object_list(subject)

    def subject(self) -> Term:
        tok = self.tok
        if tok.kind in ("iri", "pname"):
            return self.iri()
        if tok.kind == "bnode":
            return self.labelled_bnode()
        if self.at_punct("("):
            return self.collection()
        raise self.error("expected a subject")

    def iri(self) -> Iri:
        tok = self.advance()
        if tok.kind == "iri":
            return Iri(self.resolve(unescape(tok.value[1:-1]), tok))
        try:
            return Iri(self.env.expand(tok.value))
        except KeyError:
            raise ParseError(f"unknown prefix {tok.value.partition(':')[0]!r}:", tok.line, tok.column) from None

    def labelled_bnode(self) -> BNode:
        label = self.advance().value[2:]
        node = self.bnode_labels.get(label)
        if node is None:
            node = self.bnode_labels[label] = self.fresh()
        return node

    def predicate_object_list(self, subject: Term) -> None:
        self.verb_object_list(subject)
        while self.at_punct(";"):
            self.advance()
            while self.at_punct(";"):
                self.advance()
            if self.at_punct(".") or self.at_punct("]") or self.tok.kind == "eof":
                return
            self.verb_object_list(subject)

    def verb_object_list(self, subject: Term) -> None:
        tok = self.tok
        if tok.kind == "keyword" and tok.value == "a":
            self.advance()
            predicate = RDF_TYPE
        elif tok.kind in ("iri", "pname"):
            predicate = self.iri()
        else:
            raise self.error("expected a predicate")
        self.emit(subject, predicate, self.object())
        while self.at_punct(","):
            self.advance()
            self.emit(subject, predicate, self.object())

    def object(self) -> Term:
        tok = self.tok
        if tok.kind in ("iri", "pname"):
            return self.iri()
        if tok.kind == "bnode":
            return self.labelled_bnode()
        if self.at_punct("["):
            return self.blank_property_list()
        if self.at_punct("("):
            return self.collection()
        if tok.kind in ("string", "long_string"):
            return self.literal()
        if tok.kind == "integer":
            self.advance()
            return Literal(tok.value, datatype=XSD_INTEGER)
        if tok.kind == "decimal":
            self.advance()
            return Literal(tok.value, datatype=XSD_DECIMAL)
        if tok.kind == "double":
            self.advance()
            return Literal(tok.value, datatype=XSD_DOUBLE)
        if tok.kind == "keyword" and tok.value in ("true", "false"):
            self.advance()
            return Literal(tok.value, datatype=XSD_BOOLEAN)
        raise self.error("expected an object")

    def literal(self) -> Literal:
        tok = self.advance()
        quote = 3 if tok.kind == "long_string" else 1
        lexical = unescape(tok.value[quote:-quote])
        if self.tok.kind == "langtag":
            return Literal(lexical, language=self.advance().value[1:])
        if self.at_punct("^^"):
            self.advance()
            if self.tok.kind not in ("iri", "pname"):
                raise self.error("expected a datatype IRI")
            return Literal(lexical, datatype=self.iri().value)
        return Literal(lexical)

    def blank_property_list(self) -> BNode:
        self.expect_punct("[")
        node = self.fresh()
        if not self.at_punct("]"):
            self.predicate_object_list(node)
        self.expect_punct("]")
        return node

    def collection(self) -> Term:
        self.expect_punct("(")
        items = []
        while not self.at_punct(")"):
            if self.tok.kind == "eof":
                raise self.error("unterminated collection")
            items.append(self.object())
        self.advance()
        if not items:
            return RDF_NIL
        nodes = [self.fresh() for _ in items]
        for i, (node, item) in enumerate(zip(nodes, items)):
            self.emit(node, RDF_FIRST, item)
            self.emit(node, RDF_REST, nodes[i + 1] if i + 1 < len(nodes) else RDF_NIL)
        return nodes[0]


def parse_turtle(text: str, base: str | None = None) -> tuple[Graph, PrefixEnv]:
    """Parse Turtle text into a graph and the prefix environment it declared."""
    parser = _Parser(text, base)
    parser.document()
    return parser.graph, parser.env


# -- serialization ---------------------------------------------------------------

_INTEGER_RE = re.compile(r"[+-]?[0-9]+\Z")
_DECIMAL_RE = re.compile(r"[+-]?[0-9]*\.[0-9]+\Z")
_INDENT = "    "


def _escape(s: str) -> str:
    return (s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
            .replace("\r", "\\r").replace("\t", "\\t"))


def _predicate_key(p: Iri) -> tuple:
    return (p != RDF_TYPE, p.value)


class _Writer:
    def __init__(self, graph: Graph, env: PrefixEnv):
        self.graph = graph
        self.env = env
        refs: dict[BNode, int] = {}
        for t in graph:
            if isinstance(t.object, BNode):
                refs[t.object] = refs.get(t.object, 0) + 1
        self.refs = refs
        self.collections: dict[BNode, list[Term]] = {}
        self.list_nodes: set[BNode] = set()
        self._find_collections()
        self.inline = {
            b for b, n in refs.items() if n == 1 and b not in self.list_nodes
        }
        self._break_cycles()

    def _find_collections(self) -> None:
        for head, n in sorted(self.refs.items(), key=lambda kv: kv[0].label):
            if n != 1 or head in self.list_nodes:
                continue
            # a list head is never itself the rest of another list node
            if any(True for _ in self.graph.match(None, RDF_REST, head)):
                continue
            items = collection_items(self.graph, head)
            if items is None:
                continue
            chain = self._chain(head)
            if all(len(list(self.graph.match(node))) == 2 for node in chain) and all(
                self.refs.get(node) == 1 for node in chain
            ):
                self.collections[head] = items
                self.list_nodes.update(chain[1:])

    def _chain(self, head: BNode) -> list[BNode]:
        chain = []
        node: Term = head
        while node != RDF_NIL:
            chain.append(node)
            node = self.graph.objects(node, RDF_REST)[0]
        return chain

    def _break_cycles(self) -> None:
        """Demote inline nodes that no top-level subject can reach."""
        while True:
            reachable: set[BNode] = set()
            stack = [s for s in self.graph.subjects() if not self._nested(s)]
            while stack:
                node = stack.pop()
                for t in self.graph.match(node):
                    o = t.object
                    if isinstance(o, BNode) and self._nested(o) and o not in reachable:
                        reachable.add(o)
                        stack.append(o)
            stranded = sorted(
                (b for b in self.inline | set(self.collections) | self.list_nodes
                 if b not in reachable and any(True for _ in self.graph.match(b))),
                key=lambda b: b.label,
            )
            if not stranded:
                return
            victim = stranded[0]
            self.inline.discard(victim)
            self.collections.pop(victim, None)
            self.list_nodes.discard(victim)

    def _nested(self, node: Term) -> bool:
        return isinstance(node, BNode) and (
            node in self.inline or node in self.collections or node in self.list_nodes
        )

    def iri(self, iri: Iri) -> str:
        short = self.env.abbreviate(iri.value)
        return short if short is not None else f"<{iri.value}>"

    def literal(self, lit: Literal) -> str:
        if lit.datatype == XSD_INTEGER and _INTEGER_RE.match(lit.lexical):
            return lit.lexical
        if lit.datatype == XSD_DECIMAL and _DECIMAL_RE.match(lit.lexical):
            return lit.lexical
        if lit.datatype == XSD_BOOLEAN and lit.lexical in ("true", "false"):
            return lit.lexical
        text = f'"{_escape(lit.lexical)}"'
        if lit.language:
            return f"{text}@{lit.language}"
        if lit.datatype:
            return f"{text}^^{self.iri(Iri(lit.datatype))}"
        return text

    def term(self, t: Term, depth: int) -> str:
        if isinstance(t, Iri):
            return "()" if t == RDF_NIL else self.iri(t)
        if isinstance(t, Literal):
            return self.literal(t)
        if t in self.collections:
            return "( " + " ".join(self.term(i, depth) for i in self.collections[t]) + " )"
        if t in self.inline:
            return self.property_list(t, depth + 1, brackets=True)
        return f"_:{t.label}"

    def property_list(self, node: Term, depth: int, brackets: bool) -> str:
        by_pred: dict[Iri, list[Term]] = {}
        for t in self.graph.match(node):
            by_pred.setdefault(t.predicate, []).append(t.object)
        if not by_pred:
            return "[]"
        pad = _INDENT * depth
        parts = []
        for p in sorted(by_pred, key=_predicate_key):
            verb = "a" if p == RDF_TYPE else self.iri(p)
            objs = ", ".join(self.term(o, depth) for o in sorted(by_pred[p], key=term_key))
            parts.append(f"{verb} {objs}")
        body = f" ;\n{pad}".join(parts)
        if brackets:
            return f"[\n{pad}{body}\n{_INDENT * (depth - 1)}]"
        return body

    def write(self) -> str:
        lines = [f"@prefix {p}: <{ns}> ." for p, ns in self.env.prefixes.items()]
        blocks = []
        subjects = sorted(
            (s for s in self.graph.subjects() if not self._nested(s)), key=term_key
        )
        for s in subjects:
            if isinstance(s, BNode) and s not in self.refs:
                blocks.append("[\n" + _INDENT + self.property_list(s, 1, brackets=False) + "\n] .")
            else:
                head = self.term(s, 0) if isinstance(s, Iri) else f"_:{s.label}"
                blocks.append(f"{head}\n{_INDENT}{self.property_list(s, 1, brackets=False)} .")
        out = "\n".join(lines)
        if blocks:
            out += ("\n\n" if lines else "") + "\n\n".join(blocks)
        return out + "\n" if out else ""


def serialize_turtle(graph: Graph, env: PrefixEnv | None = None) -> str:
    """Deterministic Turtle: subjects sorted, one predicate list per subject."""
    return _Writer(graph, env or PrefixEnv()).write()


STANDARD_PREFIXES = {
    "rdf": RDF,
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": XSD,
    "owl": "http://www.w3.org/2002/07/owl#",
}
