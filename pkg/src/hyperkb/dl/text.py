"""ASCII surface syntax for SROIQ knowledge bases.

One statement per line, each terminated by ``.``; ``#`` starts a comment::

    individual kubrick, de-niro .
    concept Director, Actor .
    role directs, actsIn, knows .

    Director(kubrick) .
    (Actor and Director)(de-niro) .
    -directs(kubrick, taxi-driver) .
    kubrick != de-niro .
    Director <= exists directs . Top .
    directs o actsIn^- <= knows .
    Asy(directs) .

Concept operators by binding strength: ``not`` > ``and`` > ``or``.  The body
of ``exists``/``forall``/``>=``/``<=`` extends as far to the right as
possible.  ``U`` is the universal role and ``r^-`` the inverse of ``r``.

Every statement line is parsed after all declarations have been collected, so
declarations may appear anywhere in the document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from hyperkb.dl.syntax import (
    BOTTOM, TOP, And, Asy, AtLeast, AtMost, Axiom, BottomConcept, Concept,
    ConceptAssertion, ConceptName, Dis, Equality, Exists, Forall, Gci, Inequality,
    InverseRole, Irr, KnowledgeBase, NegativeRoleAssertion, Nominal, Not, Or, Ref,
    Ria, Role, RoleAssertion, RoleName, SelfRestriction, Sym, TopConcept, Tra, U,
    UniversalRole, Vocabulary,
)
from hyperkb.errors import ParseError, VocabularyError

KEYWORDS = frozenset({
    "individual", "concept", "role", "Top", "Bottom", "Self", "not", "and", "or",
    "exists", "forall", "o", "U", "Sym", "Asy", "Tra", "Ref", "Irr", "Dis",
})
DECLARATIONS = {"individual": "individuals", "concept": "concepts", "role": "roles"}
CHARACTERISTICS = {"Sym": Sym, "Asy": Asy, "Tra": Tra, "Ref": Ref, "Irr": Irr}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#.*)
  | (?P<var>\?[A-Za-z0-9_][A-Za-z0-9_-]*)
  | (?P<word>[A-Za-z0-9_][A-Za-z0-9_-]*)
  | (?P<op><=|>=|!=|\^-|[=(){},.\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "var", "op", "eof"
    value: str
    line: int
    column: int


def tokenize_line(text: str, line: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) + 1))
    return tokens


class _StatementParser:
    def __init__(self, tokens: list[Token], vocab: Vocabulary, allow_vars: bool = False):
        self.tokens = tokens
        self.pos = 0
        self.vocab = vocab
        self.allow_vars = allow_vars

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, value: str) -> bool:
        return self.tok.kind in ("op", "word") and self.tok.value == value

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of statement" if tok.kind == "eof" else repr(tok.value)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise self.error(f"expected {value!r}")
        return self.advance()

    def name_of_kind(self, kind: str) -> str:
        tok = self.tok
        if tok.kind == "var" and kind == "individual" and self.allow_vars:
            return self.advance().value
        if tok.kind != "word" or tok.value in KEYWORDS:
            raise self.error(f"expected {kind} name")
        actual = self.vocab.kind_of(tok.value)
        if actual is None:
            raise VocabularyError(f"undeclared name {tok.value!r}", tok.line, tok.column)
        if actual != kind:
            raise ParseError(
                f"{tok.value!r} is declared as {actual}, expected {kind}", tok.line, tok.column
            )
        return self.advance().value

    def is_individual_start(self) -> bool:
        tok = self.tok
        if tok.kind == "var":
            return self.allow_vars
        return tok.kind == "word" and tok.value in self.vocab.individuals

    def is_role_start(self) -> bool:
        tok = self.tok
        return tok.kind == "word" and (tok.value == "U" or tok.value in self.vocab.roles)

    # -- grammar ------------------------------------------------------------

    def role(self) -> Role:
        if self.at("U"):
            self.advance()
            return U
        name = self.name_of_kind("role")
        if self.at("^-"):
            self.advance()
            return InverseRole(name)
        return RoleName(name)

    def concept(self) -> Concept:
        left = self.conjunction()
        while self.at("or"):
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Concept:
        left = self.unary()
        while self.at("and"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Concept:
        if self.at("not"):
            self.advance()
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            quantifier = self.advance().value
            role = self.role()
            self.expect(".")
            if quantifier == "exists" and self.at("Self"):
                self.advance()
                return SelfRestriction(role)
            filler = self.concept()
            return Exists(role, filler) if quantifier == "exists" else Forall(role, filler)
        if self.at(">=") or self.at("<="):
            op = self.advance().value
            tok = self.tok
            if tok.kind != "word" or not tok.value.isdigit():
                raise self.error("expected a nonnegative integer")
            n = int(self.advance().value)
            role = self.role()
            self.expect(".")
            filler = self.concept()
            return AtLeast(n, role, filler) if op == ">=" else AtMost(n, role, filler)
        return self.primary()

    def primary(self) -> Concept:
        if self.at("Top"):
            self.advance()
            return TOP
        if self.at("Bottom"):
            self.advance()
            return BOTTOM
        if self.at("{"):
            open_tok = self.advance()
            names: list[str] = []
            if not self.at("}"):
                names.append(self.name_of_kind("individual"))
                while self.at(","):
                    self.advance()
                    names.append(self.name_of_kind("individual"))
            self.expect("}")
            if len(set(names)) != len(names):
                raise ParseError("duplicate individual in nominal", open_tok.line, open_tok.column)
            return Nominal(tuple(names))
        if self.at("("):
            self.advance()
            inner = self.concept()
            self.expect(")")
            return inner
        return ConceptName(self.name_of_kind("concept"))

    def individual_pair(self) -> tuple[str, str]:
        self.expect("(")
        a = self.name_of_kind("individual")
        self.expect(",")
        b = self.name_of_kind("individual")
        self.expect(")")
        return a, b

    def axiom(self) -> Axiom:
        tok = self.tok
        if tok.kind == "word" and tok.value in CHARACTERISTICS and self.peek().value == "(":
            self.advance()
            self.expect("(")
            role = self.role()
            self.expect(")")
            return CHARACTERISTICS[tok.value](role)
        if tok.kind == "word" and tok.value == "Dis" and self.peek().value == "(":
            self.advance()
            self.expect("(")
            first = self.role()
            self.expect(",")
            second = self.role()
            self.expect(")")
            return Dis(first, second)
        if self.at("-"):
            self.advance()
            role = self.role()
            a, b = self.individual_pair()
            return NegativeRoleAssertion(role, a, b)
        if self.is_individual_start() and self.peek().value in ("=", "!="):
            a = self.name_of_kind("individual")
            op = self.advance().value
            b = self.name_of_kind("individual")
            return Equality(a, b) if op == "=" else Inequality(a, b)
        if self.is_role_start():
            first = self.role()
            if self.at("("):
                a, b = self.individual_pair()
                return RoleAssertion(first, a, b)
            chain = [first]
            while self.at("o"):
                self.advance()
                chain.append(self.role())
            self.expect("<=")
            return Ria(tuple(chain), self.role())
        concept = self.concept()
        if self.at("("):
            self.advance()
            a = self.name_of_kind("individual")
            self.expect(")")
            return ConceptAssertion(concept, a)
        if self.at("<="):
            self.advance()
            return Gci(concept, self.concept())
        raise self.error("expected '(' or '<=' after concept expression")

    def finish(self, require_dot: bool = True) -> None:
        if self.at("."):
            self.advance()
        elif require_dot:
            raise self.error("expected '.' at end of statement")
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")


def _declaration(tokens: list[Token]) -> tuple[str, list[str]]:
    kw = tokens[0]
    names: list[str] = []
    i = 1
    while True:
        tok = tokens[i]
        if tok.kind != "word" or tok.value in KEYWORDS:
            found = "end of statement" if tok.kind == "eof" else repr(tok.value)
            raise ParseError(f"expected a name in {kw.value} declaration, found {found}", tok.line, tok.column)
        names.append(tok.value)
        i += 1
        if tokens[i].value == ",":
            i += 1
            continue
        break
    if tokens[i].value != "." or tokens[i + 1].kind != "eof":
        tok = tokens[i]
        raise ParseError("expected '.' after declaration", tok.line, tok.column)
    return DECLARATIONS[kw.value], names


def _statements(text: str) -> list[list[Token]]:
    statements = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = tokenize_line(line, lineno)
        if len(tokens) > 1:
            statements.append(tokens)
    return statements


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a knowledge base document; see the module docstring for the syntax."""
    statements = _statements(text)
    declared: dict[str, list[str]] = {"individuals": [], "concepts": [], "roles": []}
    seen: dict[str, tuple[str, Token]] = {}
    for tokens in statements:
        if tokens[0].kind == "word" and tokens[0].value in DECLARATIONS:
            kind, names = _declaration(tokens)
            for name in names:
                prev = seen.get(name)
                if prev is not None and prev[0] != kind:
                    tok = tokens[0]
                    raise VocabularyError(
                        f"{name!r} declared as both {prev[0][:-1]} and {kind[:-1]}", tok.line, tok.column
                    )
                seen[name] = (kind, tokens[0])
                declared[kind].append(name)
    vocab = Vocabulary(
        frozenset(declared["individuals"]), frozenset(declared["concepts"]), frozenset(declared["roles"])
    )
    axioms = []
    for tokens in statements:
        if tokens[0].kind == "word" and tokens[0].value in DECLARATIONS:
            continue
        parser = _StatementParser(tokens, vocab)
        ax = parser.axiom()
        parser.finish()
        axioms.append(ax)
    return KnowledgeBase.from_axioms(vocab, axioms)


def parse_axiom(text: str, vocabulary: Vocabulary, allow_vars: bool = False) -> Axiom:
    """Parse a single axiom; the terminating ``.`` is optional.

    With ``allow_vars`` individual positions also accept ``?x`` variables,
    which is how query patterns are written.
    """
    parser = _StatementParser(tokenize_line(text.strip()), vocabulary, allow_vars)
    ax = parser.axiom()
    parser.finish(require_dot=False)
    return ax


def parse_concept(text: str, vocabulary: Vocabulary) -> Concept:
    parser = _StatementParser(tokenize_line(text.strip()), vocabulary)
    c = parser.concept()
    if parser.tok.kind != "eof":
        raise parser.error("unexpected trailing input")
    return c


def parse_pattern(text: str, vocabulary: Vocabulary) -> list[Axiom]:
    """Parse a conjunctive query: ABox templates separated by ``;``."""
    parts = [p for p in text.split(";") if p.strip()]
    return [parse_axiom(p, vocabulary, allow_vars=True) for p in parts]


# -- printing ------------------------------------------------------------------

_QUANT, _OR, _AND, _NOT, _ATOM = range(5)


def _level(c: Concept) -> int:
    if isinstance(c, Or):
        return _OR
    if isinstance(c, And):
        return _AND
    if isinstance(c, Not):
        return _NOT
    if isinstance(c, (Exists, Forall, AtLeast, AtMost)):
        return _QUANT
    return _ATOM


def format_role(role: Role) -> str:
    if isinstance(role, UniversalRole):
        return "U"
    if isinstance(role, InverseRole):
        return f"{role.name}^-"
    return role.name


def format_concept(c: Concept, min_level: int = _QUANT) -> str:
    text = _format_concept(c)
    return f"({text})" if _level(c) < min_level else text


def _format_concept(c: Concept) -> str:
    if isinstance(c, ConceptName):
        return c.name
    if isinstance(c, TopConcept):
        return "Top"
    if isinstance(c, BottomConcept):
        return "Bottom"
    if isinstance(c, Nominal):
        return "{" + ", ".join(c.individuals) + "}"
    if isinstance(c, Not):
        return "not " + format_concept(c.operand, _NOT)
    if isinstance(c, And):
        return f"{format_concept(c.left, _AND)} and {format_concept(c.right, _NOT)}"
    if isinstance(c, Or):
        return f"{format_concept(c.left, _OR)} or {format_concept(c.right, _AND)}"
    if isinstance(c, SelfRestriction):
        return f"exists {format_role(c.role)} . Self"
    if isinstance(c, Exists):
        return f"exists {format_role(c.role)} . {format_concept(c.filler)}"
    if isinstance(c, Forall):
        return f"forall {format_role(c.role)} . {format_concept(c.filler)}"
    if isinstance(c, AtLeast):
        return f">= {c.n} {format_role(c.role)} . {format_concept(c.filler)}"
    if isinstance(c, AtMost):
        return f"<= {c.n} {format_role(c.role)} . {format_concept(c.filler)}"
    raise TypeError(f"not a concept: {c!r}")


def format_axiom(ax: Axiom) -> str:
    """One axiom in surface syntax, without the terminating dot."""
    if isinstance(ax, Ria):
        chain = " o ".join(format_role(r) for r in ax.chain)
        return f"{chain} <= {format_role(ax.sup)}"
    for name, cls in CHARACTERISTICS.items():
        if isinstance(ax, cls):
            return f"{name}({format_role(ax.role)})"
    if isinstance(ax, Dis):
        return f"Dis({format_role(ax.first)}, {format_role(ax.second)})"
    if isinstance(ax, Gci):
        return f"{format_concept(ax.sub)} <= {format_concept(ax.sup)}"
    if isinstance(ax, ConceptAssertion):
        return f"{format_concept(ax.concept, _ATOM)}({ax.individual})"
    if isinstance(ax, RoleAssertion):
        return f"{format_role(ax.role)}({ax.subject}, {ax.object})"
    if isinstance(ax, NegativeRoleAssertion):
        return f"-{format_role(ax.role)}({ax.subject}, {ax.object})"
    if isinstance(ax, Equality):
        return f"{ax.first} = {ax.second}"
    if isinstance(ax, Inequality):
        return f"{ax.first} != {ax.second}"
    raise TypeError(f"not an axiom: {ax!r}")


def serialize_kb(kb: KnowledgeBase) -> str:
    lines = []
    v = kb.vocabulary
    for keyword, names in (("individual", v.individuals), ("concept", v.concepts), ("role", v.roles)):
        if names:
            lines.append(f"{keyword} {', '.join(sorted(names))} .")
    for title, box in (("ABox", kb.abox), ("TBox", kb.tbox), ("RBox", kb.rbox)):
        if box:
            lines.append("")
            lines.append(f"# {title}")
            lines.extend(f"{format_axiom(ax)} ." for ax in box)
    return "\n".join(lines) + "\n" if lines else ""
