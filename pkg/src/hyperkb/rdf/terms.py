"""RDF terms and triples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from hyperkb.errors import TermPositionError

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"

XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
XSD_STRING = XSD + "string"
NUMERIC_TYPES = frozenset({
    XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE, XSD + "float", XSD + "int", XSD + "long",
    XSD + "short", XSD + "byte", XSD + "nonNegativeInteger", XSD + "positiveInteger",
    XSD + "negativeInteger", XSD + "nonPositiveInteger", XSD + "unsignedInt",
    XSD + "unsignedLong", XSD + "unsignedShort", XSD + "unsignedByte",
})


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, order=True)
class BNode:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    language: str | None = None
    datatype: str | None = None

    def __post_init__(self) -> None:
        if self.language is not None and self.datatype is not None:
            raise ValueError("a literal cannot have both a language tag and a datatype")
        if self.language is not None:
            object.__setattr__(self, "language", self.language.lower())

    @property
    def is_numeric(self) -> bool:
        return self.datatype in NUMERIC_TYPES

    def numeric_value(self) -> float | int:
        if self.datatype in (XSD_DECIMAL, XSD_DOUBLE, XSD + "float"):
            return float(self.lexical)
        return int(self.lexical)

    def __str__(self) -> str:
        escaped = (
            self.lexical.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        )
        if self.language:
            return f'"{escaped}"@{self.language}'
        if self.datatype:
            return f'"{escaped}"^^<{self.datatype}>'
        return f'"{escaped}"'


Term = Union[Iri, BNode, Literal]
Subject = Union[Iri, BNode]


def integer(n: int) -> Literal:
    return Literal(str(n), datatype=XSD_INTEGER)


def boolean(b: bool) -> Literal:
    return Literal("true" if b else "false", datatype=XSD_BOOLEAN)


def term_key(t: Term) -> tuple:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(t, Iri):
        return (0, t.value, "", "")
    if isinstance(t, BNode):
        return (1, t.label, "", "")
    return (2, t.lexical, t.language or "", t.datatype or "")


@dataclass(frozen=True)
class Triple:
    subject: Subject
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Iri, BNode)):
            raise TermPositionError(f"subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TermPositionError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BNode, Literal)):
            raise TermPositionError(f"object must be an RDF term, got {self.object!r}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))
