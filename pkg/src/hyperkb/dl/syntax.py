"""Abstract syntax of SROIQ: vocabularies, roles, concept expressions, axioms.

All nodes are immutable and hashable, so they can be shared between threads
and used as dictionary keys.  Structural equality is the dataclass equality,
except for nominals, which compare as sets of individual names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from hyperkb.errors import VocabularyError

NAME_RE = re.compile(r"[A-Za-z0-9_-]+\Z")


@dataclass(frozen=True)
class Vocabulary:
    individuals: frozenset[str] = frozenset()
    concepts: frozenset[str] = frozenset()
    roles: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for attr in ("individuals", "concepts", "roles"):
            object.__setattr__(self, attr, frozenset(getattr(self, attr)))
        for name in self.individuals | self.concepts | self.roles:
            if not NAME_RE.match(name):
                raise VocabularyError(f"invalid name {name!r}")
        clash = (
            (self.individuals & self.concepts)
            | (self.individuals & self.roles)
            | (self.concepts & self.roles)
        )
        if clash:
            raise VocabularyError(
                f"name(s) declared in more than one vocabulary set: {', '.join(sorted(clash))}"
            )

    def kind_of(self, name: str) -> str | None:
        if name in self.individuals:
            return "individual"
        if name in self.concepts:
            return "concept"
        if name in self.roles:
            return "role"
        return None

    def union(self, other: Vocabulary) -> Vocabulary:
        return Vocabulary(
            self.individuals | other.individuals,
            self.concepts | other.concepts,
            self.roles | other.roles,
        )


# -- roles -------------------------------------------------------------------


@dataclass(frozen=True)
class RoleName:
    name: str


@dataclass(frozen=True)
class InverseRole:
    name: str


@dataclass(frozen=True)
class UniversalRole:
    pass


Role = Union[RoleName, InverseRole, UniversalRole]
U = UniversalRole()


def inverse(role: Role) -> Role:
    if isinstance(role, RoleName):
        return InverseRole(role.name)
    if isinstance(role, InverseRole):
        return RoleName(role.name)
    return role


# -- concepts ----------------------------------------------------------------


@dataclass(frozen=True)
class ConceptName:
    name: str


@dataclass(frozen=True)
class TopConcept:
    pass


@dataclass(frozen=True)
class BottomConcept:
    pass


TOP = TopConcept()
BOTTOM = BottomConcept()


@dataclass(frozen=True, eq=False)
class Nominal:
    """``{a1, ..., an}``; kept in written order, compared as a set."""

    individuals: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "individuals", tuple(self.individuals))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Nominal):
            return NotImplemented
        return frozenset(self.individuals) == frozenset(other.individuals)

    def __hash__(self) -> int:
        return hash(("Nominal", frozenset(self.individuals)))


@dataclass(frozen=True)
class Not:
    operand: Concept


@dataclass(frozen=True)
class And:
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Or:
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Exists:
    role: Role
    filler: Concept


@dataclass(frozen=True)
class Forall:
    role: Role
    filler: Concept


@dataclass(frozen=True)
class SelfRestriction:
    role: Role


@dataclass(frozen=True)
class AtLeast:
    n: int
    role: Role
    filler: Concept


@dataclass(frozen=True)
class AtMost:
    n: int
    role: Role
    filler: Concept


Concept = Union[
    ConceptName, TopConcept, BottomConcept, Nominal, Not, And, Or,
    Exists, Forall, SelfRestriction, AtLeast, AtMost,
]


# -- axioms ------------------------------------------------------------------


@dataclass(frozen=True)
class Ria:
    """Role inclusion ``r1 o ... o rn <= r``."""

    chain: tuple[Role, ...]
    sup: Role

    def __post_init__(self) -> None:
        object.__setattr__(self, "chain", tuple(self.chain))
        if not self.chain:
            raise ValueError("role chain must have length >= 1")


@dataclass(frozen=True)
class Sym:
    role: Role


@dataclass(frozen=True)
class Asy:
    role: Role


@dataclass(frozen=True)
class Tra:
    role: Role


@dataclass(frozen=True)
class Ref:
    role: Role


@dataclass(frozen=True)
class Irr:
    role: Role


@dataclass(frozen=True)
class Dis:
    first: Role
    second: Role


@dataclass(frozen=True)
class Gci:
    sub: Concept
    sup: Concept


@dataclass(frozen=True)
class ConceptAssertion:
    concept: Concept
    individual: str


@dataclass(frozen=True)
class RoleAssertion:
    role: Role
    subject: str
    object: str


@dataclass(frozen=True)
class NegativeRoleAssertion:
    role: Role
    subject: str
    object: str


@dataclass(frozen=True)
class Equality:
    first: str
    second: str


@dataclass(frozen=True)
class Inequality:
    first: str
    second: str


RoleCharacteristic = Union[Sym, Asy, Tra, Ref, Irr, Dis]
ABoxAxiom = Union[ConceptAssertion, RoleAssertion, NegativeRoleAssertion, Equality, Inequality]
RBoxAxiom = Union[Ria, Sym, Asy, Tra, Ref, Irr, Dis]
Axiom = Union[RBoxAxiom, Gci, ABoxAxiom]

ABOX_TYPES = (ConceptAssertion, RoleAssertion, NegativeRoleAssertion, Equality, Inequality)
RBOX_TYPES = (Ria, Sym, Asy, Tra, Ref, Irr, Dis)
CHARACTERISTIC_TYPES = (Sym, Asy, Tra, Ref, Irr)


@dataclass(frozen=True)
class KnowledgeBase:
    vocabulary: Vocabulary = field(default_factory=Vocabulary)
    abox: tuple = ()
    tbox: tuple = ()
    rbox: tuple = ()

    def __post_init__(self) -> None:
        for box in ("abox", "tbox", "rbox"):
            object.__setattr__(self, box, tuple(getattr(self, box)))
        for ax in self.abox:
            if not isinstance(ax, ABOX_TYPES):
                raise TypeError(f"{type(ax).__name__} does not belong in the ABox")
        for ax in self.tbox:
            if not isinstance(ax, Gci):
                raise TypeError(f"{type(ax).__name__} does not belong in the TBox")
        for ax in self.rbox:
            if not isinstance(ax, RBOX_TYPES):
                raise TypeError(f"{type(ax).__name__} does not belong in the RBox")

    @classmethod
    def from_axioms(cls, vocabulary: Vocabulary, axioms) -> KnowledgeBase:
        """Partition ``axioms`` into the three boxes, preserving order."""
        abox, tbox, rbox = [], [], []
        for ax in axioms:
            if isinstance(ax, ABOX_TYPES):
                abox.append(ax)
            elif isinstance(ax, Gci):
                tbox.append(ax)
            elif isinstance(ax, RBOX_TYPES):
                rbox.append(ax)
            else:
                raise TypeError(f"not an axiom: {ax!r}")
        return cls(vocabulary, tuple(abox), tuple(tbox), tuple(rbox))

    def axioms(self) -> Iterator[Axiom]:
        yield from self.abox
        yield from self.tbox
        yield from self.rbox

    def with_axioms(self, *axioms: Axiom) -> KnowledgeBase:
        return KnowledgeBase.from_axioms(self.vocabulary, [*self.axioms(), *axioms])

    def __len__(self) -> int:
        return len(self.abox) + len(self.tbox) + len(self.rbox)


# -- signatures ----------------------------------------------------------------


@dataclass
class Signature:
    individuals: set[str] = field(default_factory=set)
    concepts: set[str] = field(default_factory=set)
    roles: set[str] = field(default_factory=set)

    def as_vocabulary(self) -> Vocabulary:
        return Vocabulary(frozenset(self.individuals), frozenset(self.concepts), frozenset(self.roles))


def _role_sig(role: Role, sig: Signature) -> None:
    if isinstance(role, (RoleName, InverseRole)):
        sig.roles.add(role.name)


def _concept_sig(c: Concept, sig: Signature) -> None:
    if isinstance(c, ConceptName):
        sig.concepts.add(c.name)
    elif isinstance(c, Nominal):
        sig.individuals.update(c.individuals)
    elif isinstance(c, Not):
        _concept_sig(c.operand, sig)
    elif isinstance(c, (And, Or)):
        _concept_sig(c.left, sig)
        _concept_sig(c.right, sig)
    elif isinstance(c, (Exists, Forall, AtLeast, AtMost)):
        _role_sig(c.role, sig)
        _concept_sig(c.filler, sig)
    elif isinstance(c, SelfRestriction):
        _role_sig(c.role, sig)


def signature(*items) -> Signature:
    """Names occurring in the given roles, concepts, axioms or knowledge bases."""
    sig = Signature()
    for item in items:
        if isinstance(item, KnowledgeBase):
            for ax in item.axioms():
                _axiom_sig(ax, sig)
        elif isinstance(item, (RoleName, InverseRole, UniversalRole)):
            _role_sig(item, sig)
        elif isinstance(item, (ConceptName, TopConcept, BottomConcept, Nominal, Not, And, Or,
                               Exists, Forall, SelfRestriction, AtLeast, AtMost)):
            _concept_sig(item, sig)
        else:
            _axiom_sig(item, sig)
    return sig


def _axiom_sig(ax: Axiom, sig: Signature) -> None:
    if isinstance(ax, Ria):
        for r in ax.chain:
            _role_sig(r, sig)
        _role_sig(ax.sup, sig)
    elif isinstance(ax, CHARACTERISTIC_TYPES):
        _role_sig(ax.role, sig)
    elif isinstance(ax, Dis):
        _role_sig(ax.first, sig)
        _role_sig(ax.second, sig)
    elif isinstance(ax, Gci):
        _concept_sig(ax.sub, sig)
        _concept_sig(ax.sup, sig)
    elif isinstance(ax, ConceptAssertion):
        _concept_sig(ax.concept, sig)
        sig.individuals.add(ax.individual)
    elif isinstance(ax, (RoleAssertion, NegativeRoleAssertion)):
        _role_sig(ax.role, sig)
        sig.individuals.update((ax.subject, ax.object))
    elif isinstance(ax, (Equality, Inequality)):
        sig.individuals.update((ax.first, ax.second))
    else:
        raise TypeError(f"not an axiom: {ax!r}")
