"""Finite interpretations and the satisfaction relation.

This module is the reference semantics: it works on explicit Python sets and
follows the set-theoretic definitions directly, with no optimisation.  The
bounded search in :mod:`hyperkb.dl.reasoning` verifies every model it returns
against these functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from hyperkb.dl.syntax import (
    And, Asy, AtLeast, AtMost, Axiom, BottomConcept, Concept, ConceptAssertion,
    ConceptName, Dis, Equality, Exists, Forall, Gci, Inequality, InverseRole, Irr,
    KnowledgeBase, NegativeRoleAssertion, Nominal, Not, Or, Ref, Ria, Role,
    RoleAssertion, RoleName, SelfRestriction, Sym, TopConcept, Tra, UniversalRole,
    signature,
)
from hyperkb.errors import InterpretationError, UnmappedNameError

Pair = tuple[str, str]


@dataclass(frozen=True, eq=False)
class Interpretation:
    """A finite domain plus name maps.

    ``domain`` keeps its given order (used when printing); equality compares
    it as a set.
    """

    domain: tuple[str, ...]
    individual_map: Mapping[str, str] = field(default_factory=dict)
    concept_map: Mapping[str, frozenset[str]] = field(default_factory=dict)
    role_map: Mapping[str, frozenset[Pair]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        domain = tuple(dict.fromkeys(self.domain))
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "individual_map", dict(self.individual_map))
        object.__setattr__(
            self, "concept_map", {k: frozenset(v) for k, v in self.concept_map.items()}
        )
        object.__setattr__(
            self, "role_map", {k: frozenset(tuple(p) for p in v) for k, v in self.role_map.items()}
        )
        if not domain:
            raise InterpretationError("the domain must be non-empty")
        elements = set(domain)
        for name, d in self.individual_map.items():
            if d not in elements:
                raise InterpretationError(f"individual {name} maps outside the domain: {d}")
        for name, ext in self.concept_map.items():
            stray = ext - elements
            if stray:
                raise InterpretationError(f"concept {name} contains non-domain elements {sorted(stray)}")
        for name, ext in self.role_map.items():
            for a, b in ext:
                if a not in elements or b not in elements:
                    raise InterpretationError(f"role {name} contains a pair outside the domain: ({a}, {b})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interpretation):
            return NotImplemented
        return (
            set(self.domain) == set(other.domain)
            and self.individual_map == other.individual_map
            and _nonempty(self.concept_map) == _nonempty(other.concept_map)
            and _nonempty(self.role_map) == _nonempty(other.role_map)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def elements(self) -> frozenset[str]:
        return frozenset(self.domain)

    def individual(self, name: str) -> str:
        try:
            return self.individual_map[name]
        except KeyError:
            raise UnmappedNameError(f"individual {name!r} is not mapped") from None

    def concept(self, name: str) -> frozenset[str]:
        try:
            return self.concept_map[name]
        except KeyError:
            raise UnmappedNameError(f"concept {name!r} is not mapped") from None

    def role(self, name: str) -> frozenset[Pair]:
        try:
            return self.role_map[name]
        except KeyError:
            raise UnmappedNameError(f"role {name!r} is not mapped") from None

    def covers(self, kb: KnowledgeBase) -> list[str]:
        """Names used or declared by ``kb`` that this interpretation leaves unmapped."""
        sig = signature(kb)
        v = kb.vocabulary
        missing = [f"individual {n}" for n in sorted(sig.individuals | v.individuals) if n not in self.individual_map]
        missing += [f"concept {n}" for n in sorted(sig.concepts | v.concepts) if n not in self.concept_map]
        missing += [f"role {n}" for n in sorted(sig.roles | v.roles) if n not in self.role_map]
        return missing


def _nonempty(m: Mapping) -> dict:
    return {k: v for k, v in m.items() if v}


def interpret_role(interp: Interpretation, role: Role) -> frozenset[Pair]:
    if isinstance(role, UniversalRole):
        return frozenset(product(interp.domain, repeat=2))
    if isinstance(role, InverseRole):
        return frozenset((b, a) for a, b in interp.role(role.name))
    if isinstance(role, RoleName):
        return interp.role(role.name)
    raise TypeError(f"not a role: {role!r}")


def _successors(interp: Interpretation, role: Role, d: str) -> set[str]:
    return {b for a, b in interpret_role(interp, role) if a == d}


def interpret_concept(interp: Interpretation, c: Concept) -> frozenset[str]:
    delta = interp.elements
    if isinstance(c, ConceptName):
        return interp.concept(c.name)
    if isinstance(c, TopConcept):
        return delta
    if isinstance(c, BottomConcept):
        return frozenset()
    if isinstance(c, Nominal):
        return frozenset(interp.individual(a) for a in c.individuals)
    if isinstance(c, Not):
        return delta - interpret_concept(interp, c.operand)
    if isinstance(c, And):
        return interpret_concept(interp, c.left) & interpret_concept(interp, c.right)
    if isinstance(c, Or):
        return interpret_concept(interp, c.left) | interpret_concept(interp, c.right)
    if isinstance(c, Exists):
        filler = interpret_concept(interp, c.filler)
        return frozenset(d for d in delta if _successors(interp, c.role, d) & filler)
    if isinstance(c, Forall):
        filler = interpret_concept(interp, c.filler)
        return frozenset(d for d in delta if _successors(interp, c.role, d) <= filler)
    if isinstance(c, SelfRestriction):
        rel = interpret_role(interp, c.role)
        return frozenset(d for d in delta if (d, d) in rel)
    if isinstance(c, AtLeast):
        filler = interpret_concept(interp, c.filler)
        return frozenset(d for d in delta if len(_successors(interp, c.role, d) & filler) >= c.n)
    if isinstance(c, AtMost):
        filler = interpret_concept(interp, c.filler)
        return frozenset(d for d in delta if len(_successors(interp, c.role, d) & filler) <= c.n)
    raise TypeError(f"not a concept: {c!r}")


def compose(first: Iterable[Pair], second: Iterable[Pair]) -> frozenset[Pair]:
    by_source: dict[str, set[str]] = {}
    for a, b in second:
        by_source.setdefault(a, set()).add(b)
    return frozenset((a, c) for a, b in first for c in by_source.get(b, ()))


def satisfies_axiom(interp: Interpretation, ax: Axiom) -> bool:
    if isinstance(ax, Ria):
        path = interpret_role(interp, ax.chain[0])
        for r in ax.chain[1:]:
            path = compose(path, interpret_role(interp, r))
        return path <= interpret_role(interp, ax.sup)
    if isinstance(ax, Sym):
        rel = interpret_role(interp, ax.role)
        return all((b, a) in rel for a, b in rel)
    if isinstance(ax, Asy):
        rel = interpret_role(interp, ax.role)
        return all((b, a) not in rel for a, b in rel)
    if isinstance(ax, Tra):
        rel = interpret_role(interp, ax.role)
        return compose(rel, rel) <= rel
    if isinstance(ax, Ref):
        rel = interpret_role(interp, ax.role)
        return all((d, d) in rel for d in interp.domain)
    if isinstance(ax, Irr):
        rel = interpret_role(interp, ax.role)
        return all((d, d) not in rel for d in interp.domain)
    if isinstance(ax, Dis):
        return not (interpret_role(interp, ax.first) & interpret_role(interp, ax.second))
    if isinstance(ax, Gci):
        return interpret_concept(interp, ax.sub) <= interpret_concept(interp, ax.sup)
    if isinstance(ax, ConceptAssertion):
        return interp.individual(ax.individual) in interpret_concept(interp, ax.concept)
    if isinstance(ax, RoleAssertion):
        pair = (interp.individual(ax.subject), interp.individual(ax.object))
        return pair in interpret_role(interp, ax.role)
    if isinstance(ax, NegativeRoleAssertion):
        pair = (interp.individual(ax.subject), interp.individual(ax.object))
        return pair not in interpret_role(interp, ax.role)
    if isinstance(ax, Equality):
        return interp.individual(ax.first) == interp.individual(ax.second)
    if isinstance(ax, Inequality):
        return interp.individual(ax.first) != interp.individual(ax.second)
    raise TypeError(f"not an axiom: {ax!r}")


@dataclass(frozen=True)
class ModelCheck:
    """Outcome of checking an interpretation against a knowledge base."""

    failing: tuple[Axiom, ...]

    @property
    def satisfied(self) -> bool:
        return not self.failing

    def __bool__(self) -> bool:
        return self.satisfied


def satisfies_kb(interp: Interpretation, kb: KnowledgeBase) -> ModelCheck:
    missing = interp.covers(kb)
    if missing:
        raise UnmappedNameError("interpretation does not cover " + ", ".join(missing))
    return ModelCheck(tuple(ax for ax in kb.axioms() if not satisfies_axiom(interp, ax)))
