"""Simple/non-simple role classification and structural validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from hyperkb.dl.syntax import (
    And, Asy, AtLeast, AtMost, Axiom, Concept, ConceptAssertion, Dis, Exists, Forall,
    Gci, InverseRole, Irr, KnowledgeBase, Nominal, Not, Or, Ref, Ria, Role, RoleName,
    SelfRestriction, Sym, Tra, UniversalRole,
)
from hyperkb.dl.text import format_axiom


class Simplicity(enum.Enum):
    SIMPLE = "Simple"
    NON_SIMPLE = "NonSimple"


def classify_simple_roles(kb: KnowledgeBase) -> dict[str, Simplicity]:
    """Fixpoint classification of every declared role name.

    A role name becomes non-simple when some RIA with it (or its inverse) as
    super-role has a chain of length >= 2 or a chain containing a non-simple
    role.  ``r <= r`` alone does not make ``r`` non-simple.
    """
    names = set(kb.vocabulary.roles)
    rias = [ax for ax in kb.rbox if isinstance(ax, Ria)]
    for ax in rias:
        names.update(r.name for r in (*ax.chain, ax.sup) if isinstance(r, (RoleName, InverseRole)))
    non_simple: set[str] = set()
    changed = True
    while changed:
        changed = False
        for ax in rias:
            if isinstance(ax.sup, UniversalRole) or ax.sup.name in non_simple:
                continue
            if len(ax.chain) >= 2 or any(not is_simple(r, non_simple) for r in ax.chain):
                non_simple.add(ax.sup.name)
                changed = True
    return {
        name: Simplicity.NON_SIMPLE if name in non_simple else Simplicity.SIMPLE
        for name in sorted(names)
    }


def is_simple(role: Role, non_simple: set[str]) -> bool:
    if isinstance(role, UniversalRole):
        return False
    return role.name not in non_simple


@dataclass(frozen=True)
class Violation:
    axiom: Axiom
    message: str

    def __str__(self) -> str:
        return f"{format_axiom(self.axiom)}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


def validate_kb(kb: KnowledgeBase) -> ValidationReport:
    classes = classify_simple_roles(kb)
    non_simple = {n for n, s in classes.items() if s is Simplicity.NON_SIMPLE}
    found: list[Violation] = []

    def need_simple(ax: Axiom, role: Role, where: str) -> None:
        if not is_simple(role, non_simple):
            found.append(Violation(ax, f"non-simple role {_role_text(role)} in {where}"))

    for ax in kb.rbox:
        if isinstance(ax, (Sym, Asy, Tra, Ref, Irr)):
            if isinstance(ax.role, UniversalRole):
                found.append(Violation(ax, "universal role in a role characteristic"))
            elif isinstance(ax, (Asy, Irr)):
                need_simple(ax, ax.role, type(ax).__name__)
        elif isinstance(ax, Dis):
            universal = [r for r in (ax.first, ax.second) if isinstance(r, UniversalRole)]
            if universal:
                found.append(Violation(ax, "universal role in a role characteristic"))
            else:
                need_simple(ax, ax.first, "Dis")
                need_simple(ax, ax.second, "Dis")
    for ax in kb.axioms():
        for c in _axiom_concepts(ax):
            for sub in _subconcepts(c):
                if isinstance(sub, (SelfRestriction, AtLeast, AtMost)):
                    need_simple(ax, sub.role, _constructor_name(sub))
                elif isinstance(sub, Nominal) and not sub.individuals:
                    found.append(Violation(ax, "empty nominal"))
    return ValidationReport(tuple(found))


def _role_text(role: Role) -> str:
    if isinstance(role, UniversalRole):
        return "U"
    return f"{role.name}^-" if isinstance(role, InverseRole) else role.name


def _constructor_name(c: Concept) -> str:
    return {SelfRestriction: "Self restriction", AtLeast: ">= restriction", AtMost: "<= restriction"}[type(c)]


def _axiom_concepts(ax: Axiom) -> tuple[Concept, ...]:
    if isinstance(ax, Gci):
        return (ax.sub, ax.sup)
    if isinstance(ax, ConceptAssertion):
        return (ax.concept,)
    return ()


def _subconcepts(c: Concept):
    yield c
    if isinstance(c, Not):
        yield from _subconcepts(c.operand)
    elif isinstance(c, (And, Or)):
        yield from _subconcepts(c.left)
        yield from _subconcepts(c.right)
    elif isinstance(c, (Exists, Forall, AtLeast, AtMost)):
        yield from _subconcepts(c.filler)
