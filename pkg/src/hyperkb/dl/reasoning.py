"""Bounded finite-model reasoning.

Every task reduces to one search: find an interpretation with at most
``max_domain`` elements that satisfies a set of axioms, optionally while
falsifying one more.  A miss is not a proof: a knowledge base with no model up
to the bound may still have a larger (or only infinite) model, and an axiom
with no countermodel up to the bound may still fail to be entailed.

Search order
    Domain sizes ascend from 1.  For a fixed size the candidates are ordered
    lexicographically by individual map (names sorted, element index), then
    concept extensions (names sorted, element bits, absent before present),
    then role extensions (names sorted, pairs row-major, absent before
    present).  The first model in that order is returned, so results do not
    depend on anything but the input.

Pruning
    Extensions are tracked as lower/upper bitmasks and every axiom is
    evaluated three-valued after each assignment to a name it mentions.  An
    individual is never mapped to an element above ``1 +`` the largest
    element used by the individuals before it; every model has a renaming
    satisfying that rule, and the lexicographically first model already does.

Budget
    Before searching size ``n`` the raw candidate count up to ``n`` is
    compared with the budget and :class:`BudgetExceeded` is raised if it is
    larger.  The search never stops early because of the budget.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

from hyperkb.dl.semantics import Interpretation, interpret_concept, satisfies_axiom, satisfies_kb
from hyperkb.dl.syntax import (
    And, Asy, AtLeast, AtMost, Axiom, BottomConcept, Concept, ConceptAssertion,
    ConceptName, Dis, Equality, Exists, Forall, Gci, Inequality, InverseRole, Irr,
    KnowledgeBase, NegativeRoleAssertion, Nominal, Not, Or, Ref, Ria, Role,
    RoleAssertion, SelfRestriction, Sym, TopConcept, Tra, UniversalRole,
    signature,
)
from hyperkb.errors import BudgetExceeded

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class Refuted:
    countermodel: Interpretation


@dataclass(frozen=True)
class NoCountermodelUpTo:
    bound: int


EntailmentVerdict = Union[Refuted, NoCountermodelUpTo]


class Certificate(enum.Enum):
    REFUTES_ENTAILMENT = "RefutesEntailment"
    DOES_NOT_REFUTE = "DoesNotRefute"


# Three-valued results: True, False, or None for "not yet determined".
Tri = Union[bool, None]
Masks = tuple[int, int]
Rows = tuple[Sequence[int], Sequence[int]]


class _State:
    """Partial interpretation over elements ``0 .. n-1`` as bitmasks."""

    def __init__(self, n: int, individuals, concepts, roles):
        self.n = n
        self.full = (1 << n) - 1
        self.ind: dict[str, int | None] = {a: None for a in individuals}
        self.c_lo = {c: 0 for c in concepts}
        self.c_hi = {c: self.full for c in concepts}
        self.r_lo = {r: [0] * n for r in roles}
        self.r_hi = {r: [self.full] * n for r in roles}


def _transpose(rows: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, row in enumerate(rows):
        bit = 1 << i
        for j in range(n):
            if row >> j & 1:
                out[j] |= bit
    return out


def _compose(first: Sequence[int], second: Sequence[int]) -> list[int]:
    out = []
    for row in first:
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= second[j]
            row >>= 1
            j += 1
        out.append(acc)
    return out


class _Compiler:
    def __init__(self, st: _State):
        self.st = st

    def role(self, role: Role) -> Callable[[], Rows]:
        st = self.st
        if isinstance(role, UniversalRole):
            rows = [st.full] * st.n
            return lambda: (rows, rows)
        lo, hi = st.r_lo[role.name], st.r_hi[role.name]
        if isinstance(role, InverseRole):
            n = st.n
            return lambda: (_transpose(lo, n), _transpose(hi, n))
        return lambda: (lo, hi)

    def concept(self, c: Concept) -> Callable[[], Masks]:
        st = self.st
        full, n = st.full, st.n
        if isinstance(c, ConceptName):
            name = c.name
            return lambda: (st.c_lo[name], st.c_hi[name])
        if isinstance(c, TopConcept):
            return lambda: (full, full)
        if isinstance(c, BottomConcept):
            return lambda: (0, 0)
        if isinstance(c, Nominal):
            names = c.individuals

            def nominal() -> Masks:
                lo, open_ = 0, False
                for a in names:
                    d = st.ind[a]
                    if d is None:
                        open_ = True
                    else:
                        lo |= 1 << d
                return lo, (full if open_ else lo)
            return nominal
        if isinstance(c, Not):
            inner = self.concept(c.operand)

            def neg() -> Masks:
                lo, hi = inner()
                return full & ~hi, full & ~lo
            return neg
        if isinstance(c, (And, Or)):
            left, right = self.concept(c.left), self.concept(c.right)
            if isinstance(c, And):
                def conj() -> Masks:
                    l1, h1 = left()
                    l2, h2 = right()
                    return l1 & l2, h1 & h2
                return conj

            def disj() -> Masks:
                l1, h1 = left()
                l2, h2 = right()
                return l1 | l2, h1 | h2
            return disj
        if isinstance(c, SelfRestriction):
            rel = self.role(c.role)

            def self_() -> Masks:
                rlo, rhi = rel()
                lo = hi = 0
                for d in range(n):
                    if rlo[d] >> d & 1:
                        lo |= 1 << d
                    if rhi[d] >> d & 1:
                        hi |= 1 << d
                return lo, hi
            return self_
        rel = self.role(c.role)
        filler = self.concept(c.filler)
        if isinstance(c, Exists):
            def exists() -> Masks:
                rlo, rhi = rel()
                flo, fhi = filler()
                lo = hi = 0
                for d in range(n):
                    if rlo[d] & flo:
                        lo |= 1 << d
                    if rhi[d] & fhi:
                        hi |= 1 << d
                return lo, hi
            return exists
        if isinstance(c, Forall):
            def forall() -> Masks:
                rlo, rhi = rel()
                flo, fhi = filler()
                lo = hi = 0
                for d in range(n):
                    if not rhi[d] & ~flo & full:
                        lo |= 1 << d
                    if not rlo[d] & ~fhi & full:
                        hi |= 1 << d
                return lo, hi
            return forall
        k = c.n
        if isinstance(c, AtLeast):
            def at_least() -> Masks:
                rlo, rhi = rel()
                flo, fhi = filler()
                lo = hi = 0
                for d in range(n):
                    if (rlo[d] & flo).bit_count() >= k:
                        lo |= 1 << d
                    if (rhi[d] & fhi).bit_count() >= k:
                        hi |= 1 << d
                return lo, hi
            return at_least
        if isinstance(c, AtMost):
            def at_most() -> Masks:
                rlo, rhi = rel()
                flo, fhi = filler()
                lo = hi = 0
                for d in range(n):
                    if (rhi[d] & fhi).bit_count() <= k:
                        lo |= 1 << d
                    if (rlo[d] & flo).bit_count() <= k:
                        hi |= 1 << d
                return lo, hi
            return at_most
        raise TypeError(f"not a concept: {c!r}")

    def axiom(self, ax: Axiom) -> Callable[[], Tri]:
        st = self.st
        n, full, ind = st.n, st.full, st.ind
        if isinstance(ax, Gci):
            sub, sup = self.concept(ax.sub), self.concept(ax.sup)

            def gci() -> Tri:
                slo, shi = sub()
                plo, phi = sup()
                if not shi & ~plo:
                    return True
                if slo & ~phi:
                    return False
                return None
            return gci
        if isinstance(ax, ConceptAssertion):
            concept, a = self.concept(ax.concept), ax.individual

            def member() -> Tri:
                d = ind[a]
                if d is None:
                    return None
                lo, hi = concept()
                if lo >> d & 1:
                    return True
                if not hi >> d & 1:
                    return False
                return None
            return member
        if isinstance(ax, (RoleAssertion, NegativeRoleAssertion)):
            rel, a, b = self.role(ax.role), ax.subject, ax.object
            positive = isinstance(ax, RoleAssertion)

            def edge() -> Tri:
                i, j = ind[a], ind[b]
                if i is None or j is None:
                    return None
                lo, hi = rel()
                if lo[i] >> j & 1:
                    return positive
                if not hi[i] >> j & 1:
                    return not positive
                return None
            return edge
        if isinstance(ax, (Equality, Inequality)):
            a, b, same = ax.first, ax.second, isinstance(ax, Equality)

            def eq() -> Tri:
                i, j = ind[a], ind[b]
                if i is None or j is None:
                    return None
                return (i == j) == same
            return eq
        if isinstance(ax, Ria):
            chain = [self.role(r) for r in ax.chain]
            sup = self.role(ax.sup)

            def ria() -> Tri:
                parts = [r() for r in chain]
                path_lo, path_hi = parts[0]
                for lo, hi in parts[1:]:
                    path_lo, path_hi = _compose(path_lo, lo), _compose(path_hi, hi)
                slo, shi = sup()
                if all(not path_hi[d] & ~slo[d] for d in range(n)):
                    return True
                if any(path_lo[d] & ~shi[d] for d in range(n)):
                    return False
                return None
            return ria
        if isinstance(ax, Sym):
            rel = self.role(ax.role)

            def sym() -> Tri:
                lo, hi = rel()
                lo_t, hi_t = _transpose(lo, n), _transpose(hi, n)
                if all(not hi[d] & ~lo_t[d] for d in range(n)):
                    return True
                if any(lo[d] & ~hi_t[d] for d in range(n)):
                    return False
                return None
            return sym
        if isinstance(ax, Asy):
            rel = self.role(ax.role)

            def asy() -> Tri:
                lo, hi = rel()
                lo_t, hi_t = _transpose(lo, n), _transpose(hi, n)
                if all(not hi[d] & hi_t[d] for d in range(n)):
                    return True
                if any(lo[d] & lo_t[d] for d in range(n)):
                    return False
                return None
            return asy
        if isinstance(ax, Tra):
            rel = self.role(ax.role)

            def tra() -> Tri:
                lo, hi = rel()
                hh, ll = _compose(hi, hi), _compose(lo, lo)
                if all(not hh[d] & ~lo[d] for d in range(n)):
                    return True
                if any(ll[d] & ~hi[d] for d in range(n)):
                    return False
                return None
            return tra
        if isinstance(ax, (Ref, Irr)):
            rel = self.role(ax.role)
            reflexive = isinstance(ax, Ref)

            def diagonal() -> Tri:
                lo, hi = rel()
                must = sum(1 << d for d in range(n) if lo[d] >> d & 1)
                may = sum(1 << d for d in range(n) if hi[d] >> d & 1)
                if reflexive:
                    return True if must == full else (False if may != full else None)
                return True if may == 0 else (False if must else None)
            return diagonal
        if isinstance(ax, Dis):
            first, second = self.role(ax.first), self.role(ax.second)

            def dis() -> Tri:
                lo1, hi1 = first()
                lo2, hi2 = second()
                if all(not hi1[d] & hi2[d] for d in range(n)):
                    return True
                if any(lo1[d] & lo2[d] for d in range(n)):
                    return False
                return None
            return dis
        raise TypeError(f"not an axiom: {ax!r}")


def _negate(check: Callable[[], Tri]) -> Callable[[], Tri]:
    def negated() -> Tri:
        v = check()
        return None if v is None else not v
    return negated


@dataclass
class _Constraint:
    check: Callable[[], Tri]
    symbols: frozenset[tuple[str, str]]


def _symbols(ax: Axiom) -> frozenset[tuple[str, str]]:
    sig = signature(ax)
    return frozenset(
        [("i", a) for a in sig.individuals]
        + [("c", c) for c in sig.concepts]
        + [("r", r) for r in sig.roles]
    )


def _raw_space(n: int, n_ind: int, n_con: int, n_rol: int) -> int:
    return n**n_ind * 2 ** (n_con * n) * 2 ** (n_rol * n * n)


class _Search:
    def __init__(self, vocabulary_names, axioms: Sequence[Axiom], refute: Axiom | None, n: int):
        individuals, concepts, roles = vocabulary_names
        self.n = n
        self.individuals = individuals
        self.concepts = concepts
        self.roles = roles
        st = self.st = _State(n, individuals, concepts, roles)
        comp = _Compiler(st)
        constraints = [_Constraint(comp.axiom(ax), _symbols(ax)) for ax in axioms]
        if refute is not None:
            constraints.append(_Constraint(_negate(comp.axiom(refute)), _symbols(refute)))
        self.constraints = constraints
        used = frozenset().union(*(c.symbols for c in constraints)) if constraints else frozenset()
        # names no axiom mentions are pinned to element 0 / the empty extension
        self.variables: list[tuple] = []
        for a in individuals:
            if ("i", a) in used:
                self.variables.append(("i", a))
            else:
                st.ind[a] = 0
        for c in concepts:
            if ("c", c) in used:
                self.variables.extend(("c", c, d) for d in range(n))
            else:
                st.c_hi[c] = 0
        for r in roles:
            if ("r", r) in used:
                self.variables.extend(("r", r, i, j) for i in range(n) for j in range(n))
            else:
                st.r_hi[r][:] = [0] * n
        self.nodes = 0

    def run(self) -> bool:
        pending = []
        for c in self.constraints:
            v = c.check()
            if v is False:
                return False
            if v is None:
                pending.append(c)
        return self._dfs(0, pending, -1)

    def _dfs(self, k: int, pending: list[_Constraint], max_used: int) -> bool:
        self.nodes += 1
        if k == len(self.variables):
            return not pending
        var = self.variables[k]
        st = self.st
        kind, name = var[0], var[1]
        key = (kind, name)
        if kind == "i":
            for d in range(min(max_used + 2, self.n)):
                st.ind[name] = d
                rest = self._propagate(pending, key)
                if rest is not None and self._dfs(k + 1, rest, max(max_used, d)):
                    return True
            st.ind[name] = None
            return False
        if kind == "c":
            bit = 1 << var[2]
            lo, hi = st.c_lo, st.c_hi
            hi[name] &= ~bit
            rest = self._propagate(pending, key)
            if rest is not None and self._dfs(k + 1, rest, max_used):
                return True
            hi[name] |= bit
            lo[name] |= bit
            rest = self._propagate(pending, key)
            if rest is not None and self._dfs(k + 1, rest, max_used):
                return True
            lo[name] &= ~bit
            return False
        i, bit = var[2], 1 << var[3]
        lo, hi = st.r_lo[name], st.r_hi[name]
        hi[i] &= ~bit
        rest = self._propagate(pending, key)
        if rest is not None and self._dfs(k + 1, rest, max_used):
            return True
        hi[i] |= bit
        lo[i] |= bit
        rest = self._propagate(pending, key)
        if rest is not None and self._dfs(k + 1, rest, max_used):
            return True
        lo[i] &= ~bit
        return False

    @staticmethod
    def _propagate(pending: list[_Constraint], key) -> list[_Constraint] | None:
        rest = []
        for c in pending:
            if key in c.symbols:
                v = c.check()
                if v is False:
                    return None
                if v:
                    continue
            rest.append(c)
        return rest

    def model(self) -> Interpretation:
        st = self.st
        names = [f"d{d}" for d in range(self.n)]

        def elems(mask: int) -> frozenset[str]:
            return frozenset(names[d] for d in range(self.n) if mask >> d & 1)

        return Interpretation(
            tuple(names),
            {a: names[st.ind[a]] for a in self.individuals},
            {c: elems(st.c_lo[c]) for c in self.concepts},
            {
                r: frozenset((names[i], names[j]) for i in range(self.n) for j in range(self.n)
                             if st.r_lo[r][i] >> j & 1)
                for r in self.roles
            },
        )


def _names(kb: KnowledgeBase, extra: Iterable[Axiom] = ()):
    sig = signature(kb, *extra)
    v = kb.vocabulary
    return (
        sorted(sig.individuals | v.individuals),
        sorted(sig.concepts | v.concepts),
        sorted(sig.roles | v.roles),
    )


def _search(kb: KnowledgeBase, refute: Axiom | None, max_domain: int, budget: int) -> Interpretation | None:
    if max_domain < 1:
        raise ValueError("max_domain must be at least 1")
    if budget <= 0:
        raise ValueError("budget must be positive")
    names = _names(kb, [refute] if refute is not None else [])
    individuals, concepts, roles = names
    axioms = list(kb.axioms())
    total = 0
    for n in range(1, max_domain + 1):
        total += _raw_space(n, len(individuals), len(concepts), len(roles))
        if total > budget:
            raise BudgetExceeded(
                f"searching domains up to size {n} means {total} candidate interpretations, "
                f"over the budget of {budget}",
                needed=total,
                budget=budget,
            )
        search = _Search(names, axioms, refute, n)
        if search.run():
            model = search.model()
            # cross-check against the reference semantics
            if not satisfies_kb(model, kb) or (refute is not None and satisfies_axiom(model, refute)):
                raise AssertionError("bounded search produced an invalid model")
            return model
    return None


def find_model(kb: KnowledgeBase, max_domain: int, budget: int = DEFAULT_BUDGET) -> Interpretation | None:
    """First model of ``kb`` with at most ``max_domain`` elements, or None.

    None only means that no model of that size exists.
    """
    return _search(kb, None, max_domain, budget)


def check_entailment(
    kb: KnowledgeBase, ax: Axiom, max_domain: int, budget: int = DEFAULT_BUDGET
) -> EntailmentVerdict:
    model = _search(kb, ax, max_domain, budget)
    return NoCountermodelUpTo(max_domain) if model is None else Refuted(model)


def check_certificate(kb: KnowledgeBase, ax: Axiom, interp: Interpretation) -> Certificate:
    """Does ``interp`` show that ``kb`` does not entail ``ax``?"""
    if satisfies_kb(interp, kb) and not satisfies_axiom(interp, ax):
        return Certificate.REFUTES_ENTAILMENT
    return Certificate.DOES_NOT_REFUTE


def gci_witnesses(interp: Interpretation, ax: Gci) -> frozenset[str]:
    """Elements of ``ax.sub`` outside ``ax.sup``: the reasons a GCI fails."""
    return interpret_concept(interp, ax.sub) - interpret_concept(interp, ax.sup)


def retrieve_instances(
    kb: KnowledgeBase, c: Concept, max_domain: int, budget: int = DEFAULT_BUDGET
) -> list[tuple[str, EntailmentVerdict]]:
    individuals = sorted(set(_names(kb)[0]) | signature(c).individuals)
    return [(a, check_entailment(kb, ConceptAssertion(c, a), max_domain, budget)) for a in individuals]


def is_variable(term: str) -> bool:
    return term.startswith("?")


def _pattern_terms(ax: Axiom) -> list[str]:
    if isinstance(ax, ConceptAssertion):
        return [ax.individual]
    if isinstance(ax, (RoleAssertion, NegativeRoleAssertion)):
        return [ax.subject, ax.object]
    if isinstance(ax, (Equality, Inequality)):
        return [ax.first, ax.second]
    raise TypeError(f"query templates must be ABox axioms, got {type(ax).__name__}")


def _instantiate(ax: Axiom, env: dict[str, str]) -> Axiom:
    def sub(t: str) -> str:
        return env.get(t, t)

    if isinstance(ax, ConceptAssertion):
        concept = ax.concept
        if isinstance(concept, Nominal):
            concept = Nominal(tuple(sub(a) for a in concept.individuals))
        return ConceptAssertion(concept, sub(ax.individual))
    if isinstance(ax, (RoleAssertion, NegativeRoleAssertion)):
        return type(ax)(ax.role, sub(ax.subject), sub(ax.object))
    return type(ax)(sub(ax.first), sub(ax.second))


def query_variables(pattern: Sequence[Axiom]) -> list[str]:
    """Variables of a query pattern in order of first occurrence."""
    seen: dict[str, None] = {}
    for ax in pattern:
        for t in _pattern_terms(ax):
            if is_variable(t):
                seen.setdefault(t)
    return list(seen)


def answer_query(
    kb: KnowledgeBase, pattern: Sequence[Axiom], max_domain: int, budget: int = DEFAULT_BUDGET
) -> list[tuple[str, ...]]:
    """Fillings of the ``?x`` blanks under which every template gets no countermodel."""
    variables = query_variables(pattern)
    individuals = _names(kb)[0]
    answers = []
    for values in itertools.product(individuals, repeat=len(variables)):
        env = dict(zip(variables, values))
        if all(
            isinstance(check_entailment(kb, _instantiate(ax, env), max_domain, budget), NoCountermodelUpTo)
            for ax in pattern
        ):
            answers.append(values)
    return answers
