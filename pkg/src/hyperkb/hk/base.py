"""The Hyperknowledge base: an id-keyed entity store with integrity checks."""

from __future__ import annotations

import copy
from typing import Any, Iterable, Iterator

from hyperkb.errors import DuplicateIdError, IntegrityError, UnknownIdError
from hyperkb.hk.model import Connector, Context, Entity, Link, Node, TargetRef

MEMBERSHIP_CONNECTORS = ("is-a", "is-a-cap")
SUBCLASS_CONNECTOR = "subclass"
LINK_ID_PREFIX = "link-"


class HkBase:
    """Entities keyed by id in insertion order.

    Every mutation is atomic: it is validated on a copy and only committed
    when the whole base is consistent again.
    """

    def __init__(self) -> None:
        self._entities: dict[str, Entity] = {}

    # -- access ----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._entities)

    def __iter__(self) -> Iterator[Entity]:
        return iter(self._entities.values())

    def __contains__(self, ident: object) -> bool:
        return ident in self._entities

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HkBase):
            return NotImplemented
        if self._entities != other._entities:
            return False
        parents = [None] + [e.id for e in self if isinstance(e, Context)]
        return all(
            [e.id for e in self.children_of(p)] == [e.id for e in other.children_of(p)]
            for p in parents
        )

    def ids(self) -> list[str]:
        return list(self._entities)

    def get_entity(self, ident: str) -> Entity:
        try:
            return self._entities[ident]
        except KeyError:
            raise UnknownIdError(f"unknown id {ident!r}") from None

    def get_entity_or_none(self, ident: str) -> Entity | None:
        return self._entities.get(ident)

    def get_node(self, ident: str) -> Node:
        entity = self.get_entity(ident)
        if not isinstance(entity, Node):
            raise UnknownIdError(f"{ident!r} is not a node")
        return entity

    def children_of(self, parent: str | None) -> list[Entity]:
        return [e for e in self._entities.values() if e.parent == parent]

    def nodes(self) -> list[Node]:
        return [e for e in self._entities.values() if isinstance(e, Node)]

    def links(self, connector: str | None = None) -> list[Link]:
        return [
            e for e in self._entities.values()
            if isinstance(e, Link) and (connector is None or e.connector == connector)
        ]

    def copy(self) -> HkBase:
        dup = HkBase()
        dup._entities = copy.deepcopy(self._entities)
        return dup

    def context_ancestors(self, ident: str) -> list[str]:
        """Enclosing contexts, innermost first."""
        out = []
        parent = self.get_entity(ident).parent
        while parent is not None:
            out.append(parent)
            parent = self._entities[parent].parent
        return out

    # -- references ------------------------------------------------------------

    def canonical(self, ref: TargetRef) -> TargetRef:
        """Follow reference nodes until a non-reference node is reached."""
        node = self.get_entity(ref.node)
        anchor = ref.anchor
        seen = {node.id}
        while isinstance(node, Node) and node.is_reference:
            target = node.refer
            anchor = anchor or target.anchor
            node = self.get_entity(target.node)
            if node.id in seen:
                raise IntegrityError(f"reference cycle through {node.id!r}")
            seen.add(node.id)
        return TargetRef(node.id, anchor)

    def resolve(self, ident: str) -> Entity:
        return self.get_entity(self.canonical(TargetRef(ident)).node)

    def attr(self, ident: str, name: str) -> Any:
        """Attribute lookup that falls through references, except for ``type``."""
        entity = self.get_entity(ident)
        if name == "id":
            return entity.id
        if name == "type" or name in entity.attrs:
            return entity.attrs.get(name)
        while isinstance(entity, Node) and entity.is_reference:
            entity = self.get_entity(entity.refer.node)
            if name in entity.attrs:
                return entity.attrs[name]
        return None

    # -- membership ------------------------------------------------------------

    def subconcepts(self, concept: str) -> set[str]:
        """Reflexive-transitive closure of ``subclass`` links below ``concept``."""
        below: dict[str, set[str]] = {}
        for link in self.links(SUBCLASS_CONNECTOR):
            for s in link.targets("subject"):
                for o in link.targets("object"):
                    below.setdefault(self.canonical(o).node, set()).add(self.canonical(s).node)
        root = self.canonical(TargetRef(concept)).node
        seen = {root}
        stack = [root]
        while stack:
            for sub in below.get(stack.pop(), ()):
                if sub not in seen:
                    seen.add(sub)
                    stack.append(sub)
        return seen

    def _require_concept(self, concept: str) -> None:
        if concept not in self._entities:
            raise UnknownIdError(f"unknown concept {concept!r}")
        target = self.resolve(concept)
        if not (isinstance(target, Node) and target.is_concept):
            raise UnknownIdError(f"{concept!r} is not a concept node")

    def members(self, concept: str) -> set[TargetRef]:
        """Canonical targets asserted to belong to ``concept`` or a sub-concept."""
        self._require_concept(concept)
        concepts = self.subconcepts(concept)
        out: set[TargetRef] = set()
        for conn in MEMBERSHIP_CONNECTORS:
            for link in self.links(conn):
                if any(self.canonical(o).node in concepts for o in link.targets("object")):
                    out.update(self.canonical(s) for s in link.targets("subject"))
        return out

    def instances_of(self, concept: str) -> list[str]:
        """Node ids and ``node#anchor`` refs that are instances, in base order.

        A reference node is listed on its own whenever its referent is an
        instance.
        """
        members = self.members(concept)
        out = []
        for node in self.nodes():
            if self.canonical(TargetRef(node.id)) in members:
                out.append(node.id)
            for anchor in node.anchors:
                ref = TargetRef(node.id, anchor)
                if self.canonical(ref) in members:
                    out.append(str(ref))
        return out

    # -- mutation --------------------------------------------------------------

    def add_entity(self, entity: Entity) -> Entity:
        return self.add_entities([entity])[0]

    def add_entities(self, entities: Iterable[Entity]) -> list[Entity]:
        """Add several entities at once; links without an id get ``link-N``."""
        entities = [copy.deepcopy(e) for e in entities]
        trial = dict(self._entities)
        for e in entities:
            if e.id:
                if e.id in trial:
                    raise DuplicateIdError(f"duplicate id {e.id!r}")
                trial[e.id] = e
        n = 0
        for e in entities:
            if isinstance(e, Link) and not e.id:
                n += 1
                while f"{LINK_ID_PREFIX}{n}" in trial:
                    n += 1
                e.id = f"{LINK_ID_PREFIX}{n}"
                trial[e.id] = e
        # keep the caller's order, not the id-assignment order
        staged = dict(self._entities)
        staged.update((e.id, e) for e in entities)
        candidate = HkBase()
        candidate._entities = staged
        candidate.validate()
        self._entities = staged
        return entities

    def dependents(self, ident: str) -> list[str]:
        """Ids that must go when ``ident`` goes, in base order, excluding it."""
        self.get_entity(ident)
        doomed = {ident}
        changed = True
        while changed:
            changed = False
            for e in self._entities.values():
                if e.id in doomed:
                    continue
                if e.parent in doomed or self._uses(e, doomed):
                    doomed.add(e.id)
                    changed = True
        return [i for i in self._entities if i in doomed and i != ident]

    @staticmethod
    def _uses(e: Entity, ids: set[str]) -> bool:
        if isinstance(e, Link):
            return e.connector in ids or any(t.node in ids for _, t in e.binds)
        if isinstance(e, Node) and e.is_reference:
            return e.refer.node in ids
        return False

    def remove_entity(self, ident: str, cascade: bool = True) -> list[str]:
        """Remove ``ident`` and return the cascade set (dependents removed with it)."""
        deps = self.dependents(ident)
        if deps and not cascade:
            raise IntegrityError(f"{ident!r} is still used by {', '.join(deps)}")
        for i in [ident, *deps]:
            del self._entities[i]
        return deps

    # -- validation ------------------------------------------------------------

    def validate(self) -> None:
        """Raise :class:`IntegrityError` on the first broken invariant."""
        ents = self._entities
        for e in ents.values():
            if e.parent is not None and not isinstance(ents.get(e.parent), Context):
                raise IntegrityError(f"{e.id!r}: parent {e.parent!r} is not a context in this base")
        for e in ents.values():
            seen = {e.id}
            p = e.parent
            while p is not None:
                if p in seen:
                    raise IntegrityError(f"context nesting cycle through {p!r}")
                seen.add(p)
                p = ents[p].parent
        for e in ents.values():
            if isinstance(e, Node) and e.is_reference:
                target = e.refer
                if target.node not in ents:
                    raise IntegrityError(f"reference {e.id!r} refers to unknown id {target.node!r}")
        for e in ents.values():
            if isinstance(e, Node) and e.is_reference:
                self._check_target(self.canonical(TargetRef(e.id)), f"reference {e.id!r}")
        for e in ents.values():
            if isinstance(e, Link):
                self._check_link(e)

    def _check_target(self, ref: TargetRef, where: str) -> None:
        if ref.node not in self._entities:
            raise IntegrityError(f"{where}: unknown id {ref.node!r}")
        if ref.anchor is None:
            return
        owner = self._entities[self.canonical(TargetRef(ref.node)).node]
        if not isinstance(owner, Node) or ref.anchor not in owner.anchors:
            raise IntegrityError(f"{where}: no anchor {ref.anchor!r} on {owner.id!r}")

    def _check_link(self, link: Link) -> None:
        conn = self._entities.get(link.connector)
        if not isinstance(conn, Connector):
            raise IntegrityError(f"link {link.id!r}: unknown connector {link.connector!r}")
        bound = set()
        for role, target in link.binds:
            if role not in conn.roles:
                raise IntegrityError(f"link {link.id!r}: connector {conn.id!r} has no role {role!r}")
            self._check_target(target, f"link {link.id!r}")
            bound.add(role)
        missing = [r for r in conn.roles if r not in bound]
        if missing:
            raise IntegrityError(f"link {link.id!r}: unbound role(s) {', '.join(missing)}")
