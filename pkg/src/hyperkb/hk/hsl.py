"""HSL, the JSON element-tree format for Hyperknowledge bases.

Every element is ``[tag, id?, {attrs}?, [children]?]``; which optional parts
are present is decided by their JSON type, so the order is fixed but any of
them may be left out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from hyperkb.errors import DuplicateIdError, HslError, IntegrityError
from hyperkb.hk.model import (
    NODE_TYPES, Connector, Context, Entity, Link, Node, TargetRef, anchor_attrs, make_anchor,
)

TAGS = ("hsl", "connector", "role", "context", "node", "anchor", "link", "bind")


@dataclass
class Element:
    tag: str
    id: str | None
    attrs: dict
    children: list
    path: str


def _element(raw: Any, path: str) -> Element:
    if not isinstance(raw, list) or not raw or not isinstance(raw[0], str):
        raise HslError(f"{path}: an element must be a JSON array starting with a tag string")
    tag, rest = raw[0], list(raw[1:])
    if tag not in TAGS:
        raise HslError(f"{path}: unknown tag {tag!r}")
    ident = rest.pop(0) if rest and isinstance(rest[0], str) else None
    attrs = rest.pop(0) if rest and isinstance(rest[0], dict) else {}
    children = rest.pop(0) if rest and isinstance(rest[0], list) else []
    if rest:
        raise HslError(f"{path}: unexpected component {rest[0]!r} in {tag!r} element")
    return Element(tag, ident, attrs, children, path)


def _children(el: Element) -> list[Element]:
    return [_element(c, f"{el.path}/{i}") for i, c in enumerate(el.children)]


def _require_id(el: Element) -> str:
    if not el.id:
        raise HslError(f"{el.path}: {el.tag!r} element needs an id")
    return el.id


def _no_children(el: Element) -> None:
    if el.children:
        raise HslError(f"{el.path}: {el.tag!r} element takes no children")


def _connector(el: Element, parent: str | None) -> Connector:
    roles = []
    for child in _children(el):
        if child.tag != "role":
            raise HslError(f"{child.path}: connectors contain only roles, got {child.tag!r}")
        _no_children(child)
        role = _require_id(child)
        if role in roles:
            raise HslError(f"{child.path}: role {role!r} declared twice")
        roles.append(role)
    return Connector(_require_id(el), roles, dict(el.attrs), parent)


def _node(el: Element, parent: str | None) -> Node:
    ident = _require_id(el)
    kind = el.attrs.get("type")
    if kind not in NODE_TYPES:
        raise HslError(f"{el.path}: node type must be one of {', '.join(NODE_TYPES)}, got {kind!r}")
    if kind == "Reference":
        refer = el.attrs.get("refer")
        if not isinstance(refer, str):
            raise HslError(f"{el.path}: reference node {ident!r} needs a 'refer' attribute")
        TargetRef.parse(refer)
    node = Node(ident, dict(el.attrs), {}, parent)
    for child in _children(el):
        if child.tag != "anchor":
            raise HslError(f"{child.path}: nodes contain only anchors, got {child.tag!r}")
        _no_children(child)
        aid = _require_id(child)
        if aid in node.anchors:
            raise HslError(f"{child.path}: duplicate anchor {ident}#{aid}")
        node.anchors[aid] = make_anchor(aid, ident, child.attrs)
    return node


def _link(el: Element, parent: str | None) -> Link:
    attrs = dict(el.attrs)
    connector = attrs.pop("connector", None)
    if not isinstance(connector, str):
        raise HslError(f"{el.path}: link needs a 'connector' attribute")
    binds = []
    for child in _children(el):
        if child.tag != "bind":
            raise HslError(f"{child.path}: links contain only binds, got {child.tag!r}")
        _no_children(child)
        if not child.attrs:
            raise HslError(f"{child.path}: empty bind")
        for role, target in child.attrs.items():
            try:
                binds.append((role, TargetRef.parse(target)))
            except HslError as exc:
                raise HslError(f"{child.path}: {exc}") from None
    return Link(el.id or "", connector, binds, attrs, parent)


def parse_elements(raw_children: list, path: str = "hsl") -> list[Entity]:
    """Materialize a list of top-level elements; link ids may still be empty."""
    out: list[Entity] = []

    def walk(raw: list, parent: str | None, base_path: str) -> None:
        for i, item in enumerate(raw):
            el = _element(item, f"{base_path}/{i}")
            if el.tag == "connector":
                if parent is not None:
                    raise HslError(f"{el.path}: connectors belong directly under the root")
                out.append(_connector(el, parent))
            elif el.tag == "context":
                ctx = Context(_require_id(el), dict(el.attrs), parent)
                out.append(ctx)
                walk(el.children, ctx.id, el.path)
            elif el.tag == "node":
                out.append(_node(el, parent))
            elif el.tag == "link":
                out.append(_link(el, parent))
            else:
                raise HslError(f"{el.path}: {el.tag!r} element is not allowed here")

    walk(raw_children, None, path)
    return out


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise HslError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def root_children(doc: Any) -> list:
    el = _element(doc, "hsl")
    if el.tag != "hsl":
        raise HslError(f"root element must have tag 'hsl', got {el.tag!r}")
    if el.id is not None or el.attrs:
        raise HslError("root element takes only children")
    return el.children


def parse_hsl(text: str):
    """Parse an HSL JSON document into a validated :class:`HkBase`."""
    from hyperkb.hk.base import HkBase

    base = HkBase()
    try:
        base.add_entities(parse_elements(root_children(load_json(text))))
    except (DuplicateIdError, IntegrityError) as exc:
        raise HslError(str(exc)) from None
    return base


# -- serialization -------------------------------------------------------------


def _compact(parts: list) -> str:
    return ", ".join(json.dumps(p, ensure_ascii=False) for p in parts)


def _render(tag: str, ident: str | None, attrs: dict, children: list[str], indent: int) -> str:
    head: list = [tag]
    if ident is not None:
        head.append(ident)
    if attrs:
        head.append(attrs)
    pad = "  " * indent
    if not children:
        return f"{pad}[{_compact(head)}]"
    inner = ",\n".join(children)
    return f"{pad}[{_compact(head)}, [\n{inner}]]"


def element_tree(entity: Entity, base, indent: int = 1) -> str:
    if isinstance(entity, Connector):
        roles = [_render("role", r, {}, [], indent + 1) for r in entity.roles]
        return _render("connector", entity.id, entity.attrs, roles, indent)
    if isinstance(entity, Context):
        kids = [element_tree(e, base, indent + 1) for e in base.children_of(entity.id)]
        return _render("context", entity.id, entity.attrs, kids, indent)
    if isinstance(entity, Node):
        anchors = [_render("anchor", a.id, anchor_attrs(a), [], indent + 1) for a in entity.anchors.values()]
        return _render("node", entity.id, entity.attrs, anchors, indent)
    if isinstance(entity, Link):
        binds = [_render("bind", None, {role: str(t)}, [], indent + 1) for role, t in entity.binds]
        return _render("link", entity.id, {"connector": entity.connector, **entity.attrs}, binds, indent)
    raise TypeError(f"not an entity: {entity!r}")


def serialize_hsl(base) -> str:
    """Serialize a base; link ids are always written out."""
    top = [element_tree(e, base) for e in base.children_of(None)]
    if not top:
        return '["hsl"]\n'
    return '["hsl", [\n' + ",\n".join(top) + "]]\n"
