"""Hyperknowledge entities."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Union

from hyperkb.errors import HslError

NODE_TYPES = ("Concept", "Data", "Reference")
SPATIAL_KEYS = ("x", "y", "w", "h")
TEMPORAL_KEYS = ("begin", "end")
_QUANTITY_RE = re.compile(r"([0-9]+(?:\.[0-9]+)?|\.[0-9]+)(px|s)\Z")


@dataclass(frozen=True, order=True)
class TargetRef:
    """``node`` or ``node#anchor``."""

    node: str
    anchor: str | None = None

    @classmethod
    def parse(cls, text: str) -> TargetRef:
        if not isinstance(text, str) or not text:
            raise HslError(f"bad target reference {text!r}")
        node, sep, anchor = text.partition("#")
        if not node or (sep and not anchor) or "#" in anchor:
            raise HslError(f"bad target reference {text!r}")
        return cls(node, anchor or None)

    def __str__(self) -> str:
        return self.node if self.anchor is None else f"{self.node}#{self.anchor}"


def parse_quantity(value: Any, unit: str, what: str) -> float:
    if not isinstance(value, str):
        raise HslError(f"{what} must be a string ending in {unit!r}, got {value!r}")
    m = _QUANTITY_RE.match(value.strip())
    if m is None or m.group(2) != unit:
        raise HslError(f"{what} must be a nonnegative decimal ending in {unit!r}, got {value!r}")
    return float(m.group(1))


def format_quantity(value: float, unit: str) -> str:
    text = str(int(value)) if float(value).is_integer() else repr(float(value))
    return text + unit


@dataclass(frozen=True)
class SpatialAnchor:
    id: str
    owner: str
    x: float
    y: float
    w: float
    h: float
    attrs: dict = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise HslError(f"anchor {self.owner}#{self.id}: width and height must be positive")


@dataclass(frozen=True)
class TemporalAnchor:
    id: str
    owner: str
    begin: float
    end: float
    attrs: dict = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self) -> None:
        if not self.begin < self.end:
            raise HslError(f"anchor {self.owner}#{self.id}: begin must precede end")


Anchor = Union[SpatialAnchor, TemporalAnchor]


def make_anchor(anchor_id: str, owner: str, attrs: dict) -> Anchor:
    extra = {k: v for k, v in attrs.items() if k not in SPATIAL_KEYS + TEMPORAL_KEYS}
    spatial = [k for k in SPATIAL_KEYS if k in attrs]
    temporal = [k for k in TEMPORAL_KEYS if k in attrs]
    where = f"anchor {owner}#{anchor_id}"
    if spatial and temporal:
        raise HslError(f"{where} mixes spatial and temporal attributes")
    if spatial:
        if len(spatial) != 4:
            raise HslError(f"{where} needs all of x, y, w, h")
        x, y, w, h = (parse_quantity(attrs[k], "px", f"{where}.{k}") for k in SPATIAL_KEYS)
        return SpatialAnchor(anchor_id, owner, x, y, w, h, extra)
    if len(temporal) == 2:
        begin, end = (parse_quantity(attrs[k], "s", f"{where}.{k}") for k in TEMPORAL_KEYS)
        return TemporalAnchor(anchor_id, owner, begin, end, extra)
    raise HslError(f"{where} needs x, y, w, h (spatial) or begin, end (temporal)")


def anchor_attrs(anchor: Anchor) -> dict:
    if isinstance(anchor, SpatialAnchor):
        core = {k: format_quantity(getattr(anchor, k), "px") for k in SPATIAL_KEYS}
    else:
        core = {k: format_quantity(getattr(anchor, k), "s") for k in TEMPORAL_KEYS}
    return {**core, **anchor.attrs}


@dataclass
class Context:
    id: str
    attrs: dict = field(default_factory=dict)
    parent: str | None = None


@dataclass
class Connector:
    id: str
    roles: list[str] = field(default_factory=list)
    attrs: dict = field(default_factory=dict)
    parent: str | None = None


@dataclass
class Node:
    """A concept, data or reference node; ``attrs["type"]`` says which."""

    id: str
    attrs: dict = field(default_factory=dict)
    anchors: dict[str, Anchor] = field(default_factory=dict)
    parent: str | None = None

    @property
    def type(self) -> str:
        return self.attrs.get("type", "")

    @property
    def refer(self) -> TargetRef | None:
        ref = self.attrs.get("refer")
        return TargetRef.parse(ref) if ref is not None else None

    @property
    def is_concept(self) -> bool:
        return self.type == "Concept"

    @property
    def is_reference(self) -> bool:
        return self.type == "Reference"


@dataclass
class Link:
    id: str
    connector: str
    binds: list[tuple[str, TargetRef]] = field(default_factory=list)
    attrs: dict = field(default_factory=dict)
    parent: str | None = None

    def targets(self, role: str) -> list[TargetRef]:
        return [t for r, t in self.binds if r == role]


Entity = Union[Context, Connector, Node, Link]
