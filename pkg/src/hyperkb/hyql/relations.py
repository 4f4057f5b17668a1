"""Spatial predicates on rectangles and Allen-style predicates on intervals.

Rectangles use image coordinates: ``y`` grows downward.  Intervals are
half-open ``[begin, end)``.
"""

from __future__ import annotations

from typing import Callable

from hyperkb.errors import QueryError
from hyperkb.hk.model import Anchor, SpatialAnchor, TemporalAnchor

TIME_OPS = ("before", "after", "meets", "overlaps", "start", "during", "finishes", "equals")
SPACE_OPS = ("side", "above", "bellow", "collides", "contains")
SPACE_ALIASES = {"below": "bellow"}


def _above(a: SpatialAnchor, b: SpatialAnchor) -> bool:
    return a.y + a.h <= b.y


def _side(a: SpatialAnchor, b: SpatialAnchor) -> bool:
    apart = a.x + a.w <= b.x or b.x + b.w <= a.x
    return apart and a.y < b.y + b.h and b.y < a.y + a.h


def _collides(a: SpatialAnchor, b: SpatialAnchor) -> bool:
    width = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    height = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    return width > 0 and height > 0


def _contains(a: SpatialAnchor, b: SpatialAnchor) -> bool:
    return a.x <= b.x and a.y <= b.y and b.x + b.w <= a.x + a.w and b.y + b.h <= a.y + a.h


SPATIAL: dict[str, Callable[[SpatialAnchor, SpatialAnchor], bool]] = {
    "side": _side,
    "above": _above,
    "bellow": lambda a, b: _above(b, a),
    "collides": _collides,
    "contains": _contains,
}

TEMPORAL: dict[str, Callable[[TemporalAnchor, TemporalAnchor], bool]] = {
    "before": lambda a, b: a.end < b.begin,
    "after": lambda a, b: b.end < a.begin,
    "meets": lambda a, b: a.end == b.begin,
    "overlaps": lambda a, b: a.begin < b.begin < a.end < b.end,
    "start": lambda a, b: a.begin == b.begin and a.end < b.end,
    "during": lambda a, b: b.begin < a.begin and a.end < b.end,
    "finishes": lambda a, b: a.end == b.end and a.begin > b.begin,
    "equals": lambda a, b: a.begin == b.begin and a.end == b.end,
}


def spatial_relate(a: Anchor, b: Anchor, op: str) -> bool:
    op = SPACE_ALIASES.get(op, op)
    if op not in SPATIAL:
        raise QueryError(f"unknown spatial operator {op!r}")
    if not (isinstance(a, SpatialAnchor) and isinstance(b, SpatialAnchor)):
        raise QueryError(f"{op!r} needs two spatial anchors")
    if a.owner != b.owner:
        raise QueryError(f"{op!r} compares anchors of one node, got {a.owner!r} and {b.owner!r}")
    return SPATIAL[op](a, b)


def temporal_relate(a: Anchor, b: Anchor, op: str) -> bool:
    if op not in TEMPORAL:
        raise QueryError(f"unknown temporal operator {op!r}")
    if not (isinstance(a, TemporalAnchor) and isinstance(b, TemporalAnchor)):
        raise QueryError(f"{op!r} needs two temporal anchors")
    return TEMPORAL[op](a, b)
