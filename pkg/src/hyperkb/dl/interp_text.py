"""Text format for interpretations.

::

    domain i1 i2 i3 .
    map kubrick = i1 .
    set Director = {i1, i2} .
    rel directs = {(i1,i3), (i2,i3)} .

Names absent from ``set``/``rel`` lines are not mapped; write ``{}`` for an
empty extension.
"""

from __future__ import annotations

import re

from hyperkb.dl.semantics import Interpretation
from hyperkb.errors import InterpretationError, ParseError

_NAME = r"[A-Za-z0-9_][A-Za-z0-9_-]*"
_DOMAIN_RE = re.compile(rf"domain((?:\s+{_NAME})+)\s*\.\Z")
_MAP_RE = re.compile(rf"map\s+({_NAME})\s*=\s*({_NAME})\s*\.\Z")
_SET_RE = re.compile(rf"set\s+({_NAME})\s*=\s*\{{(.*)\}}\s*\.\Z")
_REL_RE = re.compile(rf"rel\s+({_NAME})\s*=\s*\{{(.*)\}}\s*\.\Z")
_PAIR_RE = re.compile(rf"\(\s*({_NAME})\s*,\s*({_NAME})\s*\)")
_NAME_RE = re.compile(rf"{_NAME}\Z")


def parse_interpretation(text: str) -> Interpretation:
    domain: list[str] | None = None
    individuals: dict[str, str] = {}
    concepts: dict[str, frozenset[str]] = {}
    roles: dict[str, frozenset[tuple[str, str]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _DOMAIN_RE.match(line):
            if domain is not None:
                raise ParseError("domain declared twice", lineno, 1)
            domain = m.group(1).split()
        elif m := _MAP_RE.match(line):
            individuals[m.group(1)] = m.group(2)
        elif m := _SET_RE.match(line):
            items = [s.strip() for s in m.group(2).split(",") if s.strip()]
            for item in items:
                if not _NAME_RE.match(item):
                    raise ParseError(f"bad element {item!r}", lineno, raw.find(item) + 1)
            concepts[m.group(1)] = frozenset(items)
        elif m := _REL_RE.match(line):
            body = m.group(2)
            pairs = _PAIR_RE.findall(body)
            if _PAIR_RE.sub("", body).replace(",", "").strip():
                raise ParseError("malformed pair list", lineno, raw.find("{") + 1)
            roles[m.group(1)] = frozenset(pairs)
        else:
            raise ParseError(f"unrecognised statement {line!r}", lineno, 1)
    if domain is None:
        raise ParseError("missing domain statement", 1, 1)
    try:
        return Interpretation(tuple(domain), individuals, concepts, roles)
    except InterpretationError as exc:
        raise ParseError(str(exc)) from exc


def format_interpretation(interp: Interpretation) -> str:
    lines = [f"domain {' '.join(interp.domain)} ."]
    order = {d: i for i, d in enumerate(interp.domain)}
    for name in sorted(interp.individual_map):
        lines.append(f"map {name} = {interp.individual_map[name]} .")
    for name in sorted(interp.concept_map):
        members = sorted(interp.concept_map[name], key=order.__getitem__)
        lines.append(f"set {name} = {{{', '.join(members)}}} .")
    for name in sorted(interp.role_map):
        pairs = sorted(interp.role_map[name], key=lambda p: (order[p[0]], order[p[1]]))
        lines.append(f"rel {name} = {{{', '.join(f'({a},{b})' for a, b in pairs)}}} .")
    return "\n".join(lines) + "\n"
