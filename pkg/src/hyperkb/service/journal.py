"""Append-only NDJSON journal of base mutations.

One JSON object per line, each with a ``seq`` field counting up from 1.
A record is durable once its line, newline included, has been fsynced.
A final line without its newline is a torn write from a crash and is
discarded on open; every complete line must be a valid record.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

from hyperkb.errors import HslError, HyperKbError, JournalCorruptError
from hyperkb.hk.base import HkBase
from hyperkb.hk.hsl import parse_elements, root_children
from hyperkb.rdf.graph import Graph
from hyperkb.rdf.terms import BNode, Triple
from hyperkb.rdf.turtle import PrefixEnv, parse_turtle

log = logging.getLogger(__name__)

JOURNAL_NAME = "journal.ndjson"
OPS = ("add_hsl", "remove", "import_ttl")


@dataclass
class KbState:
    """Everything the journal reconstructs."""

    base: HkBase = field(default_factory=HkBase)
    graph: Graph = field(default_factory=Graph)
    prefixes: PrefixEnv = field(default_factory=PrefixEnv)

    def copy(self) -> KbState:
        return KbState(self.base.copy(), self.graph.copy(), PrefixEnv(dict(self.prefixes.prefixes)))


def fragment_elements(fragment: Any) -> list:
    """Accept one element, a list of elements, or a whole ``["hsl", [...]]`` document."""
    if isinstance(fragment, list) and fragment and fragment[0] == "hsl":
        return root_children(fragment)
    if isinstance(fragment, list) and fragment and isinstance(fragment[0], str):
        return [fragment]
    if isinstance(fragment, list):
        return fragment
    raise HslError(f"an HSL fragment must be a JSON array, got {type(fragment).__name__}")


def apply_record(state: KbState, record: dict) -> Any:
    """Apply one record in place; returns the operation's result."""
    op = record.get("op")
    if op == "add_hsl":
        added = state.base.add_entities(parse_elements(fragment_elements(record["fragment"])))
        return [e.id for e in added]
    if op == "remove":
        return state.base.remove_entity(record["id"], cascade=record.get("cascade", True))
    if op == "import_ttl":
        graph, env = parse_turtle(record["text"], record.get("base"))
        tag = f"j{record['seq']}_"
        for t in graph:
            state.graph.add(Triple(*(BNode(tag + x.label) if isinstance(x, BNode) else x for x in t)))
        state.prefixes.prefixes.update(env.prefixes)
        return len(graph)
    raise ValueError(f"unknown journal operation {op!r}")


class Journal:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.path = self.directory / JOURNAL_NAME
        self.last_seq = 0

    def records(self) -> Iterator[dict]:
        """Complete records in order, validated for shape and sequence."""
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        lines = data.split(b"\n")
        if lines and lines[-1]:
            log.warning("discarding torn final journal line (%d bytes)", len(lines[-1]))
        expected = 1
        for raw in lines[:-1]:
            try:
                record = json.loads(raw)
            except (json.JSONDecodeError, UnicodeDecodeError):
                raise JournalCorruptError("unparseable journal record", expected - 1) from None
            if not isinstance(record, dict) or record.get("op") not in OPS:
                raise JournalCorruptError("malformed journal record", expected - 1)
            if record.get("seq") != expected:
                raise JournalCorruptError(
                    f"sequence gap: expected {expected}, found {record.get('seq')!r}", expected - 1
                )
            yield record
            expected += 1

    def replay(self) -> KbState:
        state = KbState()
        self.last_seq = 0
        for record in self.records():
            try:
                apply_record(state, record)
            except (HyperKbError, KeyError, ValueError) as exc:
                raise JournalCorruptError(f"record {record['seq']} does not apply: {exc}", self.last_seq) from None
            self.last_seq = record["seq"]
        return state

    def drop_torn_tail(self) -> None:
        """Cut a partial final line so the next append starts on a boundary."""
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        keep = data.rfind(b"\n") + 1
        if keep != len(data):
            with open(self.path, "r+b") as fh:
                fh.truncate(keep)
                os.fsync(fh.fileno())

    def append(self, record: dict) -> dict:
        """Stamp ``record`` with the next sequence number and make it durable."""
        record = {"seq": self.last_seq + 1, **record}
        line = json.dumps(record, ensure_ascii=False) + "\n"
        self.directory.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())
        self.last_seq = record["seq"]
        return record


def journal_replay(directory: str | os.PathLike) -> HkBase:
    return Journal(directory).replay().base
