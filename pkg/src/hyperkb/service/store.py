"""Journaled, lock-protected state shared by the REST service."""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator

from hyperkb.dl.reasoning import DEFAULT_BUDGET
from hyperkb.errors import QueryError
from hyperkb.hk.hsl import load_json, serialize_hsl
from hyperkb.hk.model import Anchor, Connector, Context, Entity, Link, Node, anchor_attrs
from hyperkb.hyql.engine import eval_hyql
from hyperkb.owl import DEFAULT_NAMESPACE
from hyperkb.rdf.turtle import PrefixEnv, serialize_turtle
from hyperkb.service.journal import Journal, KbState, apply_record
from hyperkb.sparql.engine import eval_select, table_to_json
from hyperkb.sparql.query import parse_sparql

DATA_DIR_ENV = "HYPERKB_DATA_DIR"


class RWLock:
    """Many readers or one writer; a waiting writer blocks new readers."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False
        self._waiting_writers = 0

    @contextmanager
    def read(self) -> Iterator[None]:
        with self._cond:
            while self._writer or self._waiting_writers:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if not self._readers:
                    self._cond.notify_all()

    @contextmanager
    def write(self) -> Iterator[None]:
        with self._cond:
            self._waiting_writers += 1
            while self._writer or self._readers:
                self._cond.wait()
            self._waiting_writers -= 1
            self._writer = True
        try:
            yield
        finally:
            with self._cond:
                self._writer = False
                self._cond.notify_all()


@dataclass
class ServiceConfig:
    listen: str = "127.0.0.1:8080"
    data_dir: str = "hyperkb-data"
    budget: int = DEFAULT_BUDGET
    base_namespace: str = DEFAULT_NAMESPACE

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        host, sep, port = self.listen.rpartition(":")
        if not sep or not host or not port.isdigit():
            raise ValueError(f"listen address must be host:port, got {self.listen!r}")
        Path(self.data_dir).mkdir(parents=True, exist_ok=True)
        if not os.access(self.data_dir, os.W_OK):
            raise ValueError(f"data directory {self.data_dir!r} is not writable")

    @property
    def host(self) -> str:
        return self.listen.rpartition(":")[0]

    @property
    def port(self) -> int:
        return int(self.listen.rpartition(":")[2])


def entity_to_json(entity: Entity) -> dict:
    out: dict[str, Any] = {"id": entity.id, "parent": entity.parent, "attrs": dict(entity.attrs)}
    if isinstance(entity, Node):
        out.update(tag="node", type=entity.type, anchors=[_anchor_json(a) for a in entity.anchors.values()])
    elif isinstance(entity, Link):
        out.update(tag="link", connector=entity.connector, binds=[[r, str(t)] for r, t in entity.binds])
    elif isinstance(entity, Connector):
        out.update(tag="connector", roles=list(entity.roles))
    elif isinstance(entity, Context):
        out.update(tag="context")
    return out


def _anchor_json(a: Anchor) -> dict:
    return {"id": a.id, "attrs": anchor_attrs(a)}


class KbStore:
    """The live state: replayed from the journal, then mutated write-ahead."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.journal = Journal(config.data_dir)
        self.state = self.journal.replay()
        self.journal.drop_torn_tail()
        self.lock = RWLock()

    def _commit(self, record: dict) -> Any:
        with self.lock.write():
            trial = self.state.copy()
            # stamp a provisional seq so import_ttl blank-node tags match replay
            result = apply_record(trial, {"seq": self.journal.last_seq + 1, **record})
            self.journal.append(record)
            self.state = trial
            return result

    def add_hsl(self, fragment: Any) -> list[str]:
        return self._commit({"op": "add_hsl", "fragment": fragment})

    def remove(self, ident: str, cascade: bool = True) -> list[str]:
        return self._commit({"op": "remove", "id": ident, "cascade": cascade})

    def import_ttl(self, text: str, base: str | None = None) -> int:
        record = {"op": "import_ttl", "text": text}
        if base is not None:
            record["base"] = base
        return self._commit(record)

    def import_hsl(self, text: str) -> list[str]:
        return self.add_hsl(load_json(text))

    def get(self, ident: str) -> dict:
        with self.lock.read():
            return entity_to_json(self.state.base.get_entity(ident))

    def export(self, fmt: str = "hsl") -> str:
        with self.lock.read():
            if fmt == "hsl":
                return serialize_hsl(self.state.base)
            if fmt == "ttl":
                return serialize_turtle(self.state.graph, self.state.prefixes)
        raise QueryError(f"unknown export format {fmt!r}")

    def query(self, lang: str, text: str) -> dict:
        with self.lock.read():
            state: KbState = self.state
            if lang == "hyql":
                return eval_hyql(state.base, text, budget=self.config.budget).to_json()
            if lang == "sparql":
                query = parse_sparql(text, dict(state.prefixes.prefixes))
                return table_to_json(eval_select(state.graph, query), PrefixEnv(dict(state.prefixes.prefixes)))
        raise QueryError(f"unknown query language {lang!r}")
