"""REST front end over :class:`KbStore`."""

from __future__ import annotations

import json
from typing import Any

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from hyperkb.errors import (
    BudgetExceeded, DuplicateIdError, HslError, HyperKbError, IntegrityError, ParseError,
    QueryError, UnknownIdError,
)
from hyperkb.service.store import KbStore, ServiceConfig


class BadRequest(HyperKbError):
    """The request envelope itself is malformed, whatever it carries."""


def _error(status: int, exc: Exception, **extra: Any) -> JSONResponse:
    return JSONResponse({"error": str(exc), **extra}, status_code=status)


async def _json_body(request: Request) -> Any:
    raw = await request.body()
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise BadRequest(f"request body is not JSON: {exc}") from None


def _field(body: Any, name: str, kind: type) -> Any:
    if not isinstance(body, dict) or not isinstance(body.get(name), kind):
        raise BadRequest(f"request body needs a {kind.__name__} field {name!r}")
    return body[name]


def create_app(store: KbStore) -> FastAPI:
    app = FastAPI(title="hyperkb")
    app.state.store = store

    @app.exception_handler(HyperKbError)
    async def _domain_error(request: Request, exc: HyperKbError) -> JSONResponse:
        if isinstance(exc, UnknownIdError):
            return _error(404, exc)
        if isinstance(exc, (DuplicateIdError, IntegrityError)):
            return _error(409, exc)
        if isinstance(exc, BudgetExceeded):
            return _error(503, exc, needed=exc.needed, budget=exc.budget)
        if request.url.path == "/query" and isinstance(exc, (ParseError, QueryError)):
            extra = exc.position() if isinstance(exc, ParseError) else {}
            return _error(422, exc, **extra)
        return _error(400, exc)

    @app.post("/entities", status_code=201)
    async def add_entities(request: Request) -> dict:
        return {"added": store.add_hsl(await _json_body(request))}

    @app.get("/entities/{ident}")
    def get_entity(ident: str) -> dict:
        return store.get(ident)

    @app.delete("/entities/{ident}")
    def delete_entity(ident: str, cascade: bool = True) -> dict:
        return {"removed": ident, "cascade": store.remove(ident, cascade)}

    @app.post("/query")
    async def query(request: Request) -> dict:
        body = await _json_body(request)
        lang = _field(body, "lang", str)
        if lang not in ("hyql", "sparql"):
            raise QueryError(f"unknown query language {lang!r}")
        return store.query(lang, _field(body, "text", str))

    @app.post("/import")
    async def import_(request: Request) -> dict:
        body = await _json_body(request)
        fmt, text = _field(body, "format", str), _field(body, "text", str)
        if fmt == "hsl":
            return {"added": store.import_hsl(text)}
        if fmt == "ttl":
            return {"triples": store.import_ttl(text, body.get("base"))}
        raise HslError(f"unknown import format {fmt!r}")

    @app.get("/export")
    def export(format: str = "hsl") -> PlainTextResponse:
        if format not in ("hsl", "ttl"):
            raise HslError(f"unknown export format {format!r}")
        media = "application/json" if format == "hsl" else "text/turtle"
        return PlainTextResponse(store.export(format), media_type=media)

    return app


def serve(config: ServiceConfig) -> None:
    uvicorn.run(create_app(KbStore(config)), host=config.host, port=config.port)
