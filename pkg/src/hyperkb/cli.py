"""The ``hyperkb`` command line.

Exit status: 0 on success, 1 when the answer is a domain-level negative
(no model, not satisfied, violations found, budget exhausted), 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

from hyperkb.dl.interp_text import format_interpretation, parse_interpretation
from hyperkb.dl.reasoning import (
    DEFAULT_BUDGET, Certificate, NoCountermodelUpTo, Refuted, answer_query, check_certificate,
    check_entailment, find_model, gci_witnesses, query_variables, retrieve_instances,
)
from hyperkb.dl.roles import validate_kb
from hyperkb.dl.semantics import satisfies_kb
from hyperkb.dl.syntax import Gci
from hyperkb.dl.text import format_axiom, parse_axiom, parse_concept, parse_kb, parse_pattern
from hyperkb.errors import BudgetExceeded, HyperKbError
from hyperkb.hk.hsl import parse_hsl
from hyperkb.hyql.engine import eval_hyql
from hyperkb.owl import DEFAULT_NAMESPACE, translate_kb
from hyperkb.rdf.turtle import parse_turtle, serialize_turtle
from hyperkb.service.app import serve
from hyperkb.service.store import DATA_DIR_ENV, KbStore, ServiceConfig
from hyperkb.sparql.engine import eval_select, format_json, format_tsv
from hyperkb.sparql.query import parse_sparql

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _text_or_file(value: str) -> str:
    """A query argument may be the query itself or a path to it."""
    return _read(value) if os.path.isfile(value) else value


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _data_dir(args: argparse.Namespace) -> str:
    directory = args.data_dir or os.environ.get(DATA_DIR_ENV)
    if not directory:
        raise UsageError(f"--data-dir or {DATA_DIR_ENV} is required")
    return directory


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- description logic ---------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    _need(args, "kb")
    report = validate_kb(parse_kb(_read(args.kb)))
    if report.ok:
        _out("VALID")
        return OK
    for v in report:
        _out(str(v))
    return NEGATIVE


def cmd_check_model(args: argparse.Namespace) -> int:
    _need(args, "kb", "interp")
    kb = parse_kb(_read(args.kb))
    result = satisfies_kb(parse_interpretation(_read(args.interp)), kb)
    if result.satisfied:
        _out("SATISFIED")
        return OK
    _out("NOT SATISFIED")
    for ax in result.failing:
        _out(f"  fails: {format_axiom(ax)}")
    return NEGATIVE


def cmd_find_model(args: argparse.Namespace) -> int:
    _need(args, "kb")
    model = find_model(parse_kb(_read(args.kb)), args.bound, args.budget)
    if model is None:
        _out(f"NO MODEL UP TO {args.bound}")
        return NEGATIVE
    _out(format_interpretation(model))
    return OK


def cmd_entail(args: argparse.Namespace) -> int:
    _need(args, "kb", "axiom")
    kb = parse_kb(_read(args.kb))
    ax = parse_axiom(args.axiom, kb.vocabulary)
    if args.certificate is not None:
        interp = parse_interpretation(_read(args.certificate))
        if check_certificate(kb, ax, interp) is Certificate.REFUTES_ENTAILMENT:
            _out("REFUTED")
            if isinstance(ax, Gci):
                _out(f"  witnesses: {', '.join(sorted(gci_witnesses(interp, ax)))}")
            return OK
        _out("NOT REFUTED")
        return NEGATIVE
    verdict = check_entailment(kb, ax, args.bound, args.budget)
    if isinstance(verdict, Refuted):
        _out("REFUTED")
        _out(format_interpretation(verdict.countermodel))
        return OK
    _out(f"NO COUNTERMODEL UP TO {verdict.bound}")
    return NEGATIVE


def cmd_instances(args: argparse.Namespace) -> int:
    _need(args, "kb", "query")
    kb = parse_kb(_read(args.kb))
    text = _text_or_file(args.query)
    if "?" in text:
        pattern = parse_pattern(text, kb.vocabulary)
        _out("\t".join(query_variables(pattern)))
        for row in answer_query(kb, pattern, args.bound, args.budget):
            _out("\t".join(row))
        return OK
    concept = parse_concept(text, kb.vocabulary)
    for name, verdict in retrieve_instances(kb, concept, args.bound, args.budget):
        if isinstance(verdict, NoCountermodelUpTo):
            _out(name)
    return OK


def cmd_dl2owl(args: argparse.Namespace) -> int:
    _need(args, "kb")
    out = translate_kb(parse_kb(_read(args.kb)), args.base_namespace)
    _out(serialize_turtle(out.graph, out.prefix_env))
    return OK


# -- graphs and hyperknowledge -------------------------------------------------------


def cmd_sparql(args: argparse.Namespace) -> int:
    _need(args, "graph", "query")
    graph, env = parse_turtle(_read(args.graph), args.base)
    table = eval_select(graph, parse_sparql(_text_or_file(args.query), dict(env.prefixes)))
    _out(format_json(table, env) if args.format == "json" else format_tsv(table, env))
    return OK


def cmd_hyql(args: argparse.Namespace) -> int:
    _need(args, "base", "query")
    result = eval_hyql(parse_hsl(_read(args.base)), _text_or_file(args.query), args.budget)
    sys.stdout.write(result.format_json() if args.format == "json" else result.format_text())
    return OK


def _store(args: argparse.Namespace) -> KbStore:
    return KbStore(ServiceConfig(
        args.listen, _data_dir(args), args.budget, args.base_namespace,
    ))


def cmd_import(args: argparse.Namespace) -> int:
    if (args.base is None) == (args.graph is None):
        raise UsageError("import takes exactly one of --base (HSL) or --graph (Turtle)")
    store = _store(args)
    if args.base is not None:
        added = store.import_hsl(_read(args.base))
        _out(f"imported {len(added)} entities")
    else:
        _out(f"imported {store.import_ttl(_read(args.graph))} triples")
    return OK


def cmd_export(args: argparse.Namespace) -> int:
    fmt = args.format if args.format in ("hsl", "ttl") else "hsl"
    _out(_store(args).export(fmt))
    return OK


def cmd_serve(args: argparse.Namespace) -> int:
    serve(ServiceConfig(args.listen, _data_dir(args), args.budget, args.base_namespace))
    return OK


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace], int], str]] = {
    "validate": (cmd_validate, "check syntactic restrictions of a knowledge base"),
    "check-model": (cmd_check_model, "does an interpretation satisfy a knowledge base"),
    "find-model": (cmd_find_model, "search for a model up to a domain size"),
    "entail": (cmd_entail, "refute an entailment by countermodel or certificate"),
    "instances": (cmd_instances, "individuals with no countermodel for a concept or pattern"),
    "dl2owl": (cmd_dl2owl, "translate a knowledge base to OWL in Turtle"),
    "sparql": (cmd_sparql, "run a SELECT query over a Turtle graph"),
    "hyql": (cmd_hyql, "run a HyQL query over an HSL document"),
    "import": (cmd_import, "journal an HSL or Turtle document into a data directory"),
    "export": (cmd_export, "print the state of a data directory"),
    "serve": (cmd_serve, "run the REST service"),
}


# "text" is each command's default output
FORMATS = {"sparql": ("text", "tsv", "json"), "hyql": ("text", "json"), "export": ("text", "hsl", "ttl")}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperkb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--kb", help="knowledge base file (.dl)")
        p.add_argument("--interp", help="interpretation file")
        p.add_argument("--axiom", help="axiom text")
        p.add_argument("--certificate", help="interpretation file refuting the axiom")
        p.add_argument("--bound", type=int, default=2, help="largest domain size to search (default 2)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
        p.add_argument("--base", help="HSL file, or base IRI for sparql")
        p.add_argument("--graph", help="Turtle file")
        p.add_argument("--query", help="query text or a file containing it")
        p.add_argument("--format", default="text", help="text, tsv, json, hsl or ttl")
        p.add_argument("--data-dir", help=f"service data directory (default ${DATA_DIR_ENV})")
        p.add_argument("--listen", default="127.0.0.1:8080", help="host:port")
        p.add_argument("--base-namespace", default=DEFAULT_NAMESPACE, help="IRI namespace for DL names")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.bound < 1 or args.budget < 1:
        print("hyperkb: --bound and --budget must be positive", file=sys.stderr)
        return USAGE
    allowed = FORMATS.get(args.command, ("text",))
    if args.format not in allowed:
        print(f"hyperkb: {args.command} supports --format {', '.join(allowed)}", file=sys.stderr)
        return USAGE
    try:
        return COMMANDS[args.command][0](args)
    except BudgetExceeded as exc:
        print(f"hyperkb: {exc}", file=sys.stderr)
        return NEGATIVE
    except (UsageError, HyperKbError, ValueError) as exc:
        print(f"hyperkb: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
