"""Command line entry point: validate, fragment, neighborhood, nnf, to-sparql, endpoint-diff."""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .conformance import Evaluator, validate
from .endpoint import EndpointError, Mismatch, differential_fragment, load_graph
from .fragments import frag_schema, frag_shapes, schema_request_shapes
from .neighborhood import NeighborhoodBuilder
from .rdf import Graph, RDFSyntaxError, parse_ntriples, serialize_canonical
from .shacl import MalformedShapesGraph, translate_shapes_graph
from .shapes import (
    EMPTY_SCHEMA, HasShape, RecursiveSchemaError, Schema, TargetFormError, check_nonrecursive, nnf,
)
from .sparql import (
    UnsupportedForGeneration, gen_conformance_query, gen_fragment_query, gen_schema_fragment_query,
)
from .syntax import DEFAULT_PREFIXES, ShapeSyntaxError, parse_document, parse_shape, print_shape
from .turtle import parse_turtle

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RECURSIVE = 0, 1, 2, 3

_SHACL_EXT = {".ttl", ".nt"}
_FORMAL_EXT = {".shapes", ".sf"}


class UsageError(Exception):
    pass


@dataclass
class Inputs:
    schema: Schema
    prefixes: dict
    requests: list


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load_data(path: str) -> Graph:
    text = read_text(path)
    if path.endswith(".nt"):
        return parse_ntriples(text)
    return parse_turtle(text)


def shapes_syntax(path: str, flag: Optional[str]) -> str:
    if flag:
        return flag
    ext = Path(path).suffix
    if ext in _SHACL_EXT:
        return "shacl"
    if ext in _FORMAL_EXT:
        return "formal"
    raise UsageError(f"cannot tell the syntax of {path}; pass --syntax shacl or --syntax formal")


def load_shapes(path: Optional[str], flag: Optional[str], arbitrary_targets: bool = False) -> Inputs:
    if path is None:
        return Inputs(EMPTY_SCHEMA, dict(DEFAULT_PREFIXES), [])
    text = read_text(path)
    if shapes_syntax(path, flag) == "shacl":
        sg = parse_ntriples(text) if path.endswith(".nt") else parse_turtle(text)
        inp = Inputs(translate_shapes_graph(sg), dict(DEFAULT_PREFIXES), [])
    else:
        doc = parse_document(text)
        inp = Inputs(doc.schema(arbitrary_targets), doc.prefixes, doc.requests)
    check_nonrecursive(inp.schema)
    return inp


def parse_node(text: str, prefixes: dict):
    if "://" in text and not text.startswith("<"):
        text = f"<{text}>"
    return parse_shape(f"hasValue {text}", prefixes).value


def write_out(text: str, path: Optional[str]) -> None:
    if path and path != "-":
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------------


def cmd_validate(args) -> int:
    g = load_data(args.data)
    inp = load_shapes(args.shapes, args.syntax, args.arbitrary_targets)
    report = validate(inp.schema, g)
    write_out(report.to_json() if args.format == "json" else report.to_text(), args.out)
    return EXIT_OK if report.conforms else EXIT_FAIL


def cmd_fragment(args) -> int:
    g = load_data(args.data)
    inp = load_shapes(args.shapes, args.syntax, args.arbitrary_targets)
    if args.request_shapes:
        doc = parse_document(read_text(args.request_shapes), inp.prefixes)
        if not doc.requests:
            raise UsageError(f"{args.request_shapes} has no request statements")
        result = frag_shapes(g, doc.requests, inp.schema, threads=args.threads)
    elif args.shapes is None:
        raise UsageError("fragment needs --shapes or --request-shapes")
    else:
        result = frag_schema(g, inp.schema, threads=args.threads)
    write_out(result.to_ntriples(), args.out)
    if args.sidecar:
        Path(args.sidecar).write_text(result.sidecar_json(), encoding="utf-8")
    return EXIT_OK


def cmd_neighborhood(args) -> int:
    g = load_data(args.data)
    inp = load_shapes(args.shapes, args.syntax, args.arbitrary_targets)
    node = parse_node(args.node, inp.prefixes)
    name = parse_node(args.shape, inp.prefixes)
    if name not in inp.schema:
        raise UsageError(f"no shape named {args.shape}")
    builder = NeighborhoodBuilder(Evaluator(inp.schema, g))
    write_out(serialize_canonical(builder.of(node, nnf(HasShape(name)))), args.out)
    return EXIT_OK


def cmd_nnf(args) -> int:
    write_out(print_shape(nnf(parse_shape(args.shape_expr))) + "\n", args.out)
    return EXIT_OK


def cmd_to_sparql(args) -> int:
    inp = load_shapes(args.shapes, args.syntax, args.arbitrary_targets)
    shape = None
    if args.shape:
        name = parse_node(args.shape, inp.prefixes)
        if name not in inp.schema:
            raise UsageError(f"no shape named {args.shape}")
        shape = HasShape(name)
    if args.mode == "conformance":
        if shape is None:
            raise UsageError("--mode conformance needs --shape")
        q = gen_conformance_query(shape, inp.schema)
    elif args.request_shapes:
        doc = parse_document(read_text(args.request_shapes), inp.prefixes)
        q = gen_fragment_query(doc.requests, inp.schema)
    elif shape is not None:
        q = gen_fragment_query([shape], inp.schema)
    else:
        q = gen_schema_fragment_query(inp.schema)
    write_out(q.query + "\n", args.out)
    return EXIT_OK


def cmd_endpoint_diff(args) -> int:
    g = load_data(args.data)
    inp = load_shapes(args.shapes, args.syntax, args.arbitrary_targets)
    if args.update_endpoint:
        load_graph(args.update_endpoint, g, args.timeout)
    if args.request_shapes:
        shapes = parse_document(read_text(args.request_shapes), inp.prefixes).requests
    else:
        shapes = schema_request_shapes(inp.schema)
    result = differential_fragment(args.endpoint, g, shapes, inp.schema, args.timeout)
    if isinstance(result, Mismatch):
        sys.stdout.write("Mismatch\n" + result.details() + "\n")
        return EXIT_FAIL
    sys.stdout.write("Equal\n")
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shapefrag", description="Shape fragments of RDF graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, data=True, shapes_required=True):
        if data:
            p.add_argument("--data", required=True, help="data graph (Turtle, or N-Triples if .nt; - for stdin)")
        p.add_argument("--shapes", required=shapes_required, help="shapes file")
        p.add_argument("--syntax", choices=("shacl", "formal"), help="syntax of the shapes file")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument(
            "--arbitrary-targets", action="store_true",
            help="accept any shape as a target in formal-syntax schemas",
        )

    p = sub.add_parser("validate", help="validate a graph against a schema")
    common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fragment", help="extract the schema or request-shape fragment")
    common(p, shapes_required=False)
    p.add_argument("--request-shapes", help="formal-syntax file with request statements")
    p.add_argument("--sidecar", help="write per-node statistics as JSON here")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_fragment)

    p = sub.add_parser("neighborhood", help="neighborhood of one node for one named shape")
    common(p)
    p.add_argument("--node", required=True)
    p.add_argument("--shape", required=True)
    p.set_defaults(func=cmd_neighborhood)

    p = sub.add_parser("nnf", help="print the negation normal form of a shape")
    p.add_argument("--shape-expr", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nnf)

    p = sub.add_parser("to-sparql", help="emit a SPARQL query")
    common(p, data=False)
    p.add_argument("--mode", choices=("fragment", "conformance"), default="fragment")
    p.add_argument("--shape", help="name of a defined shape")
    p.add_argument("--request-shapes")
    p.set_defaults(func=cmd_to_sparql)

    p = sub.add_parser("endpoint-diff", help="compare an endpoint's fragment with the local one")
    common(p)
    p.add_argument("--endpoint", required=True, help="SPARQL query URL")
    p.add_argument("--update-endpoint", help="if given, load --data there first")
    p.add_argument("--request-shapes")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_endpoint_diff)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except RecursiveSchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RECURSIVE
    except (
        UsageError, RDFSyntaxError, ShapeSyntaxError, MalformedShapesGraph, TargetFormError,
        UnsupportedForGeneration, EndpointError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
