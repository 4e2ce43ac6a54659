"""Shape fragments for request shapes and for schemas."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .conformance import Evaluator
from .neighborhood import NeighborhoodBuilder
from .rdf import Graph, serialize_canonical
from .shapes import And, Schema, Shape, constants, nnf, EMPTY_SCHEMA


@dataclass
class FragmentResult:
    fragment: Graph
    per_node: dict = field(default_factory=dict)  # (node, shape index) -> frozenset of triples
    conforming_nodes: set = field(default_factory=set)  # {(node, shape index)}

    def to_ntriples(self) -> str:
        return serialize_canonical(self.fragment)

    def sidecar(self) -> dict:
        nodes = sorted(self.conforming_nodes, key=lambda x: (x[1], x[0].n3()))
        return {
            "conformingNodes": [{"node": n.n3(), "shape": i} for n, i in nodes],
            "tripleCounts": [
                {"node": n.n3(), "shape": i, "triples": len(self.per_node.get((n, i), ()))}
                for n, i in nodes
            ],
            "fragmentSize": len(self.fragment),
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), indent=2, sort_keys=True) + "\n"


def frag_shapes(
    g: Graph, shapes: Sequence[Shape], h: Schema = EMPTY_SCHEMA, threads: int = 1
) -> FragmentResult:
    """Union of the neighborhoods of every node for every request shape.

    Candidate nodes are N(g) plus the constants mentioned in the shapes.
    """
    ev = Evaluator(h, g)
    builder = NeighborhoodBuilder(ev)
    base = set(g.nodes())
    per_node: dict = {}
    conforming: set = set()
    for i, s in enumerate(shapes):
        phi = nnf(s)
        candidates = sorted(base | constants(phi), key=lambda n: n.n3())
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                flags = list(pool.map(lambda v: ev.conforms(v, phi), candidates))
        else:
            flags = [ev.conforms(v, phi) for v in candidates]
        for v, ok in zip(candidates, flags):
            if ok:
                conforming.add((v, i))
                per_node[(v, i)] = builder.of(v, phi)
    triples: set = set()
    for b in per_node.values():
        triples |= b
    return FragmentResult(
        Graph(triples),
        {k: frozenset(v) for k, v in per_node.items()},
        conforming,
    )


def schema_request_shapes(h: Schema) -> list:
    return [And(d.shape, d.target) for d in h]


def frag_schema(g: Graph, h: Schema, threads: int = 1) -> FragmentResult:
    return frag_shapes(g, schema_request_shapes(h), h, threads=threads)
