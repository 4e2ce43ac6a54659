import os
import random

import pytest
from hypothesis import given, settings
from grammar import check_query

from shapefrag.conformance import Evaluator
from shapefrag.endpoint import _fold, _fold_lang, differential_fragment, execute_select, load_graph
from shapefrag.generators import Vocabulary, random_graph, random_path, random_schema, random_shape
from shapefrag.paths import Id, Inverse, Prop, Seq, Star
from shapefrag.rdf import BNode, Graph, Triple
from shapefrag.shacl import translate_shapes_graph
from shapefrag.shapes import (
    TOP, And, Closed, Eq, ForAll, GeqN, HasValue, LeqN, Not, Schema, ShapeDefinition,
)
from shapefrag.sparql import (
    UnsupportedForGeneration, gen_conformance_query, gen_fragment_query, gen_neighborhood_query,
    gen_path_query, gen_schema_fragment_query,
)
from shapefrag.syntax import parse_schema

from conftest import DATA, ex, load
from strategies import paths, shapes

GOLDEN = DATA.parent / "tests" / "golden"
p, q, r, c = ex("p"), ex("q"), ex("r"), ex("c")

GOLDEN_CASES = {
    "path_prop": lambda: gen_path_query(Prop(p)),
    "path_inverse": lambda: gen_path_query(Inverse(Prop(p))),
    "path_star_seq": lambda: gen_path_query(Star(Seq(Prop(q), Prop(r)))),
    "nbhd_and": lambda: gen_neighborhood_query(And(GeqN(1, Prop(p), TOP), GeqN(1, Prop(q), TOP))),
    "nbhd_not_closed": lambda: gen_neighborhood_query(Not(Closed(frozenset({p, q})))),
    "nbhd_eq_id": lambda: gen_neighborhood_query(Eq(Id, p)),
    "fragment_forall": lambda: gen_fragment_query([ForAll(Prop(p), GeqN(1, Prop(q), HasValue(c)))]),
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name):
    text = str(GOLDEN_CASES[name]())
    path = GOLDEN / f"{name}.rq"
    if os.environ.get("SHAPEFRAG_REGEN_GOLDEN"):
        path.write_text(text + "\n", encoding="utf-8")
    assert text + "\n" == path.read_text(encoding="utf-8")


def test_property_template_exact():
    assert str(gen_path_query(Prop(p))) == (
        "SELECT (?s AS ?t) ?s (<http://example.org/p> AS ?p) ?o (?o AS ?h) "
        "WHERE { ?s <http://example.org/p> ?o. }"
    )


def test_has_value_exact():
    assert str(gen_conformance_query(HasValue(c))) == (
        "SELECT ?v WHERE { { ?v ?p1 ?o1 } UNION { ?s2 ?p2 ?v } FILTER (?v = <http://example.org/c>) }"
    )


def test_inverse_swaps_tail_and_head():
    text = str(gen_path_query(Inverse(Prop(p))))
    assert text.startswith("SELECT (?h2 AS ?t) ?s ?p ?o (?t1 AS ?h)")


def test_star_uses_reachability_sandwich():
    text = str(gen_path_query(Star(Seq(Prop(q), Prop(r)))))
    star = "(<http://example.org/q>/<http://example.org/r>)*"
    assert f"?t {star} ?x1 ." in text and f"?x2 {star} ?h ." in text


def test_leq_zero_uses_not_exists():
    assert "FILTER NOT EXISTS { ?v <http://example.org/p> ?y1 }" in str(gen_conformance_query(LeqN(0, Prop(p), TOP)))


def test_not_closed_filters_allowed_properties():
    text = str(gen_neighborhood_query(Not(Closed(frozenset({p})))))
    assert "FILTER (?p NOT IN (<http://example.org/p>))" in text


def test_eq_id_selects_self_loops():
    assert "?v <http://example.org/p> ?v" in str(gen_neighborhood_query(Eq(Id, p)))


def test_empty_request_list():
    qt = gen_fragment_query([])
    assert "VALUES (?s ?p ?o) { }" in qt.query
    assert qt.variables == ("s", "p", "o") and qt.role == "fragmentQuery"


def test_always_empty_neighborhood():
    assert "VALUES" in gen_neighborhood_query(HasValue(c)).query


def test_blank_node_constants_are_rejected():
    with pytest.raises(UnsupportedForGeneration):
        gen_conformance_query(HasValue(BNode("b")))


def test_output_is_deterministic():
    s = ForAll(Prop(p), GeqN(2, Seq(Prop(q), Star(Prop(r))), Not(HasValue(c))))
    assert gen_fragment_query([s]).query == gen_fragment_query([s]).query


# the rdflib grammar is slow on deeply nested queries
@settings(max_examples=40)
@given(shapes)
def test_generated_queries_parse(s):
    for qt in (gen_conformance_query(s), gen_neighborhood_query(s), gen_fragment_query([s])):
        check_query(qt.query)


@given(paths)
def test_path_queries_parse(e):
    check_query(gen_path_query(e).query)


def test_schema_queries_parse():
    rng = random.Random(8)
    voc = Vocabulary()
    for _ in range(15):
        h = random_schema(rng, voc, size=3, depth=2)
        check_query(gen_schema_fragment_query(h).query)
    check_query(gen_schema_fragment_query(translate_shapes_graph(load("person_shapes.ttl"))).query)


def test_grammar_check_rejects_bad_queries():
    for bad in ("SELECT ?s WHERE { ?s ?p }", "SELECT ?s WHERE { { ?s ?p ?o }", "SELEC ?s WHERE { }"):
        with pytest.raises(Exception):
            check_query(bad)


def test_golden_queries_parse():
    for f in sorted(GOLDEN.glob("*.rq")):
        check_query(f.read_text(encoding="utf-8"))


# ---- against a live endpoint -------------------------------------------------

def example_instances():
    h_authors = parse_schema((DATA / "authors.shapes").read_text(), arbitrary_targets=True)
    workshop_h = translate_shapes_graph(load("workshop_shapes.ttl"))
    return [
        ("authors", load("authors.ttl"), h_authors),
        ("leq zero", Graph([Triple(ex("a"), p, ex("b"))]),
         Schema((ShapeDefinition(ex("s"), LeqN(0, Prop(p), TOP), HasValue(ex("a"))),))),
        ("workshop", load("workshop.ttl"), workshop_h),
        ("person", load("person.ttl"), translate_shapes_graph(load("person_shapes.ttl"))),
    ]


def _requests(h):
    return [And(d.shape, d.target) for d in h]


@pytest.mark.parametrize("label, g, h", example_instances(), ids=lambda v: v if isinstance(v, str) else "")
def test_examples_against_endpoint(sparql_endpoint, label, g, h):
    query_url, update_url = sparql_endpoint
    load_graph(update_url, g)
    result = differential_fragment(query_url, g, _requests(h), h)
    assert result, result.details()


def test_random_against_endpoint(sparql_endpoint):
    query_url, update_url = sparql_endpoint
    rng = random.Random(21)
    voc = Vocabulary()
    for _ in range(60):
        g = random_graph(rng, voc)
        h = random_schema(rng, voc, size=2, depth=2)
        s = random_shape(rng, voc, depth=3, names=tuple(d.name for d in h))
        load_graph(update_url, g)
        result = differential_fragment(query_url, g, [s], h)
        assert result, (s, result.details())
        rows = execute_select(query_url, gen_conformance_query(s, h))
        remote = {row["v"] for row in rows.rows}
        ev = Evaluator(h, g)
        assert remote == {_fold_lang(v) for v in g.nodes() if ev.conforms(v, s)}, s


def test_random_paths_against_endpoint(sparql_endpoint):
    from oracles import nfa_path_graph

    query_url, update_url = sparql_endpoint
    rng = random.Random(22)
    voc = Vocabulary()
    for _ in range(40):
        g = random_graph(rng, voc)
        e = random_path(rng, voc, depth=3)
        load_graph(update_url, g)
        rows = execute_select(query_url, gen_path_query(e)).rows
        got = {}
        for row in rows:
            if "s" in row:
                got.setdefault((row["t"], row["h"]), set()).add(Triple(row["s"], row["p"], row["o"]))
        # endpoints may lowercase language tags, so map heads and tails back to graph nodes
        back = {_fold_lang(n): n for n in g.nodes()}
        for (a, b), triples in got.items():
            a, b = back[a], back[b]
            want = {_fold(t) for t in nfa_path_graph(e, g, a, b)}
            assert {_fold(t) for t in triples} == want, (e, a, b)
