import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from shapefrag.endpoint import (
    BindingSet, EndpointTimeout, HTTPStatusError, MalformedResults, Mismatch, NetworkError,
    SparqlClient, differential_fragment, execute_select, load_graph, parse_results, parse_term,
    rows_to_triples,
)
from shapefrag.paths import Prop
from shapefrag.rdf import XSD, XSD_STRING, BNode, Graph, IRI, Literal, Triple
from shapefrag.shapes import TOP, GeqN, LeqN
from shapefrag.syntax import parse_schema

from conftest import DATA, ex, load

G_AUTHORS = load("authors.ttl")
H_AUTHORS = parse_schema((DATA / "authors.shapes").read_text(), arbitrary_targets=True)


class TestParsing:
    def test_terms(self):
        assert parse_term({"type": "uri", "value": "http://x/"}) == IRI("http://x/")
        assert parse_term({"type": "bnode", "value": "b0"}) == BNode("b0")
        assert parse_term({"type": "literal", "value": "a"}) == Literal("a", XSD_STRING)
        assert parse_term({"type": "literal", "value": "a", "xml:lang": "en"}) == Literal("a", lang="en")
        assert parse_term({"type": "typed-literal", "value": "1", "datatype": XSD + "integer"}) == Literal(
            "1", XSD + "integer"
        )

    @pytest.mark.parametrize("bad", [{}, {"type": "uri"}, {"type": "triple", "value": "x"}, "uri"])
    def test_bad_terms(self, bad):
        with pytest.raises(MalformedResults):
            parse_term(bad)

    def test_results_document(self):
        doc = {
            "head": {"vars": ["s", "p", "o"]},
            "results": {"bindings": [
                {"s": {"type": "uri", "value": "http://x/a"}, "p": {"type": "uri", "value": "http://x/p"},
                 "o": {"type": "literal", "value": "v", "xml:lang": "EN"}},
                {"s": {"type": "uri", "value": "http://x/a"}},
            ]},
        }
        bs = parse_results(doc)
        assert bs.variables == ["s", "p", "o"] and len(bs) == 2
        assert "p" not in bs.rows[1]
        # the unbound row is dropped and the language tag folded
        assert rows_to_triples(bs) == {Triple(IRI("http://x/a"), IRI("http://x/p"), Literal("v", lang="en"))}

    @pytest.mark.parametrize("bad", [None, {}, {"head": {"vars": []}}, {"head": {"vars": []}, "results": {"bindings": [1]}}])
    def test_malformed_documents(self, bad):
        with pytest.raises(MalformedResults):
            parse_results(bad)

    def test_row_that_is_not_a_triple(self):
        bs = BindingSet(["s", "p", "o"], [{"s": Literal("x"), "p": IRI("http://x/p"), "o": IRI("http://x/o")}])
        with pytest.raises(MalformedResults):
            rows_to_triples(bs)


def test_mismatch_details():
    t1, t2 = Triple(ex("a"), ex("p"), ex("b")), Triple(ex("a"), ex("q"), ex("b"))
    m = Mismatch(frozenset({t1}), frozenset({t2}))
    assert not m
    assert m.details() == f"missing {t1.n3()}\nunexpected {t2.n3()}"


# ---- misbehaving servers -----------------------------------------------------

class _Canned(BaseHTTPRequestHandler):
    def log_message(self, fmt, *args):
        pass

    def do_POST(self):
        self.rfile.read(int(self.headers.get("Content-Length") or 0))
        mode = self.server.mode
        if mode == "slow":
            time.sleep(1.0)
        status, body = {"slow": (200, b"{}"), "notjson": (200, b"<html/>"), "error": (503, b"busy")}[mode]
        self.server.hits += 1
        self.send_response(status)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture
def canned():
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), _Canned)
    httpd.hits = 0
    t = threading.Thread(target=httpd.serve_forever, daemon=True)
    t.start()
    yield httpd, f"http://127.0.0.1:{httpd.server_address[1]}/sparql"
    httpd.shutdown()
    httpd.server_close()


def test_timeout(canned):
    httpd, url = canned
    httpd.mode = "slow"
    with pytest.raises(EndpointTimeout):
        SparqlClient(url, timeout=0.2, retries=0).select("SELECT * WHERE { }")


def test_non_json_body(canned):
    httpd, url = canned
    httpd.mode = "notjson"
    with pytest.raises(MalformedResults):
        execute_select(url, "SELECT * WHERE { }")


def test_server_error_is_retried_then_raised(canned):
    httpd, url = canned
    httpd.mode = "error"
    with pytest.raises(HTTPStatusError) as info:
        SparqlClient(url, retries=2).select("SELECT * WHERE { }")
    assert info.value.status == 503
    assert httpd.hits == 3


def test_unreachable_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    with pytest.raises(NetworkError):
        execute_select(f"http://127.0.0.1:{port}/sparql", "SELECT * WHERE { }", timeout=2)


# ---- against a live endpoint -------------------------------------------------

def test_trivial_values_query(sparql_endpoint):
    query_url, _ = sparql_endpoint
    bs = execute_select(query_url, "SELECT ?v WHERE { VALUES ?v { <http://example.org/a> } }")
    assert bs.variables == ["v"]
    assert bs.rows == [{"v": ex("a")}]


def test_bad_query_is_http_400(sparql_endpoint):
    query_url, _ = sparql_endpoint
    with pytest.raises(HTTPStatusError) as info:
        execute_select(query_url, "SELECT WHERE {")
    assert info.value.status == 400


def test_authors_equal(sparql_endpoint):
    query_url, update_url = sparql_endpoint
    load_graph(update_url, G_AUTHORS)
    shapes = [GeqN(1, Prop(ex("auth")), TOP)]
    assert differential_fragment(query_url, G_AUTHORS, shapes)
    rows = execute_select(query_url, "SELECT (COUNT(*) AS ?n) WHERE { ?s ?p ?o }").rows
    assert int(rows[0]["n"].lexical) == len(G_AUTHORS)


def test_leq_zero_equal_and_empty(sparql_endpoint):
    query_url, update_url = sparql_endpoint
    g = Graph([Triple(ex("a"), ex("p"), ex("b"))])
    load_graph(update_url, g)
    assert differential_fragment(query_url, g, [LeqN(0, Prop(ex("p")), TOP)])


def test_corrupted_query_is_a_mismatch(sparql_endpoint):
    query_url, update_url = sparql_endpoint
    load_graph(update_url, G_AUTHORS)
    shapes = [GeqN(1, Prop(ex("auth")), TOP)]
    wrong = "SELECT ?s ?p ?o WHERE { ?s ?p ?o }"
    result = differential_fragment(query_url, G_AUTHORS, shapes, query=wrong)
    assert isinstance(result, Mismatch)
    assert not result.missing and result.unexpected
