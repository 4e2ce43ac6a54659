"""SPARQL protocol client and differential checks against the in-memory engine."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import requests

from .fragments import frag_shapes
from .rdf import XSD_STRING, BNode, Graph, IRI, Literal, Node, Triple, serialize_canonical
from .shapes import EMPTY_SCHEMA, Schema, Shape
from .sparql import QueryText, gen_fragment_query

log = logging.getLogger(__name__)

RESULTS_JSON = "application/sparql-results+json"


class EndpointError(Exception):
    pass


class NetworkError(EndpointError):
    pass


class EndpointTimeout(EndpointError):
    pass


class HTTPStatusError(EndpointError):
    def __init__(self, status: int, body: str):
        super().__init__(f"endpoint answered HTTP {status}: {body[:200]}")
        self.status = status
        self.body = body


class MalformedResults(EndpointError):
    pass


@dataclass
class BindingSet:
    variables: list
    rows: list = field(default_factory=list)  # dicts var -> Node; unbound vars absent

    def __len__(self):
        return len(self.rows)


def parse_term(obj: dict) -> Node:
    try:
        kind, value = obj["type"], obj["value"]
    except (KeyError, TypeError):
        raise MalformedResults(f"binding without type/value: {obj!r}") from None
    if kind == "uri":
        return IRI(value)
    if kind == "bnode":
        return BNode(value)
    if kind in ("literal", "typed-literal"):
        lang = obj.get("xml:lang")
        if lang:
            return Literal(value, lang=lang)
        return Literal(value, obj.get("datatype", XSD_STRING))
    raise MalformedResults(f"unknown term type {kind!r}")


def parse_results(doc) -> BindingSet:
    try:
        variables = list(doc["head"]["vars"])
        raw = doc["results"]["bindings"]
    except (KeyError, TypeError):
        raise MalformedResults("not a SPARQL JSON results document") from None
    rows = []
    for b in raw:
        if not isinstance(b, dict):
            raise MalformedResults(f"binding row is not an object: {b!r}")
        rows.append({k: parse_term(v) for k, v in b.items()})
    return BindingSet(variables, rows)


class SparqlClient:
    """One HTTP session; requests are issued one at a time."""

    def __init__(self, endpoint: str, timeout: float = 30.0, retries: int = 1):
        self.endpoint = endpoint
        self.timeout = timeout
        self.retries = retries
        self.session = requests.Session()

    def _post(self, data: dict, accept: Optional[str]) -> requests.Response:
        headers = {"Accept": accept} if accept else {}
        last: Exception = EndpointError("no attempt made")
        for attempt in range(self.retries + 1):
            try:
                resp = self.session.post(self.endpoint, data=data, headers=headers, timeout=self.timeout)
            except requests.Timeout as e:
                last = EndpointTimeout(f"no answer within {self.timeout}s from {self.endpoint}")
                last.__cause__ = e
            except requests.RequestException as e:
                last = NetworkError(f"cannot reach {self.endpoint}: {e}")
                last.__cause__ = e
            else:
                if resp.status_code < 500 or attempt == self.retries:
                    return resp
                last = HTTPStatusError(resp.status_code, resp.text)
            log.debug("attempt %d on %s failed: %s", attempt + 1, self.endpoint, last)
        raise last

    def select(self, query: Union[str, QueryText]) -> BindingSet:
        resp = self._post({"query": str(query)}, RESULTS_JSON)
        if resp.status_code != 200:
            raise HTTPStatusError(resp.status_code, resp.text)
        try:
            doc = resp.json()
        except ValueError:
            raise MalformedResults("response body is not JSON") from None
        return parse_results(doc)

    def update(self, text: str) -> None:
        resp = self._post({"update": text}, None)
        if resp.status_code not in (200, 204):
            raise HTTPStatusError(resp.status_code, resp.text)


def execute_select(endpoint: str, q: Union[str, QueryText], timeout: float = 30.0) -> BindingSet:
    return SparqlClient(endpoint, timeout).select(q)


def load_graph(update_endpoint: str, g: Graph, timeout: float = 30.0) -> None:
    """Replace the endpoint's default graph with ``g`` through SPARQL Update."""
    body = serialize_canonical(g)
    SparqlClient(update_endpoint, timeout).update(f"CLEAR DEFAULT ;\nINSERT DATA {{\n{body}}}")


def _fold_lang(n: Node) -> Node:
    # language tags are case-insensitive and endpoints may normalize them
    if isinstance(n, Literal) and n.lang is not None:
        return Literal(n.lexical, lang=n.lang.lower())
    return n


def _fold(t: Triple) -> Triple:
    return Triple(_fold_lang(t.s), t.p, _fold_lang(t.o))


def rows_to_triples(bs: BindingSet) -> set:
    """Rows with ?s, ?p and ?o all bound, as a set of triples."""
    out = set()
    for row in bs.rows:
        s, p, o = row.get("s"), row.get("p"), row.get("o")
        if s is None or p is None or o is None:
            continue
        if not isinstance(p, IRI) or isinstance(s, Literal):
            raise MalformedResults(f"row does not form a triple: {row!r}")
        out.add(_fold(Triple(s, p, o)))
    return out


class Equal:
    def __bool__(self):
        return True

    def __repr__(self):
        return "Equal"


@dataclass
class Mismatch:
    missing: frozenset  # in the local fragment, not returned by the endpoint
    unexpected: frozenset  # returned by the endpoint, not in the local fragment

    def __bool__(self):
        return False

    def details(self) -> str:
        lines = [f"missing {t.n3()}" for t in sorted(self.missing, key=Triple.n3)]
        lines += [f"unexpected {t.n3()}" for t in sorted(self.unexpected, key=Triple.n3)]
        return "\n".join(lines)


def differential_fragment(
    endpoint: str,
    data: Graph,
    shapes: Sequence[Shape],
    h: Schema = EMPTY_SCHEMA,
    timeout: float = 30.0,
    query: Optional[Union[str, QueryText]] = None,
) -> Union[Equal, Mismatch]:
    """Compare the endpoint's answer to the fragment query with the local fragment.

    ``data`` must already be the endpoint's default graph.
    """
    q = query if query is not None else gen_fragment_query(shapes, h)
    remote = rows_to_triples(execute_select(endpoint, q, timeout))
    local = {_fold(t) for t in frag_shapes(data, shapes, h).fragment}
    if remote == local:
        return Equal()
    return Mismatch(frozenset(local - remote), frozenset(remote - local))
