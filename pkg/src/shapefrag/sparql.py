"""SPARQL SELECT queries for path graphs, conformance, neighborhoods and fragments.

Queries use full IRIs in angle brackets and no PREFIX clauses so the text is
stable byte for byte. Internal variables get numeric suffixes from a counter
that is reset per public call.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .paths import Alt, Id, Inverse, Opt, PathExpr, Prop, Seq, Star
from .rdf import BNode, IRI, Literal, Node
from .shapes import (
    And, Bottom, Closed, Datatype, Disj, Eq, ForAll, GeqN, HasValue, LanguageTag, LeqN,
    LessThan, LessThanEq, MaxExclusive, MaxInclusive, MaxLength, MinExclusive, MinInclusive,
    MinLength, NodeKind, Not, Or, Pattern, Schema, Shape, Test, Top, UniqueLang, EMPTY_SCHEMA,
    check_nonrecursive, expand, nnf,
)


class UnsupportedForGeneration(ValueError):
    pass


@dataclass(frozen=True)
class QueryText:
    query: str
    variables: tuple
    role: str  # pathQuery | conformanceQuery | neighborhoodQuery | fragmentQuery

    def __str__(self):
        return self.query


def _indent(text: str, n: int = 2) -> str:
    pad = " " * n
    return "\n".join(pad + line if line else line for line in text.split("\n"))


def _group(text: str) -> str:
    if "\n" not in text:
        return "{ " + text + " }"
    return "{\n" + _indent(text) + "\n}"


def _union(parts: Sequence[str]) -> str:
    return "\nUNION\n".join(_group(p) for p in parts)


def _select(head: str, body: str) -> str:
    if "\n" not in body and len(head) + len(body) < 100:
        return f"SELECT {head} WHERE {{ {body} }}"
    return f"SELECT {head}\nWHERE {{\n{_indent(body)}\n}}"


def term(n: Node) -> str:
    if isinstance(n, BNode):
        raise UnsupportedForGeneration(f"blank node constant {n.n3()} cannot be named in a query")
    return n.n3()


def sparql_path(e: PathExpr) -> str:
    """Render a path expression in SPARQL property-path syntax."""
    if isinstance(e, Prop):
        return term(e.iri)
    if isinstance(e, Inverse):
        return "^" + _atom(e.path)
    if isinstance(e, Seq):
        return "(" + sparql_path(e.first) + "/" + sparql_path(e.second) + ")"
    if isinstance(e, Alt):
        return "(" + sparql_path(e.left) + "|" + sparql_path(e.right) + ")"
    if isinstance(e, Star):
        return _atom(e.path) + "*"
    if isinstance(e, Opt):
        return _atom(e.path) + "?"
    raise UnsupportedForGeneration(f"not a path expression: {e!r}")


def _atom(e: PathExpr) -> str:
    s = sparql_path(e)
    return s if isinstance(e, (Prop, Seq, Alt)) else "(" + s + ")"


_XSD = "http://www.w3.org/2001/XMLSchema#"


def _same_family(a: str, b: str) -> str:
    """Both operands fall in one comparable family: numeric, string, dateTime or date."""
    def typed(local):
        return f"(datatype({a}) = <{_XSD}{local}> && datatype({b}) = <{_XSD}{local}>)"
    return (
        f"((isNumeric({a}) && isNumeric({b})) || {typed('string')}"
        f" || ({typed('dateTime')} && (TZ({a}) = \"\") = (TZ({b}) = \"\")) || {typed('date')})"
    )


def _compare(a: str, op: str, b: str) -> str:
    """``a op b`` under the literal order; false (never an error) when incomparable."""
    return f"COALESCE({_same_family(a, b)} && {a} {op} {b}, false)"


def _test_expr(t, x: str) -> str:
    if isinstance(t, NodeKind):
        return {"iri": f"isIRI({x})", "literal": f"isLiteral({x})", "blank": f"isBlank({x})"}[t.kind]
    if isinstance(t, Datatype):
        return f"isLiteral({x}) && datatype({x}) = {term(t.datatype)}"
    ops = {MinExclusive: "<", MinInclusive: "<=", MaxExclusive: ">", MaxInclusive: ">="}
    if type(t) in ops:
        return _compare(term(t.bound), ops[type(t)], x)
    if isinstance(t, MinLength):
        return f"!isBlank({x}) && STRLEN(STR({x})) >= {t.n}"
    if isinstance(t, MaxLength):
        return f"!isBlank({x}) && STRLEN(STR({x})) <= {t.n}"
    if isinstance(t, Pattern):
        return f"!isBlank({x}) && REGEX(STR({x}), {Literal(t.regex).n3()})"
    if isinstance(t, LanguageTag):
        return f"isLiteral({x}) && langMatches(lang({x}), {Literal(t.tag).n3()})"
    raise UnsupportedForGeneration(f"no SPARQL counterpart for node test {t!r}")


def _not_in(var: str, allowed) -> str:
    # an empty NOT IN list is always true; some engines get that wrong, so skip it
    if not allowed:
        return ""
    items = ", ".join(term(p) for p in sorted(allowed, key=lambda i: i.value))
    return f" FILTER ({var} NOT IN ({items}))"


class _Gen:
    def __init__(self):
        self.k = 0

    def fresh(self, stem: str) -> str:
        self.k += 1
        return f"?{stem}{self.k}"

    # ---- node sets -----------------------------------------------------------

    def nodes(self, x: str) -> str:
        """All nodes of the graph, bound to ``x``."""
        self.k += 2
        a, b = self.k - 1, self.k
        return f"{{ {x} ?p{a} ?o{a} }} UNION {{ ?s{b} ?p{b} {x} }}"

    def cq_sub(self, s: Shape, x: str) -> str:
        return _group(_select(f"DISTINCT {x}", self.cq(s, x)))

    def cq(self, s: Shape, x: str) -> str:
        """Group-pattern body binding ``x`` to the conforming nodes of the graph."""
        if isinstance(s, Top):
            return self.nodes(x)
        if isinstance(s, Bottom):
            return self.nodes(x) + " FILTER (false)"
        if isinstance(s, HasValue):
            if isinstance(s.value, IRI):
                return self.nodes(x) + f" FILTER ({x} = {term(s.value)})"
            return self.nodes(x) + f" FILTER (sameTerm({x}, {term(s.value)}))"
        if isinstance(s, Test):
            return self.nodes(x) + f" FILTER (COALESCE({_test_expr(s.test, x)}, false))"
        if isinstance(s, Not):
            return self.nodes(x) + "\nMINUS " + self.cq_sub(s.shape, x)
        if isinstance(s, And):
            return self.cq_sub(s.left, x) + " .\n" + self.cq_sub(s.right, x)
        if isinstance(s, Or):
            return self.cq_sub(s.left, x) + "\nUNION\n" + self.cq_sub(s.right, x)
        if isinstance(s, GeqN):
            return self._geq(s.n, s.path, s.shape, x)
        if isinstance(s, LeqN):
            if s.n == 0 and isinstance(s.shape, Top):
                y = self.fresh("y")
                return self.nodes(x) + f" FILTER NOT EXISTS {{ {x} {sparql_path(s.path)} {y} }}"
            inner = self._geq(s.n + 1, s.path, s.shape, x)
            return self.nodes(x) + "\nMINUS " + _group(inner)
        if isinstance(s, ForAll):
            y = self.fresh("y")
            bad = f"{x} {sparql_path(s.path)} {y} .\n" + self.cq_sub(Not(s.shape), y)
            return self.nodes(x) + "\nMINUS " + _group(bad)
        if isinstance(s, Eq):
            y = self.fresh("y")
            if s.path is Id:
                p = term(s.prop)
                return self.nodes(x) + (
                    f" FILTER (EXISTS {{ {x} {p} {x} }} && "
                    f"NOT EXISTS {{ {x} {p} {y} FILTER (!sameTerm({y}, {x})) }})"
                )
            e, p = sparql_path(s.path), term(s.prop)
            return self.nodes(x) + (
                f"\nFILTER NOT EXISTS {{ {x} {e} {y} FILTER NOT EXISTS {{ {x} {p} {y} }} }}"
                f"\nFILTER NOT EXISTS {{ {x} {p} {y} FILTER NOT EXISTS {{ {x} {e} {y} }} }}"
            )
        if isinstance(s, Disj):
            p = term(s.prop)
            if s.path is Id:
                return self.nodes(x) + f" FILTER NOT EXISTS {{ {x} {p} {x} }}"
            y = self.fresh("y")
            return self.nodes(x) + (
                f" FILTER NOT EXISTS {{ {x} {sparql_path(s.path)} {y} . {x} {p} {y} }}"
            )
        if isinstance(s, Closed):
            q, y = self.fresh("q"), self.fresh("y")
            return self.nodes(x) + (
                f" FILTER NOT EXISTS {{ {x} {q} {y}{_not_in(q, s.allowed)} }}"
            )
        if isinstance(s, (LessThan, LessThanEq)):
            op = "<" if isinstance(s, LessThan) else "<="
            y, z = self.fresh("y"), self.fresh("z")
            return self.nodes(x) + (
                f" FILTER NOT EXISTS {{ {x} {sparql_path(s.path)} {y} . {x} {term(s.prop)} {z}"
                f" FILTER (!{_compare(y, op, z)}) }}"
            )
        if isinstance(s, UniqueLang):
            y, z = self.fresh("y"), self.fresh("z")
            e = sparql_path(s.path)
            return self.nodes(x) + (
                f" FILTER NOT EXISTS {{ {x} {e} {y} . {x} {e} {z}"
                f" FILTER (COALESCE(!sameTerm({y}, {z}) && lang({y}) != \"\""
                f" && LCASE(lang({y})) = LCASE(lang({z})), false)) }}"
            )
        raise UnsupportedForGeneration(f"cannot generate a conformance query for {s!r}")

    def _geq(self, n: int, e: PathExpr, psi: Shape, x: str) -> str:
        if n == 0:
            return self.nodes(x)
        y = self.fresh("y")
        body = f"{x} {sparql_path(e)} {y} ."
        if not isinstance(psi, Top):
            body += "\n" + self.cq_sub(psi, y)
        if n == 1:
            return body
        sel = _select(x, body) + f"\nGROUP BY {x} HAVING (COUNT(DISTINCT {y}) >= {n})"
        return _group(sel)

    def cq_query(self, s: Shape) -> str:
        return _select("?v", self.cq(s, "?v"))

    # ---- path graphs ---------------------------------------------------------

    def identity(self) -> str:
        return (
            "SELECT (?v AS ?t) (?v AS ?h)\n"
            "WHERE { { ?v ?_p1 ?_o1 } UNION { ?_s2 ?_p2 ?v } }"
        )

    def q_path(self, e: PathExpr) -> str:
        """Projects ?t ?s ?p ?o ?h: triples (s,p,o) on some e-path from t to h."""
        if isinstance(e, Prop):
            p = term(e.iri)
            return f"SELECT (?s AS ?t) ?s ({p} AS ?p) ?o (?o AS ?h) WHERE {{ ?s {p} ?o. }}"
        if isinstance(e, Opt):
            return _select("?t ?s ?p ?o ?h", _union([self.q_path(e.path), self.identity()]))
        if isinstance(e, Inverse):
            t0, h0 = self.fresh("t"), self.fresh("h")
            inner = _select(f"(?t AS {t0}) ?s ?p ?o (?h AS {h0})", self.q_path(e.path))
            return _select(f"({h0} AS ?t) ?s ?p ?o ({t0} AS ?h)", _group(inner))
        if isinstance(e, Alt):
            return _select("?t ?s ?p ?o ?h", _union([self.q_path(e.left), self.q_path(e.right)]))
        if isinstance(e, Seq):
            m1, m2 = self.fresh("h"), self.fresh("h")
            left = (
                _group(_select(f"?t ?s ?p ?o (?h AS {m1})", self.q_path(e.first)))
                + " .\n"
                + _group(_select(f"(?t AS {m1}) ?h", f"?t {sparql_path(e.second)} ?h"))
            )
            right = (
                _group(_select(f"?t (?h AS {m2})", f"?t {sparql_path(e.first)} ?h"))
                + " .\n"
                + _group(_select(f"(?t AS {m2}) ?s ?p ?o ?h", self.q_path(e.second)))
            )
            return _select("?t ?s ?p ?o ?h", _union([left, right]))
        if isinstance(e, Star):
            x1, x2 = self.fresh("x"), self.fresh("x")
            star = sparql_path(e)
            sandwich = (
                f"?t {star} {x1} .\n{x2} {star} ?h .\n"
                + _group(_select(f"(?t AS {x1}) ?s ?p ?o (?h AS {x2})", self.q_path(e.path)))
            )
            return _select("?t ?s ?p ?o ?h", _union([sandwich, self.identity()]))
        raise UnsupportedForGeneration(f"not a path expression: {e!r}")

    # ---- neighborhoods -------------------------------------------------------

    def q_shape(self, phi: Shape) -> Optional[str]:
        """Projects ?v ?s ?p ?o for (s,p,o) in the neighborhood of v; None if always empty."""
        if isinstance(phi, (And, Or)):
            parts = [q for q in (self.q_shape(phi.left), self.q_shape(phi.right)) if q]
            if not parts:
                return None
            return _select("?v ?s ?p ?o", _group(self.cq_query(phi)) + " .\n" + _union(parts))
        if isinstance(phi, (GeqN, LeqN)):
            psi = phi.shape if isinstance(phi, GeqN) else nnf(Not(phi.shape))
            return self._quantified(phi, psi, with_cq=True)
        if isinstance(phi, ForAll):
            return self._quantified(phi, phi.shape, with_cq=False)
        if isinstance(phi, Eq):
            if phi.path is Id:
                p = term(phi.prop)
                return _select(
                    f"?v (?v AS ?s) ({p} AS ?p) (?v AS ?o)",
                    _group(self.cq_query(phi)) + f" .\n?v {p} ?v",
                )
            return _select(
                "(?t AS ?v) ?s ?p ?o",
                self._focus(phi) + " .\n"
                + _group(_union([self.q_path(phi.path), self.q_path(Prop(phi.prop))])),
            )
        if isinstance(phi, Not):
            return self._q_negated(phi)
        return None

    def _focus(self, phi: Shape) -> str:
        return _group(_select("(?v AS ?t)", _group(self.cq_query(phi))))

    def _quantified(self, phi, psi: Shape, with_cq: bool) -> str:
        e = phi.path
        first = self._focus(phi) + " .\n" + _group(self.q_path(e))
        if with_cq:
            first += " .\n" + _group(_select("(?v AS ?h)", _group(self.cq_query(psi))))
        branches = [first]
        q_psi = self.q_shape(psi)
        if q_psi is not None:
            inner = _group(q_psi)
            if with_cq:
                inner += " .\n" + _group(self.cq_query(psi))
            branches.append(
                self._focus(phi) + f" .\n?t {sparql_path(e)} ?h .\n"
                + _group(_select("(?v AS ?h) ?s ?p ?o", inner))
            )
        return _select("(?t AS ?v) ?s ?p ?o", _union(branches))

    def _q_negated(self, phi: Not) -> Optional[str]:
        s = phi.shape
        if isinstance(s, Closed):
            flt = _not_in("?p", s.allowed).replace(" FILTER", "\nFILTER")
            return _select("?v (?v AS ?s) ?p ?o", _group(self.cq_query(phi)) + " .\n?v ?p ?o ." + flt)
        if isinstance(s, Eq):
            p = term(s.prop)
            if s.path is Id:
                return _select(
                    f"?v (?v AS ?s) ({p} AS ?p) ?o",
                    _group(self.cq_query(phi)) + f" .\n{{ ?v {p} ?o }}\nFILTER (!sameTerm(?o, ?v))",
                )
            e = sparql_path(s.path)
            branches = [
                _group(self.q_path(s.path)) + f"\nMINUS {{ ?t {p} ?h }}",
                _group(self.q_path(Prop(s.prop))) + f"\nMINUS {{ ?t {e} ?h }}",
            ]
            return _select("(?t AS ?v) ?s ?p ?o", self._focus(phi) + " .\n" + _group(_union(branches)))
        if isinstance(s, Disj):
            p = term(s.prop)
            if s.path is Id:
                return _select(
                    f"?v (?v AS ?s) ({p} AS ?p) (?v AS ?o)",
                    _group(self.cq_query(phi)) + f" .\n?v {p} ?v",
                )
            e = sparql_path(s.path)
            branches = [
                _group(self.q_path(s.path)) + f" .\n{{ ?t {p} ?h }}",
                _group(self.q_path(Prop(s.prop))) + f" .\n{{ ?t {e} ?h }}",
            ]
            return _select("(?t AS ?v) ?s ?p ?o", self._focus(phi) + " .\n" + _group(_union(branches)))
        if isinstance(s, (LessThan, LessThanEq)):
            op = "<" if isinstance(s, LessThan) else "<="
            p, e = term(s.prop), sparql_path(s.path)
            h2 = self.fresh("h")
            branches = [
                _group(self.q_path(s.path))
                + f" .\n{{ ?t {p} {h2} }}\nFILTER (!{_compare('?h', op, h2)})",
                _group(self.q_path(Prop(s.prop)))
                + f" .\n{{ ?t {e} {h2} }}\nFILTER (!{_compare(h2, op, '?h')})",
            ]
            return _select("(?t AS ?v) ?s ?p ?o", self._focus(phi) + " .\n" + _group(_union(branches)))
        if isinstance(s, UniqueLang):
            h2 = self.fresh("h")
            body = (
                self._focus(phi) + " .\n" + _group(self.q_path(s.path))
                + f" .\n{{ ?t {sparql_path(s.path)} {h2} }}\n"
                f"FILTER (COALESCE(!sameTerm(?h, {h2}) && lang(?h) != \"\""
                f" && LCASE(lang(?h)) = LCASE(lang({h2})), false))"
            )
            return _select("(?t AS ?v) ?s ?p ?o", body)
        # negated Top, HasValue, Test: empty
        return None


_EMPTY_NEIGHBORHOOD = "SELECT ?v ?s ?p ?o WHERE { VALUES (?v ?s ?p ?o) { } }"
_EMPTY_FRAGMENT = "SELECT ?s ?p ?o WHERE { VALUES (?s ?p ?o) { } }"


def _prepare(s: Shape, h: Schema) -> Shape:
    check_nonrecursive(h)
    return nnf(expand(s, h))


def gen_path_query(e: PathExpr) -> QueryText:
    return QueryText(_Gen().q_path(e), ("t", "s", "p", "o", "h"), "pathQuery")


def gen_conformance_query(s: Shape, h: Schema = EMPTY_SCHEMA) -> QueryText:
    return QueryText(_Gen().cq_query(_prepare(s, h)), ("v",), "conformanceQuery")


def gen_neighborhood_query(s: Shape, h: Schema = EMPTY_SCHEMA) -> QueryText:
    q = _Gen().q_shape(_prepare(s, h))
    return QueryText(q or _EMPTY_NEIGHBORHOOD, ("v", "s", "p", "o"), "neighborhoodQuery")


def gen_fragment_query(shapes: Sequence[Shape], h: Schema = EMPTY_SCHEMA) -> QueryText:
    gen = _Gen()
    parts = [q for q in (gen.q_shape(_prepare(s, h)) for s in shapes) if q]
    if not parts:
        return QueryText(_EMPTY_FRAGMENT, ("s", "p", "o"), "fragmentQuery")
    body = _union([_select("?s ?p ?o", _group(q)) for q in parts])
    return QueryText(_select("?s ?p ?o", body), ("s", "p", "o"), "fragmentQuery")


def gen_schema_fragment_query(h: Schema) -> QueryText:
    return gen_fragment_query([And(d.shape, d.target) for d in h], h)
