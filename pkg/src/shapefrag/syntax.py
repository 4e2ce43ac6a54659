"""Prefix-notation text syntax for shapes, paths and whole schemas.

Shapes::

    geq 1 :author (geq 1 (seq rdf:type (star rdfs:subClassOf)) (hasValue :Student))
    not (disj id :friend)

A schema file is a sequence of ``prefix``, ``def`` and ``request`` statements::

    prefix ex: <http://example.org/ns#>
    def ex:S = geq 1 ex:p top target hasValue ex:a
    request forall ex:p top
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .paths import Alt, Id, Inverse, Opt, PathExpr, Prop, Seq, Star
from .rdf import RDF, RDFS, SH, XSD, XSD_STRING, BNode, IRI, Literal, unescape
from .shapes import (
    And, Bottom, Closed, Datatype, Disj, Eq, ForAll, GeqN, HasShape, HasValue, LanguageTag,
    LeqN, LessThan, LessThanEq, MaxExclusive, MaxInclusive, MaxLength, MinExclusive,
    MinInclusive, MinLength, NodeKind, Not, Or, Pattern, Schema, Shape, ShapeDefinition, Test,
    Top, UniqueLang, BOTTOM, TOP,
)

DEFAULT_PREFIXES = {
    "": "http://example.org/",
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "sh": SH,
}


class ShapeSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column = line, col
        super().__init__(f"{message} (line {line}, column {col})")


_TOKEN = re.compile(
    r"""
      (?P<ws>\s+|\#[^\n]*)
    | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
    | (?P<bnode>_:[A-Za-z0-9_][A-Za-z0-9_.\-]*)
    | (?P<str>"(?:[^"\\]|\\.)*")(?:@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^(?P<dt><[^<>"\s]*>|[A-Za-z][\w\-]*:[\w\-.]*[\w\-]|[A-Za-z][\w\-]*:))?
    | (?P<pname>(?:[A-Za-z][\w\-]*)?:(?:[\w\-](?:[\w\-.]*[\w\-])?)?)
    | (?P<nat>[0-9]+)
    | (?P<punct>[(){}=;])
    | (?P<word>[A-Za-z][A-Za-z]*)
    """,
    re.X,
)

_TESTS_LIT = {"minEx": MinExclusive, "minIn": MinInclusive, "maxEx": MaxExclusive, "maxIn": MaxInclusive}
_TESTS_NAT = {"minLen": MinLength, "maxLen": MaxLength}


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int
    lang: Optional[str] = None
    dt: Optional[str] = None


class _Parser:
    def __init__(self, text: str, prefixes: Optional[dict] = None):
        self.text = text
        self.prefixes = dict(DEFAULT_PREFIXES if prefixes is None else prefixes)
        self.toks = self._lex(text)
        self.i = 0

    def _lex(self, text):
        toks, pos = [], 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ShapeSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            kind = m.lastgroup
            if kind in ("lang", "dt"):
                kind = "str"
            if kind != "ws":
                toks.append(_Tok(kind, m.group(kind), pos, m.group("lang"), m.group("dt")))
            pos = m.end()
        toks.append(_Tok("eof", "", len(text)))
        return toks

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        return ShapeSyntaxError(msg, self.text, tok.pos)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.next()
        if tok.value != value:
            raise self.error(f"expected {value!r}, found {tok.value or 'end of input'!r}", tok)

    def at_end(self):
        return self.peek().kind == "eof"

    # terms
    def iri_of(self, tok: _Tok) -> IRI:
        if tok.kind == "iri":
            return IRI(unescape(tok.value[1:-1]))
        if tok.kind == "pname":
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                raise self.error(f"undeclared prefix {prefix!r}", tok)
            return IRI(self.prefixes[prefix] + local)
        raise self.error(f"expected an IRI, found {tok.value or 'end of input'!r}", tok)

    def iri(self) -> IRI:
        return self.iri_of(self.next())

    def name(self):
        tok = self.next()
        if tok.kind == "bnode":
            return BNode(tok.value[2:])
        return self.iri_of(tok)

    def nat(self) -> int:
        tok = self.next()
        if tok.kind != "nat":
            raise self.error("expected a natural number", tok)
        return int(tok.value)

    def string(self) -> str:
        tok = self.next()
        if tok.kind != "str" or tok.lang or tok.dt:
            raise self.error("expected a plain string", tok)
        return unescape(tok.value[1:-1])

    def literal(self) -> Literal:
        tok = self.next()
        if tok.kind == "nat":
            return Literal(tok.value, XSD + "integer")
        if tok.kind != "str":
            raise self.error("expected a literal", tok)
        lex = unescape(tok.value[1:-1])
        if tok.lang:
            return Literal(lex, lang=tok.lang)
        if tok.dt:
            dt_tok = _Tok("iri" if tok.dt.startswith("<") else "pname", tok.dt, tok.pos)
            return Literal(lex, self.iri_of(dt_tok).value)
        return Literal(lex)

    def node(self):
        tok = self.peek()
        if tok.kind in ("str", "nat"):
            return self.literal()
        if tok.kind == "bnode":
            self.next()
            return BNode(tok.value[2:])
        return self.iri()

    # grammar
    def path(self) -> PathExpr:
        tok = self.peek()
        if tok.value == "(":
            self.next()
            p = self.path()
            self.expect(")")
            return p
        if tok.kind in ("iri", "pname"):
            return Prop(self.iri())
        if tok.kind == "word":
            self.next()
            w = tok.value
            if w == "inv":
                return Inverse(self.path())
            if w == "seq":
                return Seq(self.path(), self.path())
            if w == "alt":
                return Alt(self.path(), self.path())
            if w == "star":
                return Star(self.path())
            if w == "opt":
                return Opt(self.path())
        raise self.error(f"expected a path expression, found {tok.value or 'end of input'!r}", tok)

    def path_or_id(self):
        if self.peek().kind == "word" and self.peek().value == "id":
            self.next()
            return Id
        return self.path()

    def test(self):
        tok = self.next()
        if tok.value == "(":
            t = self.test()
            self.expect(")")
            return t
        w = tok.value
        if w == "kind":
            k = self.next()
            if k.value not in ("iri", "literal", "blank"):
                raise self.error("expected iri, literal or blank", k)
            return NodeKind(k.value)
        if w == "datatype":
            return Datatype(self.iri())
        if w in _TESTS_LIT:
            return _TESTS_LIT[w](self.literal())
        if w in _TESTS_NAT:
            return _TESTS_NAT[w](self.nat())
        if w == "pattern":
            tok2 = self.peek()
            try:
                return Pattern(self.string())
            except ValueError as e:
                if isinstance(e, ShapeSyntaxError):
                    raise
                raise self.error(str(e), tok2) from None
        if w == "lang":
            return LanguageTag(self.string())
        raise self.error(f"unknown node test {w!r}", tok)

    def shape(self) -> Shape:
        tok = self.next()
        if tok.value == "(":
            s = self.shape()
            self.expect(")")
            return s
        if tok.kind != "word":
            raise self.error(f"expected a shape, found {tok.value or 'end of input'!r}", tok)
        w = tok.value
        if w == "top":
            return TOP
        if w == "bot":
            return BOTTOM
        if w == "hasShape":
            return HasShape(self.name())
        if w == "test":
            return Test(self.test())
        if w == "hasValue":
            return HasValue(self.node())
        if w == "eq":
            return Eq(self.path_or_id(), self.iri())
        if w == "disj":
            return Disj(self.path_or_id(), self.iri())
        if w == "closed":
            self.expect("{")
            items = []
            while self.peek().value != "}":
                if self.at_end():
                    raise self.error("unterminated closed set")
                items.append(self.iri())
            self.next()
            return Closed(frozenset(items))
        if w == "lessThan":
            return LessThan(self.path(), self.iri())
        if w == "lessThanEq":
            return LessThanEq(self.path(), self.iri())
        if w == "uniqueLang":
            return UniqueLang(self.path())
        if w == "not":
            return Not(self.shape())
        if w == "and":
            return And(self.shape(), self.shape())
        if w == "or":
            return Or(self.shape(), self.shape())
        if w in ("geq", "leq"):
            n = self.nat()
            p = self.path()
            s = self.shape()
            return GeqN(n, p, s) if w == "geq" else LeqN(n, p, s)
        if w == "forall":
            return ForAll(self.path(), self.shape())
        raise self.error(f"unknown shape constructor {w!r}", tok)

    def document(self):
        defs, requests = [], []
        while not self.at_end():
            tok = self.next()
            if tok.value == ";":
                continue
            if tok.value == "prefix":
                p = self.next()
                if p.kind != "pname" or not p.value.endswith(":"):
                    raise self.error("expected a prefix name like ex:", p)
                iri_tok = self.next()
                if iri_tok.kind != "iri":
                    raise self.error("expected <IRI>", iri_tok)
                self.prefixes[p.value[:-1]] = unescape(iri_tok.value[1:-1])
            elif tok.value == "def":
                name = self.name()
                self.expect("=")
                shape = self.shape()
                target = BOTTOM
                if self.peek().value == "target":
                    self.next()
                    target = self.shape()
                defs.append(ShapeDefinition(name, shape, target))
            elif tok.value == "request":
                requests.append(self.shape())
            else:
                raise self.error(f"expected prefix, def or request, found {tok.value!r}", tok)
        return defs, requests


def parse_shape(text: str, prefixes: Optional[dict] = None) -> Shape:
    p = _Parser(text, prefixes)
    s = p.shape()
    if not p.at_end():
        raise p.error(f"unexpected trailing input {p.peek().value!r}")
    return s


def parse_path(text: str, prefixes: Optional[dict] = None) -> PathExpr:
    p = _Parser(text, prefixes)
    e = p.path()
    if not p.at_end():
        raise p.error(f"unexpected trailing input {p.peek().value!r}")
    return e


@dataclass
class FormalDocument:
    definitions: list = field(default_factory=list)
    requests: list = field(default_factory=list)
    prefixes: dict = field(default_factory=dict)

    def schema(self, arbitrary_targets: bool = False) -> Schema:
        return Schema(tuple(self.definitions), arbitrary_targets=arbitrary_targets)


def parse_document(text: str, prefixes: Optional[dict] = None) -> FormalDocument:
    p = _Parser(text, prefixes)
    defs, reqs = p.document()
    return FormalDocument(defs, reqs, p.prefixes)


def parse_schema(text: str, prefixes: Optional[dict] = None, arbitrary_targets: bool = False) -> Schema:
    return parse_document(text, prefixes).schema(arbitrary_targets)


# --- printing ---------------------------------------------------------------------

_LOCAL_OK = re.compile(r"(?:[\w\-](?:[\w\-.]*[\w\-])?)?", re.A)


class _Printer:
    def __init__(self, prefixes: Optional[dict]):
        pf = DEFAULT_PREFIXES if prefixes is None else prefixes
        # longest namespace first, then prefix name for determinism
        self.prefixes = sorted(pf.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    def iri(self, iri: IRI) -> str:
        v = iri.value
        for prefix, ns in self.prefixes:
            if ns and v.startswith(ns) and _LOCAL_OK.fullmatch(v[len(ns):]):
                return f"{prefix}:{v[len(ns):]}"
        return iri.n3()

    def node(self, n) -> str:
        if isinstance(n, IRI):
            return self.iri(n)
        if isinstance(n, BNode):
            return n.n3()
        quoted = '"' + n.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r") + '"'
        if n.lang is not None:
            return quoted + "@" + n.lang
        if n.datatype == XSD_STRING:
            return quoted
        return quoted + "^^" + self.iri(IRI(n.datatype))

    def path(self, e, nested=False) -> str:
        if e is Id:
            return "id"
        if isinstance(e, Prop):
            return self.iri(e.iri)
        if isinstance(e, Inverse):
            body = "inv " + self.path(e.path, True)
        elif isinstance(e, Seq):
            body = f"seq {self.path(e.first, True)} {self.path(e.second, True)}"
        elif isinstance(e, Alt):
            body = f"alt {self.path(e.left, True)} {self.path(e.right, True)}"
        elif isinstance(e, Star):
            body = "star " + self.path(e.path, True)
        elif isinstance(e, Opt):
            body = "opt " + self.path(e.path, True)
        else:
            raise TypeError(f"not a path: {e!r}")
        return f"({body})" if nested else body

    def test(self, t) -> str:
        if isinstance(t, NodeKind):
            return "kind " + t.kind
        if isinstance(t, Datatype):
            return "datatype " + self.iri(t.datatype)
        for word, cls in _TESTS_LIT.items():
            if type(t) is cls:
                return f"{word} {self.node(t.bound)}"
        for word, cls in _TESTS_NAT.items():
            if type(t) is cls:
                return f"{word} {t.n}"
        if isinstance(t, Pattern):
            return "pattern " + self.node(Literal(t.regex))
        if isinstance(t, LanguageTag):
            return "lang " + self.node(Literal(t.tag))
        raise TypeError(f"not a node test: {t!r}")

    def shape(self, s, nested=False) -> str:
        if isinstance(s, Top):
            return "top"
        if isinstance(s, Bottom):
            return "bot"
        if isinstance(s, HasShape):
            body = "hasShape " + self.node(s.name)
        elif isinstance(s, Test):
            body = "test " + self.test(s.test)
        elif isinstance(s, HasValue):
            body = "hasValue " + self.node(s.value)
        elif isinstance(s, Eq):
            body = f"eq {self.path(s.path, True)} {self.iri(s.prop)}"
        elif isinstance(s, Disj):
            body = f"disj {self.path(s.path, True)} {self.iri(s.prop)}"
        elif isinstance(s, Closed):
            items = sorted(self.iri(p) for p in s.allowed)
            body = "closed {" + "".join(" " + x for x in items) + " }"
        elif isinstance(s, LessThan):
            body = f"lessThan {self.path(s.path, True)} {self.iri(s.prop)}"
        elif isinstance(s, LessThanEq):
            body = f"lessThanEq {self.path(s.path, True)} {self.iri(s.prop)}"
        elif isinstance(s, UniqueLang):
            body = "uniqueLang " + self.path(s.path, True)
        elif isinstance(s, Not):
            body = "not " + self.shape(s.shape, True)
        elif isinstance(s, And):
            body = f"and {self.shape(s.left, True)} {self.shape(s.right, True)}"
        elif isinstance(s, Or):
            body = f"or {self.shape(s.left, True)} {self.shape(s.right, True)}"
        elif isinstance(s, GeqN):
            body = f"geq {s.n} {self.path(s.path, True)} {self.shape(s.shape, True)}"
        elif isinstance(s, LeqN):
            body = f"leq {s.n} {self.path(s.path, True)} {self.shape(s.shape, True)}"
        elif isinstance(s, ForAll):
            body = f"forall {self.path(s.path, True)} {self.shape(s.shape, True)}"
        else:
            raise TypeError(f"not a shape: {s!r}")
        return f"({body})" if nested else body


def print_shape(s: Shape, prefixes: Optional[dict] = None) -> str:
    return _Printer(prefixes).shape(s)


def print_path(e, prefixes: Optional[dict] = None) -> str:
    return _Printer(prefixes).path(e)


def print_schema(h: Schema, prefixes: Optional[dict] = None) -> str:
    pr = _Printer(prefixes)
    pf = DEFAULT_PREFIXES if prefixes is None else prefixes
    lines = [f"prefix {k}: <{v}>" for k, v in sorted(pf.items()) if k not in DEFAULT_PREFIXES or DEFAULT_PREFIXES[k] != v]
    for d in h:
        line = f"def {pr.node(d.name)} = {pr.shape(d.shape)}"
        if not isinstance(d.target, Bottom):
            line += f" target {pr.shape(d.target)}"
        lines.append(line)
    return "\n".join(lines) + "\n"
