"""Reader for the Turtle subset used by shapes graphs and small data files.

Supported: @prefix/PREFIX, prefixed names, ``a``, ``;`` and ``,`` lists,
anonymous ``[ ... ]`` nodes, collections ``( ... )``, string literals (short
and long forms), numeric and boolean shorthand. Anything else raises
:class:`TurtleError` naming the feature.
"""
from __future__ import annotations

import re

from .rdf import RDF, XSD, BNode, Graph, IRI, Literal, RDFSyntaxError, Triple, unescape

RDF_TYPE = IRI(RDF + "type")
RDF_FIRST = IRI(RDF + "first")
RDF_REST = IRI(RDF + "rest")
RDF_NIL = IRI(RDF + "nil")


class TurtleError(RDFSyntaxError):
    pass


_PN_CHARS_BASE = r"A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD"
_PN_CHARS = _PN_CHARS_BASE + r"_0-9\-\u00B7"
_PREFIX = rf"(?:[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)?"
_LOCAL = rf"(?:[{_PN_CHARS_BASE}_0-9:](?:[{_PN_CHARS}.:]*[{_PN_CHARS}:])?)?"

_TOKEN = re.compile(
    rf"""
      (?P<ws>\s+|\#[^\n]*)
    | (?P<long>\"\"\"(?:[^"\\]|\\.|"(?!""))*\"\"\"|'''(?:[^'\\]|\\.|'(?!''))*''')
    | (?P<str>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
    | (?P<iri><[^<>"{{}}|^`\\\x00-\x20]*>)
    | (?P<bnode>_:[{_PN_CHARS_BASE}_0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)
    | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
    | (?P<dtmark>\^\^)
    | (?P<double>[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+))
    | (?P<decimal>[+-]?[0-9]*\.[0-9]+)
    | (?P<integer>[+-]?[0-9]+)
    | (?P<pname>{_PREFIX}:{_LOCAL})
    | (?P<punct>[.;,\[\]()])
    | (?P<word>[A-Za-z]+)
    | (?P<other><<|>>|\{{|\}}|\|)
    """,
    re.X,
)

_UNSUPPORTED_PUNCT = {"<<": "RDF-star quoted triples", ">>": "RDF-star quoted triples",
                      "{": "graph blocks", "}": "graph blocks", "|": "RDF-star annotations"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = self._lex(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self.bnode_labels: dict[str, BNode] = {}
        self.counter = 0

    @staticmethod
    def _lex(text):
        toks, pos, line = [], 0, 1
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise TurtleError(f"unexpected character {text[pos]!r}", line)
            kind = m.lastgroup
            val = m.group(kind)
            if kind == "other":
                raise TurtleError(f"unsupported Turtle feature: {_UNSUPPORTED_PUNCT[val]}", line)
            if kind != "ws":
                toks.append((kind, val, line))
            line += val.count("\n")
            pos = m.end()
        toks.append(("eof", "", line))
        return toks

    # token helpers
    def peek(self, k=0):
        return self.tokens[self.i + k]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, line = self.next()
        if val != value:
            raise TurtleError(f"expected {value!r}, found {val or kind!r}", line)

    def fresh(self) -> BNode:
        self.counter += 1
        label = f"b{self.counter}"
        while label in self.bnode_labels:
            self.counter += 1
            label = f"b{self.counter}"
        node = BNode(label)
        self.bnode_labels[label] = node
        return node

    # grammar
    def parse(self) -> Graph:
        while self.peek()[0] != "eof":
            self.statement()
        return Graph(self.triples)

    def statement(self):
        kind, val, line = self.peek()
        if kind == "word" and val.upper() == "PREFIX" or val == "@prefix":
            self.prefix_directive()
            return
        if kind == "lang" and val in ("@base",) or kind == "word" and val.upper() == "BASE":
            raise TurtleError("unsupported Turtle feature: @base", line)
        if kind == "lang":
            raise TurtleError(f"unsupported directive {val}", line)
        self.triples_stmt()
        self.expect(".")

    def prefix_directive(self):
        kind, val, line = self.next()
        sparql_style = val != "@prefix"
        k, name, ln = self.next()
        if k != "pname" or not name.endswith(":"):
            raise TurtleError("expected prefix name ending in ':'", ln)
        k, iri, ln = self.next()
        if k != "iri":
            raise TurtleError("expected IRI in prefix declaration", ln)
        self.prefixes[name[:-1]] = unescape(iri[1:-1])
        if not sparql_style:
            self.expect(".")

    def triples_stmt(self):
        kind, val, line = self.peek()
        if val == "[":
            subj = self.blank_property_list()
            if self.peek()[1] != ".":
                self.predicate_object_list(subj)
        else:
            subj = self.subject()
            self.predicate_object_list(subj)

    def subject(self):
        kind, val, line = self.peek()
        if val == "(":
            return self.collection()
        node = self.term()
        if isinstance(node, Literal):
            raise TurtleError("literal in subject position", line)
        return node

    def predicate_object_list(self, subj):
        while True:
            pred = self.verb()
            self.object_list(subj, pred)
            if self.peek()[1] != ";":
                return
            while self.peek()[1] == ";":
                self.next()
            if self.peek()[1] in (".", "]") or self.peek()[0] == "eof":
                return

    def verb(self):
        kind, val, line = self.peek()
        if kind == "word" and val == "a":
            self.next()
            return RDF_TYPE
        node = self.term()
        if not isinstance(node, IRI):
            raise TurtleError("predicate must be an IRI", line)
        return node

    def object_list(self, subj, pred):
        while True:
            obj = self.object()
            self.triples.append(Triple(subj, pred, obj))
            if self.peek()[1] != ",":
                return
            self.next()

    def object(self):
        val = self.peek()[1]
        if val == "[":
            return self.blank_property_list()
        if val == "(":
            return self.collection()
        return self.term()

    def blank_property_list(self):
        self.expect("[")
        node = self.fresh()
        if self.peek()[1] != "]":
            self.predicate_object_list(node)
        self.expect("]")
        return node

    def collection(self):
        self.expect("(")
        items = []
        while self.peek()[1] != ")":
            if self.peek()[0] == "eof":
                raise TurtleError("unterminated collection", self.peek()[2])
            items.append(self.object())
        self.next()
        if not items:
            return RDF_NIL
        cells = [self.fresh() for _ in items]
        for k, (cell, item) in enumerate(zip(cells, items)):
            self.triples.append(Triple(cell, RDF_FIRST, item))
            rest = cells[k + 1] if k + 1 < len(cells) else RDF_NIL
            self.triples.append(Triple(cell, RDF_REST, rest))
        return cells[0]

    def term(self):
        kind, val, line = self.next()
        if kind == "iri":
            return IRI(unescape(val[1:-1]))
        if kind == "pname":
            prefix, _, local = val.partition(":")
            if prefix not in self.prefixes:
                raise TurtleError(f"undeclared prefix {prefix!r}", line)
            local = re.sub(r"\\([_~.\-!$&'()*+,;=/?#@%])", r"\1", local)
            return IRI(self.prefixes[prefix] + local)
        if kind == "bnode":
            label = val[2:]
            if label not in self.bnode_labels:
                self.bnode_labels[label] = BNode(label)
            return self.bnode_labels[label]
        if kind in ("str", "long"):
            q = 3 if kind == "long" else 1
            lex = unescape(val[q:-q])
            nk, nv, _ = self.peek()
            if nk == "lang":
                self.next()
                return Literal(lex, lang=nv[1:])
            if nk == "dtmark":
                self.next()
                dt = self.term()
                if not isinstance(dt, IRI):
                    raise TurtleError("datatype must be an IRI", line)
                return Literal(lex, dt.value)
            return Literal(lex)
        if kind == "integer":
            return Literal(val, XSD + "integer")
        if kind == "decimal":
            return Literal(val, XSD + "decimal")
        if kind == "double":
            return Literal(val, XSD + "double")
        if kind == "word" and val in ("true", "false"):
            return Literal(val, XSD + "boolean")
        raise TurtleError(f"unexpected token {val or kind!r}", line)


def parse_turtle(text: str) -> Graph:
    """Parse a document in the supported Turtle subset.

    Anonymous nodes and collection cells get labels ``b1, b2, ...`` in
    document order, skipping labels used explicitly in the document.
    """
    p = _Parser(text)
    # reserve explicit labels first so fresh ones never collide
    for kind, val, _ in p.tokens:
        if kind == "bnode":
            p.bnode_labels.setdefault(val[2:], BNode(val[2:]))
    return p.parse()
