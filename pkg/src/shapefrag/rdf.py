"""RDF terms, indexed in-memory graphs, N-Triples I/O and literal comparison."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from decimal import Decimal, InvalidOperation
from typing import Iterable, Iterator, NamedTuple, Optional, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
SH = "http://www.w3.org/ns/shacl#"

XSD_STRING = XSD + "string"
RDF_LANGSTRING = RDF + "langString"


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("IRI must be non-empty")

    def n3(self) -> str:
        return "<" + _escape_iri(self.value) + ">"

    def __str__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class BNode:
    label: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def n3(self) -> str:
        return "_:" + self.label

    def __str__(self):
        return "_:" + self.label


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: Optional[str] = None

    def __post_init__(self):
        if self.lang is not None:
            if not self.lang:
                raise ValueError("empty language tag")
            if self.datatype != RDF_LANGSTRING:
                object.__setattr__(self, "datatype", RDF_LANGSTRING)
        elif self.datatype == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal requires a language tag")

    def n3(self) -> str:
        quoted = '"' + _escape_string(self.lexical) + '"'
        if self.lang is not None:
            return quoted + "@" + self.lang
        if self.datatype == XSD_STRING:
            return quoted
        return quoted + "^^<" + _escape_iri(self.datatype) + ">"

    def __str__(self):
        return self.n3()


Node = Union[IRI, BNode, Literal]


class Triple(NamedTuple):
    s: Node
    p: IRI
    o: Node

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."


def triple(s: Node, p: IRI, o: Node) -> Triple:
    """Build a triple, enforcing RDF positional constraints."""
    if isinstance(s, Literal):
        raise ValueError(f"literal in subject position: {s.n3()}")
    if not isinstance(p, IRI):
        raise ValueError(f"predicate must be an IRI: {p!r}")
    return Triple(s, p, o)


class Graph:
    """Immutable set of triples with subject, predicate and object indexes."""

    __slots__ = ("_triples", "_sp", "_po", "_by_p", "_by_o", "_nodes")

    def __init__(self, triples: Iterable[Triple] = ()):
        ts = frozenset(triple(*t) if not isinstance(t, Triple) else t for t in triples)
        for t in ts:
            if isinstance(t.s, Literal) or not isinstance(t.p, IRI):
                raise ValueError(f"ill-formed triple {t!r}")
        self._triples = ts
        sp: dict = {}
        po: dict = {}
        by_o: dict = {}
        for s, p, o in ts:
            sp.setdefault(s, {}).setdefault(p, set()).add(o)
            po.setdefault(p, {}).setdefault(o, set()).add(s)
            by_o.setdefault(o, set()).add((s, p))
        self._sp = sp
        self._po = po
        self._by_o = by_o
        self._by_p = None
        self._nodes = None

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self):
        return len(self._triples)

    def __contains__(self, t) -> bool:
        return t in self._triples

    def __eq__(self, other):
        if isinstance(other, Graph):
            return self._triples == other._triples
        if isinstance(other, (set, frozenset)):
            return self._triples == other
        return NotImplemented

    def __hash__(self):
        return hash(self._triples)

    def __le__(self, other: "Graph") -> bool:
        return self._triples <= _triple_set(other)

    def __or__(self, other: "Graph") -> "Graph":
        return Graph(self._triples | _triple_set(other))

    def __repr__(self):
        return f"Graph({len(self)} triples)"

    @property
    def triples(self) -> frozenset:
        return self._triples

    def nodes(self) -> frozenset:
        """N(G): every subject and object."""
        if self._nodes is None:
            self._nodes = frozenset(self._sp) | frozenset(self._by_o)
        return self._nodes

    def objects(self, s: Node, p: IRI) -> frozenset:
        return frozenset(self._sp.get(s, {}).get(p, ()))

    def subjects(self, p: IRI, o: Node) -> frozenset:
        return frozenset(self._po.get(p, {}).get(o, ()))

    def has(self, s: Node, p: IRI, o: Node) -> bool:
        return o in self._sp.get(s, {}).get(p, ())

    def outgoing(self, s: Node) -> Iterator[Triple]:
        for p, objs in self._sp.get(s, {}).items():
            for o in objs:
                yield Triple(s, p, o)

    def incoming(self, o: Node) -> Iterator[Triple]:
        for s, p in self._by_o.get(o, ()):
            yield Triple(s, p, o)

    def predicates(self) -> frozenset:
        return frozenset(self._po)

    def with_predicate(self, p: IRI) -> Iterator[Triple]:
        for o, subs in self._po.get(p, {}).items():
            for s in subs:
                yield Triple(s, p, o)

    # raw index access for hot loops
    def _objects_raw(self, s, p):
        return self._sp.get(s, {}).get(p, ())

    def _subjects_raw(self, p, o):
        return self._po.get(p, {}).get(o, ())


EMPTY = Graph()


def _triple_set(g) -> frozenset:
    return g.triples if isinstance(g, Graph) else frozenset(g)


# --- N-Triples ---------------------------------------------------------------


class RDFSyntaxError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_RE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", re.S)


def unescape(s: str) -> str:
    def repl(m):
        esc = m.group(1)
        if esc[0] in "uU" and len(esc) > 1:
            return chr(int(esc[1:], 16))
        if esc in _ECHAR:
            return _ECHAR[esc]
        raise ValueError(f"invalid escape \\{esc}")

    return _ESCAPE_RE.sub(repl, s)


def _escape_string(s: str) -> str:
    return (
        s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
    )


def _escape_iri(s: str) -> str:
    out = []
    for ch in s:
        if ch in '<>"{}|^`\\' or ord(ch) <= 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


_NT_TOKEN = re.compile(
    r"""
    \s*(?:
      (?P<iri><(?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>)
    | (?P<bnode>_:[A-Za-z0-9_\u00C0-\uFFFF](?:[A-Za-z0-9_.\-\u00B7\u00C0-\uFFFF]*[A-Za-z0-9_\-\u00B7\u00C0-\uFFFF])?)
    | (?P<lit>"(?:[^"\\\n\r]|\\.)*")
      (?:@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^(?P<dt><(?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>))?
    | (?P<dot>\.)
    | (?P<comment>\#.*)
    )""",
    re.X,
)


def _nt_terms(line: str, lineno: int) -> list:
    pos, terms = 0, []
    n = len(line)
    while pos < n:
        if line[pos:].strip() == "":
            break
        m = _NT_TOKEN.match(line, pos)
        if not m or m.end() == pos:
            raise RDFSyntaxError(f"unexpected input at column {pos + 1}: {line[pos:pos + 20]!r}", lineno)
        pos = m.end()
        if m.group("comment") is not None:
            break
        try:
            if m.group("iri"):
                terms.append(IRI(unescape(m.group("iri")[1:-1])))
            elif m.group("bnode"):
                terms.append(BNode(m.group("bnode")[2:]))
            elif m.group("lit"):
                lex = unescape(m.group("lit")[1:-1])
                if m.group("lang"):
                    terms.append(Literal(lex, lang=m.group("lang")))
                elif m.group("dt"):
                    terms.append(Literal(lex, unescape(m.group("dt")[1:-1])))
                else:
                    terms.append(Literal(lex))
            else:
                terms.append(".")
        except ValueError as e:
            raise RDFSyntaxError(str(e), lineno) from None
    return terms


_EOL = re.compile(r"\r\n|\n|\r")


def parse_ntriples(text: str) -> Graph:
    triples = []
    # only CR and LF end lines; str.splitlines would also split on U+0085 etc.
    for lineno, line in enumerate(_EOL.split(text), start=1):
        terms = _nt_terms(line, lineno)
        if not terms:
            continue
        if len(terms) != 4 or terms[3] != ".":
            raise RDFSyntaxError("expected subject predicate object '.'", lineno)
        s, p, o = terms[:3]
        if isinstance(s, Literal):
            raise RDFSyntaxError("literal subject", lineno)
        if not isinstance(s, (IRI, BNode)) or not isinstance(p, IRI) or o == ".":
            raise RDFSyntaxError("ill-formed triple", lineno)
        triples.append(Triple(s, p, o))
    return Graph(triples)


def serialize_canonical(g: Iterable[Triple]) -> str:
    """Sorted N-Triples, one triple per line."""
    return "".join(line + "\n" for line in sorted(t.n3() for t in g))


# --- literal order and language equivalence ----------------------------------


class Order(enum.Enum):
    LESS = "LessThan"
    EQUAL = "Equal"
    GREATER = "GreaterThan"
    INCOMPARABLE = "Incomparable"


_INTEGER_TYPES = {
    "integer", "int", "long", "short", "byte", "nonNegativeInteger", "positiveInteger",
    "negativeInteger", "nonPositiveInteger", "unsignedLong", "unsignedInt",
    "unsignedShort", "unsignedByte",
}
NUMERIC_TYPES = frozenset(XSD + t for t in _INTEGER_TYPES | {"decimal", "float", "double"})

_INT_RE = re.compile(r"[+-]?[0-9]+")
_DEC_RE = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)")
_DBL_RE = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?|[+-]?INF|NaN")
_DT_RE = re.compile(
    r"(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})T([0-9]{2}):([0-9]{2}):([0-9]{2})(\.[0-9]+)?(Z|[+-][0-9]{2}:[0-9]{2})?"
)
_DATE_RE = re.compile(r"(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})(Z|[+-][0-9]{2}:[0-9]{2})?")


def _tz(s):
    if s is None:
        return None
    if s == "Z":
        return timezone.utc
    sign = -1 if s[0] == "-" else 1
    return timezone(sign * timedelta(hours=int(s[1:3]), minutes=int(s[4:6])))


def _value(lit: Literal):
    """(family, comparable value) or None when the lexical form is not in the value space."""
    dt, lex = lit.datatype, lit.lexical.strip()
    if dt in NUMERIC_TYPES:
        local = dt[len(XSD):]
        if local in _INTEGER_TYPES:
            return ("numeric", Decimal(lex)) if _INT_RE.fullmatch(lex) else None
        if local == "decimal":
            return ("numeric", Decimal(lex)) if _DEC_RE.fullmatch(lex) else None
        if not _DBL_RE.fullmatch(lex):
            return None
        v = float(lex)
        return None if v != v else ("numeric", v)
    if dt == XSD_STRING:
        return ("string", lit.lexical)
    if dt == XSD + "dateTime":
        m = _DT_RE.fullmatch(lex)
        if not m:
            return None
        y, mo, d, h, mi, s, frac, tz = m.groups()
        try:
            extra = timedelta(days=1) if h == "24" else timedelta(0)
            v = datetime(int(y), int(mo), int(d), 0 if h == "24" else int(h), int(mi), int(s),
                         tzinfo=_tz(tz)) + extra
        except ValueError:
            return None
        frac_v = Decimal(frac) if frac else Decimal(0)
        return ("dateTime-tz" if tz else "dateTime", (v, frac_v))
    if dt == XSD + "date":
        m = _DATE_RE.fullmatch(lex)
        if not m:
            return None
        y, mo, d, tz = m.groups()
        try:
            v = date(int(y), int(mo), int(d))
        except ValueError:
            return None
        if tz:
            return ("date-tz", datetime(v.year, v.month, v.day, tzinfo=_tz(tz)))
        return ("date", v)
    return None


def compare_literals(l1: Node, l2: Node) -> Order:
    """Compare two nodes under the literal order; non-literals are incomparable."""
    if not isinstance(l1, Literal) or not isinstance(l2, Literal):
        return Order.INCOMPARABLE
    try:
        v1, v2 = _value(l1), _value(l2)
    except (InvalidOperation, ValueError, OverflowError):
        return Order.INCOMPARABLE
    if v1 is None or v2 is None or v1[0] != v2[0]:
        return Order.INCOMPARABLE
    a, b = v1[1], v2[1]
    if a < b:
        return Order.LESS
    if a == b:
        return Order.EQUAL
    return Order.GREATER


def lang_equiv(l1: Node, l2: Node) -> bool:
    return (
        isinstance(l1, Literal)
        and isinstance(l2, Literal)
        and l1.lang is not None
        and l2.lang is not None
        and l1.lang.lower() == l2.lang.lower()
    )
