"""Translation of SHACL shapes graphs into formal schemas."""
from __future__ import annotations

from .paths import Id, Inverse, Opt, PathExpr, Prop, Seq, Star, alt, seq
from .rdf import RDF, SH, XSD, Graph, IRI, Literal, Node
from .shapes import (
    BOTTOM, CLASS_PATH, TOP, Closed, Datatype, Disj, Eq, ForAll, GeqN, HasShape, HasValue,
    LanguageTag, LeqN, LessThan, LessThanEq, MaxExclusive, MaxInclusive, MaxLength,
    MinExclusive, MinInclusive, MinLength, NodeKind, Not, Pattern, Schema, Shape,
    ShapeDefinition, Test, Top, UniqueLang, conjunction, disjunction,
)


class MalformedShapesGraph(ValueError):
    pass


class MalformedPath(MalformedShapesGraph):
    pass


class RedundantCardinalityOnNodeShape(MalformedShapesGraph):
    pass


def sh(local: str) -> IRI:
    return IRI(SH + local)


RDF_TYPE = IRI(RDF + "type")
RDF_FIRST = IRI(RDF + "first")
RDF_REST = IRI(RDF + "rest")
RDF_NIL = IRI(RDF + "nil")
TRUE = Literal("true", XSD + "boolean")

_NODE_KINDS = {
    "IRI": ("iri",),
    "Literal": ("literal",),
    "BlankNode": ("blank",),
    "BlankNodeOrIRI": ("blank", "iri"),
    "BlankNodeOrLiteral": ("blank", "literal"),
    "IRIOrLiteral": ("iri", "literal"),
}
_RANGE = {
    "minExclusive": MinExclusive,
    "minInclusive": MinInclusive,
    "maxExclusive": MaxExclusive,
    "maxInclusive": MaxInclusive,
}
_TARGETS = ("targetNode", "targetClass", "targetSubjectsOf", "targetObjectsOf")
_SHAPE_REFS = ("node", "not", "qualifiedValueShape", "property")
_SHAPE_LISTS = ("and", "or", "xone")
_NODE_SHAPE_FORBIDDEN = (
    "minCount", "maxCount", "qualifiedValueShape", "qualifiedMinCount", "qualifiedMaxCount",
    "qualifiedValueShapesDisjoint", "uniqueLang",
)


def _conj(parts) -> Shape:
    """Conjunction that drops Top conjuncts."""
    return conjunction(*[p for p in parts if not isinstance(p, Top)])


class ShapesGraphView:
    """A shapes graph with its node-shape and property-shape name sets."""

    def __init__(self, g: Graph, strict: bool = False):
        self.g = g
        declared_node = set(g.subjects(RDF_TYPE, sh("NodeShape")))
        declared_prop = set(g.subjects(RDF_TYPE, sh("PropertyShape")))
        shapes = set(declared_node) | declared_prop
        shapes |= {t.s for t in g.with_predicate(sh("path"))}
        for k in _TARGETS:
            shapes |= {t.s for t in g.with_predicate(sh(k))}
        for k in _SHAPE_REFS:
            shapes |= {t.o for t in g.with_predicate(sh(k))}
        for k in _SHAPE_LISTS:
            for t in g.with_predicate(sh(k)):
                shapes |= set(self.list_items(t.o))
        shapes = {s for s in shapes if not isinstance(s, Literal)}
        if strict:
            missing = shapes - declared_node - declared_prop
            if missing:
                names = ", ".join(sorted(n.n3() for n in missing))
                raise MalformedShapesGraph(
                    f"shapes not declared sh:NodeShape or sh:PropertyShape: {names}"
                )
        prop_shapes = set(declared_prop)
        prop_shapes |= {t.o for t in g.with_predicate(sh("property"))}
        prop_shapes |= {s for s in shapes if g.objects(s, sh("path"))}
        bad = declared_node & prop_shapes
        if bad:
            names = ", ".join(sorted(n.n3() for n in bad))
            raise MalformedShapesGraph(f"node shapes may not have sh:path or be property shapes: {names}")
        self.property_shapes = prop_shapes
        self.node_shapes = shapes - prop_shapes

    def d(self, x: Node, local: str) -> list:
        """Objects of (x, sh:local, _), in a deterministic order."""
        return sorted(self.g.objects(x, sh(local)), key=lambda n: n.n3())

    def list_items(self, head: Node) -> list:
        items, seen = [], set()
        node = head
        while node != RDF_NIL:
            if node in seen:
                raise MalformedShapesGraph(f"cyclic RDF list at {head.n3()}")
            seen.add(node)
            firsts = self.g.objects(node, RDF_FIRST)
            rests = self.g.objects(node, RDF_REST)
            if len(firsts) != 1 or len(rests) != 1:
                raise MalformedShapesGraph(f"malformed RDF list at {node.n3()}")
            items.append(next(iter(firsts)))
            node = next(iter(rests))
        return items

    def is_list(self, node: Node) -> bool:
        return node == RDF_NIL or bool(self.g.objects(node, RDF_FIRST))


def translate_path(node: Node, view: ShapesGraphView) -> PathExpr:
    g = view.g
    if isinstance(node, IRI) and node != RDF_NIL:
        return Prop(node)
    if isinstance(node, Literal):
        raise MalformedPath(f"literal used as a path: {node.n3()}")
    if view.is_list(node):
        try:
            items = view.list_items(node)
        except MalformedShapesGraph as e:
            raise MalformedPath(str(e)) from None
        if len(items) < 2:
            raise MalformedPath(f"sequence path {node.n3()} needs at least two members")
        return seq(*[translate_path(i, view) for i in items])
    kinds = {
        "inversePath": lambda y: Inverse(translate_path(y, view)),
        "zeroOrMorePath": lambda y: Star(translate_path(y, view)),
        "oneOrMorePath": lambda y: (lambda e: Seq(e, Star(e)))(translate_path(y, view)),
        "zeroOrOnePath": lambda y: Opt(translate_path(y, view)),
    }
    found = []
    for k, build in kinds.items():
        for y in g.objects(node, sh(k)):
            found.append(build(y))
    for y in g.objects(node, sh("alternativePath")):
        try:
            items = view.list_items(y)
        except MalformedShapesGraph as e:
            raise MalformedPath(str(e)) from None
        if len(items) < 2:
            raise MalformedPath(f"alternative path {node.n3()} needs at least two members")
        found.append(alt(*[translate_path(i, view) for i in items]))
    if len(found) != 1:
        raise MalformedPath(f"{node.n3()} is not a well-formed property path")
    return found[0]


def translate_target(view: ShapesGraphView, x: Node) -> Shape:
    parts = []
    for y in view.d(x, "targetNode"):
        parts.append(HasValue(y))
    for y in view.d(x, "targetClass"):
        parts.append(GeqN(1, CLASS_PATH, HasValue(y)))
    for y in view.d(x, "targetSubjectsOf"):
        parts.append(GeqN(1, Prop(_iri(y, "sh:targetSubjectsOf")), TOP))
    for y in view.d(x, "targetObjectsOf"):
        parts.append(GeqN(1, Inverse(Prop(_iri(y, "sh:targetObjectsOf"))), TOP))
    return disjunction(*parts) if parts else BOTTOM


def _iri(n: Node, what: str) -> IRI:
    if not isinstance(n, IRI):
        raise MalformedShapesGraph(f"{what} expects an IRI, got {n.n3()}")
    return n


def _nat(n: Node, what: str) -> int:
    if not isinstance(n, Literal):
        raise MalformedShapesGraph(f"{what} expects an integer literal")
    try:
        v = int(n.lexical)
    except ValueError:
        raise MalformedShapesGraph(f"{what} expects an integer, got {n.n3()}") from None
    if v < 0:
        raise MalformedShapesGraph(f"{what} must be non-negative")
    return v


class _Translator:
    def __init__(self, view: ShapesGraphView):
        self.view = view

    def is_true(self, x, local) -> bool:
        return TRUE in self.view.g.objects(x, sh(local))

    # components shared by node and property shapes
    def t_shape(self, x):
        refs = self.view.d(x, "node") + self.view.d(x, "property")
        return _conj(HasShape(y) for y in refs)

    def t_logic(self, x):
        v = self.view
        parts = [Not(HasShape(y)) for y in v.d(x, "not")]
        for y in v.d(x, "and"):
            parts.append(_conj(HasShape(z) for z in v.list_items(y)))
        for y in v.d(x, "or"):
            parts.append(disjunction(*[HasShape(z) for z in v.list_items(y)]))
        for y in v.d(x, "xone"):
            members = v.list_items(y)
            options = []
            for a in members:
                others = [Not(HasShape(b)) for b in members if b != a]
                options.append(conjunction(HasShape(a), *others))
            parts.append(disjunction(*options))
        return _conj(parts)

    def t_tests(self, x):
        v = self.view
        parts = []
        for y in v.d(x, "datatype"):
            parts.append(Test(Datatype(_iri(y, "sh:datatype"))))
        for y in v.d(x, "nodeKind"):
            local = y.value[len(SH):] if isinstance(y, IRI) and y.value.startswith(SH) else None
            if local not in _NODE_KINDS:
                raise MalformedShapesGraph(f"unknown sh:nodeKind {y.n3()}")
            parts.append(disjunction(*[Test(NodeKind(k)) for k in _NODE_KINDS[local]]))
        for k, cls in _RANGE.items():
            for y in v.d(x, k):
                if not isinstance(y, Literal):
                    raise MalformedShapesGraph(f"sh:{k} expects a literal")
                parts.append(Test(cls(y)))
        for y in v.d(x, "minLength"):
            parts.append(Test(MinLength(_nat(y, "sh:minLength"))))
        for y in v.d(x, "maxLength"):
            parts.append(Test(MaxLength(_nat(y, "sh:maxLength"))))
        for y in v.d(x, "pattern"):
            if not isinstance(y, Literal):
                raise MalformedShapesGraph("sh:pattern expects a literal")
            try:
                parts.append(Test(Pattern(y.lexical)))
            except ValueError as e:
                raise MalformedShapesGraph(str(e)) from None
        for y in v.d(x, "class"):
            parts.append(GeqN(1, CLASS_PATH, HasValue(y)))
        return _conj(parts)

    def t_value(self, x):
        return _conj(HasValue(y) for y in self.view.d(x, "hasValue"))

    def t_in(self, x):
        return _conj(
            disjunction(*[HasValue(a) for a in self.view.list_items(y)]) for y in self.view.d(x, "in")
        )

    def t_closed(self, x):
        if not self.is_true(x, "closed"):
            return TOP
        v = self.view
        allowed = set()
        for y in v.d(x, "property"):
            for p in v.g.objects(y, sh("path")):
                if not isinstance(p, IRI):
                    raise MalformedShapesGraph(
                        f"closed shape {x.n3()} has a property shape with a complex path"
                    )
                allowed.add(p)
        for y in v.d(x, "ignoredProperties"):
            allowed |= {_iri(i, "sh:ignoredProperties") for i in v.list_items(y)}
        return Closed(frozenset(allowed))

    def t_languagein(self, x):
        return _conj(
            disjunction(*[Test(LanguageTag(_lang(t))) for t in self.view.list_items(y)])
            for y in self.view.d(x, "languageIn")
        )

    def t_pair_id(self, x):
        v = self.view
        if v.d(x, "lessThan") or v.d(x, "lessThanOrEquals"):
            return BOTTOM
        parts = [Eq(Id, _iri(p, "sh:equals")) for p in v.d(x, "equals")]
        parts += [Disj(Id, _iri(p, "sh:disjoint")) for p in v.d(x, "disjoint")]
        return _conj(parts)

    # node shapes
    def nodeshape(self, x):
        for k in _NODE_SHAPE_FORBIDDEN:
            if self.view.d(x, k):
                raise RedundantCardinalityOnNodeShape(
                    f"node shape {x.n3()} uses sh:{k}; it is redundant on node shapes and not accepted"
                )
        return _conj([
            self.t_shape(x), self.t_logic(x), self.t_tests(x), self.t_value(x), self.t_in(x),
            self.t_closed(x), self.t_pair_id(x), self.t_languagein(x),
        ])

    # property shapes
    def propertyshape(self, x):
        paths = self.view.d(x, "path")
        if len(paths) != 1:
            raise MalformedShapesGraph(f"property shape {x.n3()} must have exactly one sh:path")
        e = translate_path(paths[0], self.view)
        return _conj([
            self.t_card(e, x), self.t_pair(e, x), self.t_qual(e, x), self.t_all(e, x),
            self.t_uniquelang(e, x),
        ])

    def t_card(self, e, x):
        v = self.view
        parts = [GeqN(_nat(n, "sh:minCount"), e, TOP) for n in v.d(x, "minCount")]
        parts += [LeqN(_nat(n, "sh:maxCount"), e, TOP) for n in v.d(x, "maxCount")]
        return _conj(parts)

    def t_pair(self, e, x):
        v = self.view
        parts = [Eq(e, _iri(p, "sh:equals")) for p in v.d(x, "equals")]
        parts += [Disj(e, _iri(p, "sh:disjoint")) for p in v.d(x, "disjoint")]
        parts += [LessThan(e, _iri(p, "sh:lessThan")) for p in v.d(x, "lessThan")]
        parts += [LessThanEq(e, _iri(p, "sh:lessThanOrEquals")) for p in v.d(x, "lessThanOrEquals")]
        return _conj(parts)

    def t_qual(self, e, x):
        v = self.view
        qs = v.d(x, "qualifiedValueShape")
        qmin = [_nat(n, "sh:qualifiedMinCount") for n in v.d(x, "qualifiedMinCount")]
        qmax = [_nat(n, "sh:qualifiedMaxCount") for n in v.d(x, "qualifiedMaxCount")]
        siblings: list = []
        if self.is_true(x, "qualifiedValueShapesDisjoint"):
            sibl = set()
            for parent in v.g.subjects(sh("property"), x):
                for y in v.g.objects(parent, sh("property")):
                    sibl |= set(v.g.objects(y, sh("qualifiedValueShape")))
            siblings = sorted(sibl - set(qs), key=lambda n: n.n3())
        parts = []
        for y in qs:
            body = conjunction(HasShape(y), *[Not(HasShape(s)) for s in siblings])
            parts += [GeqN(z, e, body) for z in qmin]
            parts += [LeqN(z, e, body) for z in qmax]
        return _conj(parts)

    def t_all(self, e, x):
        inner = _conj([
            self.t_shape(x), self.t_logic(x), self.t_tests(x), self.t_in(x), self.t_closed(x),
            self.t_languagein(x),
        ])
        parts = [] if isinstance(inner, Top) else [ForAll(e, inner)]
        if self.view.d(x, "hasValue"):
            parts.append(GeqN(1, e, self.t_value(x)))
        return _conj(parts)

    def t_uniquelang(self, e, x):
        return UniqueLang(e) if self.is_true(x, "uniqueLang") else TOP


def _lang(n: Node) -> str:
    if not isinstance(n, Literal):
        raise MalformedShapesGraph("sh:languageIn members must be literals")
    return n.lexical


def translate_shapes_graph(sg: Graph, strict: bool = False) -> Schema:
    """Build a schema with one definition per node shape and per property shape."""
    view = ShapesGraphView(sg, strict=strict)
    tr = _Translator(view)
    defs = []
    for x in sorted(view.node_shapes, key=lambda n: n.n3()):
        defs.append(ShapeDefinition(x, tr.nodeshape(x), translate_target(view, x)))
    for x in sorted(view.property_shapes, key=lambda n: n.n3()):
        defs.append(ShapeDefinition(x, tr.propertyshape(x), translate_target(view, x)))
    return Schema(tuple(defs))
