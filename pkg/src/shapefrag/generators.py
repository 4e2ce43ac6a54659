"""Seeded random instances: small graphs, paths, shapes and schemas.

Everything draws from an explicit ``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .paths import Alt, Id, Inverse, Opt, PathExpr, Prop, Seq, Star
from .rdf import XSD, Graph, IRI, Literal, Triple
from .shapes import (
    BOTTOM, CLASS_PATH, TOP, And, Closed, Datatype, Disj, Eq, ForAll, GeqN, HasShape,
    HasValue, LeqN, LessThan, LessThanEq, MinInclusive, NodeKind, Not, Or, Schema, Shape,
    ShapeDefinition, Test, UniqueLang, disjunction,
)

EX = "http://example.org/"


@dataclass
class Vocabulary:
    """Node and property names random instances are drawn from."""

    n_nodes: int = 6
    properties: tuple = ("p", "q", "r")
    literals: bool = True
    classes: tuple = ("C", "D")

    nodes: list = field(init=False)
    props: list = field(init=False)
    values: list = field(init=False)

    def __post_init__(self):
        self.nodes = [IRI(f"{EX}n{i}") for i in range(self.n_nodes)]
        self.props = [IRI(EX + p) for p in self.properties]
        self.values = []
        if self.literals:
            self.values = [
                Literal("1", XSD + "integer"),
                Literal("2", XSD + "integer"),
                Literal("a", lang="en"),
                Literal("b", lang="EN"),
                Literal("c", lang="fr"),
            ]


RDF_TYPE = CLASS_PATH.first.iri
SUBCLASS = CLASS_PATH.second.path.iri


def random_graph(rng: random.Random, voc: Vocabulary, max_triples: int = 12) -> Graph:
    triples = set()
    for _ in range(rng.randint(0, max_triples)):
        s = rng.choice(voc.nodes)
        roll = rng.random()
        if roll < 0.1 and voc.classes:
            triples.add(Triple(s, RDF_TYPE, IRI(EX + rng.choice(voc.classes))))
            continue
        if roll < 0.13 and len(voc.classes) > 1:
            a, b = rng.sample(voc.classes, 2)
            triples.add(Triple(IRI(EX + a), SUBCLASS, IRI(EX + b)))
            continue
        p = rng.choice(voc.props)
        if voc.values and rng.random() < 0.2:
            o = rng.choice(voc.values)
        else:
            o = rng.choice(voc.nodes)
        triples.add(Triple(s, p, o))
    return Graph(triples)


def random_path(rng: random.Random, voc: Vocabulary, depth: int = 2) -> PathExpr:
    if depth <= 0 or rng.random() < 0.4:
        return Prop(rng.choice(voc.props))
    kind = rng.choice(("inv", "seq", "alt", "star", "opt"))
    sub = lambda: random_path(rng, voc, depth - 1)
    if kind == "inv":
        return Inverse(sub())
    if kind == "seq":
        return Seq(sub(), sub())
    if kind == "alt":
        return Alt(sub(), sub())
    if kind == "star":
        return Star(sub())
    return Opt(sub())


def random_constant(rng: random.Random, voc: Vocabulary):
    pool = voc.nodes + voc.values
    return rng.choice(pool)


def random_atom(rng: random.Random, voc: Vocabulary, names=()) -> Shape:
    kinds = ["top", "hasValue", "test", "eq", "disj", "closed", "lt", "lte", "ulang"]
    if names:
        kinds.append("hasShape")
    kind = rng.choice(kinds)
    path = lambda: Id if rng.random() < 0.25 else random_path(rng, voc, 1)
    if kind == "top":
        return TOP
    if kind == "hasValue":
        return HasValue(random_constant(rng, voc))
    if kind == "test":
        return Test(rng.choice([
            NodeKind("iri"), NodeKind("literal"), Datatype(IRI(XSD + "integer")),
            MinInclusive(Literal("2", XSD + "integer")),
        ]))
    if kind == "eq":
        return Eq(path(), rng.choice(voc.props))
    if kind == "disj":
        return Disj(path(), rng.choice(voc.props))
    if kind == "closed":
        return Closed(frozenset(rng.sample(voc.props, rng.randint(0, len(voc.props)))))
    if kind == "lt":
        return LessThan(random_path(rng, voc, 1), rng.choice(voc.props))
    if kind == "lte":
        return LessThanEq(random_path(rng, voc, 1), rng.choice(voc.props))
    if kind == "ulang":
        return UniqueLang(random_path(rng, voc, 1))
    return HasShape(rng.choice(list(names)))


def random_shape(rng: random.Random, voc: Vocabulary, depth: int = 3, names=()) -> Shape:
    """A random shape (not necessarily in NNF) of nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.3:
        return random_atom(rng, voc, names)
    kind = rng.choice(("not", "and", "or", "geq", "leq", "forall"))
    sub = lambda: random_shape(rng, voc, depth - 1, names)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    e = random_path(rng, voc, 2)
    if kind == "geq":
        return GeqN(rng.randint(0, 2), e, sub())
    if kind == "leq":
        return LeqN(rng.randint(0, 2), e, sub())
    return ForAll(e, sub())


def random_target(rng: random.Random, voc: Vocabulary) -> Shape:
    kind = rng.choice(("node", "class", "subjects", "objects", "mixed"))
    if kind == "node":
        return disjunction(*[HasValue(n) for n in rng.sample(voc.nodes, rng.randint(1, 3))])
    if kind == "class":
        return GeqN(1, CLASS_PATH, HasValue(IRI(EX + rng.choice(voc.classes))))
    if kind == "subjects":
        return GeqN(1, Prop(rng.choice(voc.props)), TOP)
    if kind == "objects":
        return GeqN(1, Inverse(Prop(rng.choice(voc.props))), TOP)
    return Or(random_target(rng, voc), random_target(rng, voc))


def random_schema(rng: random.Random, voc: Vocabulary, size: int = 3, depth: int = 2) -> Schema:
    """A nonrecursive schema: definition i may only reference definitions j < i."""
    defs = []
    names = []
    for i in range(size):
        name = IRI(f"{EX}S{i}")
        shape = random_shape(rng, voc, depth, tuple(names))
        defs.append(ShapeDefinition(name, shape, random_target(rng, voc)))
        names.append(name)
    return Schema(tuple(defs))


def retarget_to_conforming(rng: random.Random, h: Schema, g: Graph) -> Schema:
    """Keep each target if all its nodes conform, else target a subset of conforming nodes.

    The result is a schema ``g`` conforms to, with admitted targets.
    """
    from .conformance import Evaluator

    ev = Evaluator(h, g)
    defs = []
    for d in h:
        targets = ev.target_nodes(d.target)
        good = sorted((a for a in g.nodes() if ev.conforms(a, d.shape)), key=lambda n: n.n3())
        if all(ev.conforms(a, d.shape) for a in targets):
            target = d.target
        elif good:
            picked = rng.sample(good, rng.randint(1, min(3, len(good))))
            target = disjunction(*[HasValue(a) for a in picked])
        else:
            target = BOTTOM
        defs.append(ShapeDefinition(d.name, d.shape, target))
    return Schema(tuple(defs))


# ---- a schema.org style benchmark: offers, addresses, opening hours ------------------

SDO = "http://schema.org/"
DATA_NS = "http://example.org/data/"


def _s(local: str) -> IRI:
    return IRI(SDO + local)


def _exactly_one(p: str) -> Shape:
    return And(GeqN(1, Prop(_s(p)), TOP), LeqN(1, Prop(_s(p)), TOP))


def _typed(cls: str) -> Shape:
    return GeqN(1, Prop(RDF_TYPE), HasValue(_s(cls)))


def _all(*props: str) -> list:
    # value node tests are replaced by top, so only the path triples are constrained
    return [ForAll(Prop(_s(p)), TOP) for p in props]


def _conj(parts) -> Shape:
    out = parts[0]
    for s in parts[1:]:
        out = And(out, s)
    return out


def offer_schema() -> Schema:
    """Five class-targeted definitions over schema.org terms, node tests replaced by top."""
    postal = _conj([
        _typed("PostalAddress"), _exactly_one("addressCountry"), _exactly_one("addressLocality"),
        GeqN(1, Prop(_s("postalCode")), TOP), _exactly_one("streetAddress"),
        *_all("addressCountry", "addressRegion", "postalCode", "streetAddress"),
    ])
    hours = _conj([
        _typed("OpeningHourSpecification"), LeqN(1, Prop(_s("description")), TOP),
        *_all("dayOfWeek", "closes", "opens", "validFrom", "validThrough", "description"),
    ])
    item = Or(_typed("Service"), Or(_typed("Product"), _typed("Apartment")))
    offer = _conj([
        _typed("Offer"), _exactly_one("name"), LeqN(1, Prop(_s("description")), TOP),
        _exactly_one("availability"), GeqN(1, Prop(_s("itemOffered")), TOP),
        ForAll(Prop(_s("itemOffered")), item), _exactly_one("price"),
        _exactly_one("priceCurrency"), _exactly_one("url"),
        *_all("name", "description", "availability", "price", "priceCurrency", "url",
              "validFrom", "validThrough"),
    ])
    product = _conj([
        _typed("Product"), _exactly_one("name"), LeqN(1, Prop(_s("brand")), TOP),
        ForAll(Prop(_s("offers")), _typed("Offer")), *_all("name", "brand", "description"),
    ])
    place = _conj([
        _typed("LocalBusiness"), _exactly_one("name"),
        ForAll(Prop(_s("address")), _typed("PostalAddress")),
        ForAll(Prop(_s("openingHoursSpecification")), _typed("OpeningHourSpecification")),
        *_all("name", "telephone"),
    ])
    defs = [
        ("PostalAddressShape", postal, "PostalAddress"),
        ("OpeningHourSpecificationShape", hours, "OpeningHourSpecification"),
        ("OfferShape", offer, "Offer"),
        ("ProductShape", product, "Product"),
        ("LocalBusinessShape", place, "LocalBusiness"),
    ]
    return Schema(tuple(
        ShapeDefinition(IRI(EX + name), shape, GeqN(1, CLASS_PATH, HasValue(_s(cls))))
        for name, shape, cls in defs
    ))


def offer_graph(n_triples: int, seed: int = 0, violation_rate: float = 0.1) -> Graph:
    """About ``n_triples`` triples of offers, products, businesses, addresses and hours.

    A fraction ``violation_rate`` of entities drops or duplicates a required property,
    and about half that fraction of offered items get a type offers may not point to.
    The graph has exactly ``n_triples`` triples; whole entities are kept and the
    remainder is filled with triples about untyped nodes.
    """
    rng = random.Random(seed)
    triples: list = []
    counter = [0]

    def node(kind: str) -> IRI:
        counter[0] += 1
        return IRI(f"{DATA_NS}{kind}{counter[0]}")

    def lit(text: str) -> Literal:
        return Literal(text)

    def add(s, p, o):
        triples.append(Triple(s, _s(p) if isinstance(p, str) else p, o))

    def props(s, required: list, optional: list):
        broken = bool(required) and rng.random() < violation_rate
        drop = rng.choice(required) if broken and rng.random() < 0.5 else None
        dup = rng.choice(required) if broken and drop is None else None
        for p in required:
            if p == drop:
                continue
            add(s, p, lit(f"{p} {counter[0]}"))
            if p == dup:
                add(s, p, lit(f"{p} {counter[0]} again"))
        for p in optional:
            if rng.random() < 0.5:
                add(s, p, lit(f"{p} {counter[0]}"))

    def address() -> IRI:
        a = node("address")
        add(a, RDF_TYPE, _s("PostalAddress"))
        props(a, ["addressCountry", "addressLocality", "postalCode", "streetAddress"], ["addressRegion"])
        return a

    def hours() -> IRI:
        h = node("hours")
        add(h, RDF_TYPE, _s("OpeningHourSpecification"))
        props(h, [], ["dayOfWeek", "closes", "opens", "validFrom", "validThrough", "description"])
        return h

    def product() -> IRI:
        x = node("item")
        if rng.random() < violation_rate / 2:
            kind = "Thing"  # not an acceptable itemOffered type
        else:
            kind = rng.choice(("Product", "Product", "Service", "Apartment"))
        add(x, RDF_TYPE, _s(kind))
        props(x, ["name"], ["brand", "description"])
        return x

    def offer(item: IRI) -> IRI:
        o = node("offer")
        add(o, RDF_TYPE, _s("Offer"))
        add(o, "itemOffered", item)
        props(o, ["name", "availability", "price", "priceCurrency", "url"],
              ["description", "validFrom", "validThrough"])
        add(item, "offers", o)
        return o

    def business():
        b = node("business")
        add(b, RDF_TYPE, _s("LocalBusiness"))
        props(b, ["name"], ["telephone"])
        add(b, "address", address())
        for _ in range(rng.randint(0, 3)):
            add(b, "openingHoursSpecification", hours())
        for _ in range(rng.randint(1, 4)):
            add(b, "makesOffer", offer(product()))

    while True:
        before = len(triples)
        business()
        if len(triples) > n_triples:
            del triples[before:]
            break
    # pad with triples about untyped nodes, which no target selects
    while len(triples) < n_triples:
        add(node("note"), "comment", lit(f"note {counter[0]}"))
    return Graph(triples)
