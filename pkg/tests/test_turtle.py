import pytest
import rdflib
from rdflib.compare import isomorphic

from shapefrag.rdf import RDF, Literal, XSD, serialize_canonical
from shapefrag.turtle import TurtleError, parse_turtle

from conftest import DATA, ex

PREFIXES = "@prefix : <http://example.org/> .\n@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"


def same_as_rdflib(text: str) -> bool:
    ours = rdflib.Graph().parse(data=serialize_canonical(parse_turtle(text)), format="nt")
    theirs = rdflib.Graph().parse(data=text, format="turtle")
    return isomorphic(ours, theirs)


def test_predicate_object_lists():
    g = parse_turtle(PREFIXES + ":p1 a :WorkshopPaper ; :author :Anne, :Bob, :Alice .")
    assert len(g) == 4
    assert g.objects(ex("p1"), ex("author")) == {ex("Anne"), ex("Bob"), ex("Alice")}


def test_collection_object():
    g = parse_turtle(PREFIXES + ":s :p ( :a :b ) .")
    # (s p _:l1) plus first/rest for each of the two members
    assert len(g) == 5
    assert len([t for t in g if t.p.value in (RDF + "first", RDF + "rest")]) == 4


def test_person_schema_triple_count():
    # Counted by hand: two "a sh:NodeShape" typings, two sh:property links,
    # the targetClass, and three triples in each property node (path,
    # datatype, maxCount / path, minCount, node). That gives 11, not 12.
    g = parse_turtle((DATA / "person_shapes.ttl").read_text())
    assert len(g) == 11


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.ttl")))
def test_data_files_match_rdflib(name):
    assert same_as_rdflib((DATA / name).read_text())


@pytest.mark.parametrize("body", [
    ':a :p "plain", "tagged"@en-US, "typed"^^xsd:date, 42, -3.5, 1e3, true .',
    ':a :p """multi\nline "quoted" text""" .',
    ":a :p 'single' , '''triple single''' .",
    ':a :p [ :q :b ; :r [ :s "deep" ] ] .',
    '[ :q :b ] :p :c .',
    ':a :p () .',
    ':a :p ( 1 ( :x ) [ :q :y ] ) .',
    '_:x :p _:y . _:y :p _:x .',
    'PREFIX ex: <http://example.org/ex#>\nex:a ex:b ex:c .',
    ':a :p "esc \\t \\u00e9 \\"q\\"" .',
    ':a :p :b ; .',
    ':a.b :p :c .',
    '<http://example.org/full> <http://example.org/p> <http://example.org/o> .',
])
def test_constructs_match_rdflib(body):
    assert same_as_rdflib(PREFIXES + body)


def test_numeric_literals_get_xsd_datatypes():
    g = parse_turtle(PREFIXES + ":a :p 42, 4.2, 4e2, false .")
    got = {t.o.datatype for t in g}
    assert got == {XSD + "integer", XSD + "decimal", XSD + "double", XSD + "boolean"}


def test_language_tag_kept():
    (t,) = parse_turtle(PREFIXES + ':a :p "x"@EN .')
    assert t.o == Literal("x", lang="EN")


@pytest.mark.parametrize("bad, feature", [
    (":a :p :b", None),
    (":a :p .", None),
    ("undeclared:a :p :b .", "prefix"),
    ("@base <http://x/> .", "@base"),
    (":a :p << :x :y :z >> .", "RDF-star"),
    (":g { :a :p :b }", "graph"),
])
def test_errors(bad, feature):
    with pytest.raises(TurtleError) as info:
        parse_turtle(PREFIXES + bad)
    if feature:
        assert feature in str(info.value)
