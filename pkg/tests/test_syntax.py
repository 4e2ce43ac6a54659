import pytest
from hypothesis import given

from shapefrag.paths import Alt, Id, Inverse, Opt, Prop, Seq, Star
from shapefrag.rdf import BNode, IRI, Literal, XSD
from shapefrag.shapes import (
    BOTTOM, TOP, And, Closed, Disj, Eq, GeqN, HasShape, HasValue, LanguageTag, LeqN,
    LessThan, MinInclusive, MinLength, NodeKind, Not, Or, Pattern, Schema, ShapeDefinition,
    TargetFormError, UniqueLang,
)
from shapefrag.shapes import Test as NodeTestShape
from shapefrag.syntax import (
    ShapeSyntaxError, parse_document, parse_path, parse_schema, parse_shape, print_path,
    print_schema, print_shape,
)

from conftest import DATA, ex
from strategies import paths, shapes


class TestParse:
    def test_geq(self):
        assert parse_shape("geq 1 :author top") == GeqN(1, Prop(ex("author")), TOP)

    def test_negated_disjointness_with_id(self):
        assert parse_shape("not (disj id :friend)") == Not(Disj(Id, ex("friend")))

    def test_phi2_in_nnf(self):
        s = parse_shape("leq 1 :author (leq 0 :type (hasValue :student))")
        assert s == LeqN(1, Prop(ex("author")), LeqN(0, Prop(ex("type")), HasValue(ex("student"))))

    def test_paths(self):
        assert parse_path("seq :p (star (alt :q (inv :r)))") == Seq(
            Prop(ex("p")), Star(Alt(Prop(ex("q")), Inverse(Prop(ex("r")))))
        )
        assert parse_path("opt <http://x/y>") == Opt(Prop(IRI("http://x/y")))

    def test_atoms(self):
        assert parse_shape("closed { :p :q }") == Closed(frozenset({ex("p"), ex("q")}))
        assert parse_shape("closed { }") == Closed(frozenset())
        assert parse_shape("eq id :p") == Eq(Id, ex("p"))
        assert parse_shape("lessThan (seq :p :q) :r") == LessThan(Seq(Prop(ex("p")), Prop(ex("q"))), ex("r"))
        assert parse_shape("uniqueLang :p") == UniqueLang(Prop(ex("p")))
        assert parse_shape("hasShape _:b1") == HasShape(BNode("b1"))
        assert parse_shape("bot") == BOTTOM

    def test_literals_and_tests(self):
        assert parse_shape('hasValue "a"@en') == HasValue(Literal("a", lang="en"))
        assert parse_shape('hasValue "1"^^xsd:integer') == HasValue(Literal("1", XSD + "integer"))
        assert parse_shape('test minIn "2"^^xsd:integer') == NodeTestShape(MinInclusive(Literal("2", XSD + "integer")))
        assert parse_shape("test kind iri") == NodeTestShape(NodeKind("iri"))
        assert parse_shape("test minLen 3") == NodeTestShape(MinLength(3))
        assert parse_shape('test pattern "^a"') == NodeTestShape(Pattern("^a"))
        assert parse_shape('test lang "en"') == NodeTestShape(LanguageTag("en"))

    def test_boolean_connectives(self):
        a, b = HasValue(ex("a")), HasValue(ex("b"))
        assert parse_shape("and (hasValue :a) (or (hasValue :b) (not top))") == And(a, Or(b, Not(TOP)))

    def test_custom_prefix(self):
        assert parse_shape("hasValue foo:x", {"foo": "urn:foo:"}) == HasValue(IRI("urn:foo:x"))

    @pytest.mark.parametrize("text, line, column", [
        ("geq :p top", 1, 5),
        ("geq 1 :p", 1, 9),
        ("frobnicate", 1, 1),
        ("and top\n  (hasValue undeclared:x)", 2, 13),
        ("geq 1 :p top extra", 1, 14),
        ("closed { :p", 1, 12),
        ("test kind thing", 1, 11),
    ])
    def test_errors_have_positions(self, text, line, column):
        with pytest.raises(ShapeSyntaxError) as info:
            parse_shape(text)
        assert (info.value.line, info.value.column) == (line, column)


class TestDocuments:
    def test_definitions_targets_requests(self):
        doc = parse_document(
            "prefix s: <urn:s:>\n"
            "# a comment\n"
            "def s:A = geq 1 :p top target hasValue :a\n"
            "def s:B = hasShape s:A ;\n"
            "request hasShape s:B\n"
        )
        assert [d.name for d in doc.definitions] == [IRI("urn:s:A"), IRI("urn:s:B")]
        assert doc.definitions[0].target == HasValue(ex("a"))
        assert doc.definitions[1].target == BOTTOM
        assert doc.requests == [HasShape(IRI("urn:s:B"))]
        assert doc.prefixes["s"] == "urn:s:"

    def test_arbitrary_targets(self):
        text = (DATA / "authors.shapes").read_text()
        with pytest.raises(TargetFormError):
            parse_schema(text)
        assert len(parse_schema(text, arbitrary_targets=True)) == 2

    def test_schema_round_trip(self):
        h = parse_schema((DATA / "authors.shapes").read_text(), arbitrary_targets=True)
        again = parse_schema(print_schema(h), arbitrary_targets=True)
        assert again == h

    def test_bad_statement(self):
        with pytest.raises(ShapeSyntaxError):
            parse_document("define :a = top")


class TestPrint:
    def test_nested_parentheses(self):
        s = GeqN(1, Seq(Prop(ex("p")), Star(Prop(ex("q")))), Not(HasValue(ex("c"))))
        assert print_shape(s) == "geq 1 (seq :p (star :q)) (not (hasValue :c))"

    def test_unprefixable_iri_printed_in_full(self):
        assert print_shape(HasValue(IRI("urn:x"))) == "hasValue <urn:x>"

    def test_literals(self):
        assert print_shape(HasValue(Literal('a"b', lang="en"))) == 'hasValue "a\\"b"@en'
        assert print_shape(HasValue(Literal("1", XSD + "integer"))) == 'hasValue "1"^^xsd:integer'

    def test_closed_sorted(self):
        assert print_shape(Closed(frozenset({ex("q"), ex("p")}))) == "closed { :p :q }"

    def test_schema(self):
        h = Schema((ShapeDefinition(ex("s"), TOP, HasValue(ex("a"))), ShapeDefinition(ex("t"), BOTTOM)))
        assert print_schema(h) == "def :s = top target hasValue :a\ndef :t = bot\n"


@given(shapes)
def test_print_parse_round_trip(s):
    assert parse_shape(print_shape(s)) == s


@given(paths)
def test_path_round_trip(e):
    assert parse_path(print_path(e)) == e


@given(shapes)
def test_round_trip_without_prefixes(s):
    assert parse_shape(print_shape(s, {}), {}) == s
