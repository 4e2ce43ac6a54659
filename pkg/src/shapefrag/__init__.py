"""Shape fragments: the subgraph of an RDF graph that witnesses conformance to shapes."""
from .conformance import Evaluator, ValidationReport, conforms, target_nodes, validate
from .fragments import FragmentResult, frag_schema, frag_shapes
from .neighborhood import NeighborhoodBuilder, neighborhood
from .paths import Alt, Id, Inverse, Opt, Prop, Seq, Star, eval_path, path_graph
from .rdf import BNode, Graph, IRI, Literal, Triple, parse_ntriples, serialize_canonical
from .shacl import translate_shapes_graph
from .shapes import (
    And, Bottom, Closed, Disj, Eq, ForAll, GeqN, HasShape, HasValue, LeqN, LessThan,
    LessThanEq, Not, Or, Schema, ShapeDefinition, Test, Top, UniqueLang, nnf,
)
from .syntax import parse_document, parse_schema, parse_shape, print_shape
from .turtle import parse_turtle
