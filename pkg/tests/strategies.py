"""Hypothesis strategies over the small vocabulary of ``shapefrag.generators``."""
from hypothesis import strategies as st

from shapefrag.generators import EX, Vocabulary
from shapefrag.paths import Alt, Id, Inverse, Opt, Prop, Seq, Star
from shapefrag.rdf import XSD, Graph, IRI, Literal, Triple
from shapefrag.shapes import (
    BOTTOM, TOP, And, Closed, Datatype, Disj, Eq, ForAll, GeqN, HasValue, LeqN, LessThan,
    LessThanEq, MinInclusive, NodeKind, Not, Or, Test, UniqueLang,
)

VOC = Vocabulary(n_nodes=4)

nodes = st.sampled_from(VOC.nodes)
props = st.sampled_from(VOC.props)
values = st.sampled_from(VOC.nodes + VOC.values)

triples = st.builds(Triple, nodes, props, values)
graphs = st.frozensets(triples, max_size=10).map(Graph)

paths = st.recursive(
    props.map(Prop),
    lambda sub: st.one_of(
        sub.map(Inverse),
        st.builds(Seq, sub, sub),
        st.builds(Alt, sub, sub),
        sub.map(Star),
        sub.map(Opt),
    ),
    max_leaves=4,
)

paths_or_id = st.one_of(st.just(Id), paths)

atoms = st.one_of(
    st.just(TOP),
    st.just(BOTTOM),
    values.map(HasValue),
    st.sampled_from([
        Test(NodeKind("iri")), Test(NodeKind("literal")),
        Test(Datatype(IRI(XSD + "integer"))), Test(MinInclusive(Literal("2", XSD + "integer"))),
    ]),
    st.builds(Eq, paths_or_id, props),
    st.builds(Disj, paths_or_id, props),
    st.frozensets(props).map(Closed),
    st.builds(LessThan, paths, props),
    st.builds(LessThanEq, paths, props),
    paths.map(UniqueLang),
)

shapes = st.recursive(
    atoms,
    lambda sub: st.one_of(
        sub.map(Not),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(GeqN, st.integers(0, 2), paths, sub),
        st.builds(LeqN, st.integers(0, 2), paths, sub),
        st.builds(ForAll, paths, sub),
    ),
    max_leaves=5,
)

ex_iris = st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True).map(lambda s: IRI(EX + s))
