"""Shape expressions, node tests, negation normal form and schemas."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .paths import PathExpr, PathOrId, Prop, Inverse, Seq, Star, path_properties
from .rdf import BNode, IRI, Literal, Node, Order, RDF, RDFS, compare_literals

ShapeName = Union[IRI, BNode]


# --- node tests ----------------------------------------------------------------


class NodeTest:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class NodeKind(NodeTest):
    kind: str  # "iri" | "literal" | "blank"

    def __post_init__(self):
        if self.kind not in ("iri", "literal", "blank"):
            raise ValueError(f"unknown node kind {self.kind!r}")


@dataclass(frozen=True, slots=True)
class Datatype(NodeTest):
    datatype: IRI


@dataclass(frozen=True, slots=True)
class MinExclusive(NodeTest):
    bound: Literal


@dataclass(frozen=True, slots=True)
class MinInclusive(NodeTest):
    bound: Literal


@dataclass(frozen=True, slots=True)
class MaxExclusive(NodeTest):
    bound: Literal


@dataclass(frozen=True, slots=True)
class MaxInclusive(NodeTest):
    bound: Literal


@dataclass(frozen=True, slots=True)
class MinLength(NodeTest):
    n: int


@dataclass(frozen=True, slots=True)
class MaxLength(NodeTest):
    n: int


@dataclass(frozen=True, slots=True)
class Pattern(NodeTest):
    regex: str

    def __post_init__(self):
        if re.search(r"\\[1-9]|\(\?P=", self.regex):
            raise ValueError("backreferences are not supported in patterns")
        try:
            re.compile(self.regex)
        except re.error as e:
            raise ValueError(f"invalid pattern {self.regex!r}: {e}") from None


@dataclass(frozen=True, slots=True)
class LanguageTag(NodeTest):
    tag: str


def _lexical(a: Node) -> Optional[str]:
    if isinstance(a, Literal):
        return a.lexical
    if isinstance(a, IRI):
        return a.value
    return None


def eval_node_test(t: NodeTest, a: Node) -> bool:
    if isinstance(t, NodeKind):
        return {"iri": IRI, "literal": Literal, "blank": BNode}[t.kind] is type(a)
    if isinstance(t, Datatype):
        return isinstance(a, Literal) and a.datatype == t.datatype.value
    if isinstance(t, MinExclusive):
        return compare_literals(t.bound, a) is Order.LESS
    if isinstance(t, MinInclusive):
        return compare_literals(t.bound, a) in (Order.LESS, Order.EQUAL)
    if isinstance(t, MaxExclusive):
        return compare_literals(a, t.bound) is Order.LESS
    if isinstance(t, MaxInclusive):
        return compare_literals(a, t.bound) in (Order.LESS, Order.EQUAL)
    if isinstance(t, (MinLength, MaxLength)):
        lex = _lexical(a)
        if lex is None:
            return False
        return len(lex) >= t.n if isinstance(t, MinLength) else len(lex) <= t.n
    if isinstance(t, Pattern):
        lex = _lexical(a)
        return lex is not None and re.search(t.regex, lex) is not None
    if isinstance(t, LanguageTag):
        # SPARQL langMatches-style basic range
        if not isinstance(a, Literal) or a.lang is None:
            return False
        tag, want = a.lang.lower(), t.tag.lower()
        return want == "*" or tag == want or tag.startswith(want + "-")
    raise TypeError(f"not a node test: {t!r}")


# --- shapes --------------------------------------------------------------------


class Shape:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Top(Shape):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Shape):
    pass


@dataclass(frozen=True, slots=True)
class HasShape(Shape):
    name: ShapeName


@dataclass(frozen=True, slots=True)
class Test(Shape):
    test: NodeTest


@dataclass(frozen=True, slots=True)
class HasValue(Shape):
    value: Node


@dataclass(frozen=True, slots=True)
class Eq(Shape):
    path: PathOrId
    prop: IRI


@dataclass(frozen=True, slots=True)
class Disj(Shape):
    path: PathOrId
    prop: IRI


@dataclass(frozen=True, slots=True)
class Closed(Shape):
    allowed: frozenset


@dataclass(frozen=True, slots=True)
class LessThan(Shape):
    path: PathExpr
    prop: IRI


@dataclass(frozen=True, slots=True)
class LessThanEq(Shape):
    path: PathExpr
    prop: IRI


@dataclass(frozen=True, slots=True)
class UniqueLang(Shape):
    path: PathExpr


@dataclass(frozen=True, slots=True)
class Not(Shape):
    shape: Shape


@dataclass(frozen=True, slots=True)
class And(Shape):
    left: Shape
    right: Shape


@dataclass(frozen=True, slots=True)
class Or(Shape):
    left: Shape
    right: Shape


@dataclass(frozen=True, slots=True)
class GeqN(Shape):
    n: int
    path: PathExpr
    shape: Shape

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("count must be non-negative")


@dataclass(frozen=True, slots=True)
class LeqN(Shape):
    n: int
    path: PathExpr
    shape: Shape

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("count must be non-negative")


@dataclass(frozen=True, slots=True)
class ForAll(Shape):
    path: PathExpr
    shape: Shape


TOP = Top()
BOTTOM = Bottom()

ATOMIC = (Top, Bottom, HasShape, Test, HasValue, Eq, Disj, Closed, LessThan, LessThanEq, UniqueLang)


def conjunction(*shapes: Shape) -> Shape:
    """Right-folded conjunction; the empty conjunction is Top."""
    if not shapes:
        return TOP
    out = shapes[-1]
    for s in reversed(shapes[:-1]):
        out = And(s, out)
    return out


def disjunction(*shapes: Shape) -> Shape:
    """Right-folded disjunction; the empty disjunction is Bottom."""
    if not shapes:
        return BOTTOM
    out = shapes[-1]
    for s in reversed(shapes[:-1]):
        out = Or(s, out)
    return out


def subshapes(s: Shape) -> Iterator[Shape]:
    """Pre-order walk over a shape tree."""
    yield s
    if isinstance(s, Not):
        yield from subshapes(s.shape)
    elif isinstance(s, (And, Or)):
        yield from subshapes(s.left)
        yield from subshapes(s.right)
    elif isinstance(s, (GeqN, LeqN, ForAll)):
        yield from subshapes(s.shape)


def constants(s: Shape) -> set:
    """Nodes mentioned through hasValue."""
    return {x.value for x in subshapes(s) if isinstance(x, HasValue)}


def mentioned_properties(s: Shape, schema: Optional["Schema"] = None) -> set:
    """Properties mentioned in a shape, following hasShape through ``schema``."""
    out: set = set()
    seen: set = set()
    stack = [s]
    while stack:
        for x in subshapes(stack.pop()):
            if isinstance(x, (Eq, Disj, LessThan, LessThanEq)):
                out |= path_properties(x.path)
                out.add(x.prop)
            elif isinstance(x, (UniqueLang, GeqN, LeqN, ForAll)):
                out |= path_properties(x.path)
            elif isinstance(x, Closed):
                out |= set(x.allowed)
            elif isinstance(x, HasShape) and schema is not None and x.name not in seen:
                seen.add(x.name)
                stack.append(schema.resolve(x.name))
    return out


def referenced_names(s: Shape) -> set:
    return {x.name for x in subshapes(s) if isinstance(x, HasShape)}


# --- negation normal form --------------------------------------------------------


def nnf(s: Shape) -> Shape:
    """Push negations down to atomic shapes."""
    if isinstance(s, Not):
        return _negate(s.shape)
    if isinstance(s, And):
        return And(nnf(s.left), nnf(s.right))
    if isinstance(s, Or):
        return Or(nnf(s.left), nnf(s.right))
    if isinstance(s, GeqN):
        return GeqN(s.n, s.path, nnf(s.shape))
    if isinstance(s, LeqN):
        return LeqN(s.n, s.path, nnf(s.shape))
    if isinstance(s, ForAll):
        return ForAll(s.path, nnf(s.shape))
    return s


def _negate(s: Shape) -> Shape:
    """NNF of Not(s)."""
    if isinstance(s, Not):
        return nnf(s.shape)
    if isinstance(s, Top):
        return BOTTOM
    if isinstance(s, Bottom):
        return TOP
    if isinstance(s, And):
        return Or(_negate(s.left), _negate(s.right))
    if isinstance(s, Or):
        return And(_negate(s.left), _negate(s.right))
    if isinstance(s, GeqN):
        if s.n == 0:
            return BOTTOM
        return LeqN(s.n - 1, s.path, nnf(s.shape))
    if isinstance(s, LeqN):
        return GeqN(s.n + 1, s.path, nnf(s.shape))
    if isinstance(s, ForAll):
        return GeqN(1, s.path, _negate(s.shape))
    return Not(s)


def is_nnf(s: Shape) -> bool:
    return all(not isinstance(x, Not) or isinstance(x.shape, ATOMIC) for x in subshapes(s))


# --- schemas ---------------------------------------------------------------------


class RecursiveSchemaError(Exception):
    """A schema whose hasShape references form a cycle."""

    def __init__(self, cycle: list):
        self.cycle = cycle
        names = " -> ".join(str(n) for n in cycle + cycle[:1])
        super().__init__(f"recursive schema: {names}")



class TargetFormError(ValueError):
    pass


CLASS_PATH = Seq(Prop(IRI(RDF + "type")), Star(Prop(IRI(RDFS + "subClassOf"))))


def is_admitted_target(t: Shape) -> bool:
    """True for the monotone target forms (and Bottom / disjunctions of them)."""
    if isinstance(t, Bottom):
        return True
    if isinstance(t, Or):
        return is_admitted_target(t.left) and is_admitted_target(t.right)
    if isinstance(t, HasValue):
        return True
    if isinstance(t, GeqN) and t.n == 1:
        if t.path == CLASS_PATH and isinstance(t.shape, HasValue):
            return True
        if isinstance(t.shape, Top):
            if isinstance(t.path, Prop):
                return True
            if isinstance(t.path, Inverse) and isinstance(t.path.path, Prop):
                return True
    return False


@dataclass(frozen=True)
class ShapeDefinition:
    name: ShapeName
    shape: Shape
    target: Shape = BOTTOM


@dataclass(frozen=True)
class Schema:
    """Named shape definitions.

    Targets must be node, class, subjects-of or objects-of forms (or a
    disjunction of them, or Bottom) unless ``arbitrary_targets`` is set.
    """

    definitions: tuple = ()
    arbitrary_targets: bool = False
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        defs = tuple(self.definitions)
        object.__setattr__(self, "definitions", defs)
        for d in defs:
            if d.name in self._index:
                raise ValueError(f"duplicate shape name {d.name}")
            if not self.arbitrary_targets and not is_admitted_target(d.target):
                raise TargetFormError(f"target of {d.name} is not a monotone target form")
            self._index[d.name] = d

    def __iter__(self) -> Iterator[ShapeDefinition]:
        return iter(self.definitions)

    def __len__(self):
        return len(self.definitions)

    def __contains__(self, name) -> bool:
        return name in self._index

    def get(self, name) -> Optional[ShapeDefinition]:
        return self._index.get(name)

    def resolve(self, name) -> Shape:
        d = self._index.get(name)
        return d.shape if d is not None else TOP


EMPTY_SCHEMA = Schema()


def resolve(name, h: Schema) -> Shape:
    return h.resolve(name)


def find_cycle(h: Schema) -> Optional[list]:
    """A witness cycle in the hasShape reference digraph, or None."""
    edges = {d.name: sorted(referenced_names(d.shape), key=str) for d in h}
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in edges}
    for root in edges:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(edges[root]))]
        color[root] = GREY
        trail = [root]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = BLACK
                stack.pop()
                trail.pop()
                continue
            if nxt not in edges:
                continue
            if color[nxt] == GREY:
                return trail[trail.index(nxt):]
            if color[nxt] == WHITE:
                color[nxt] = GREY
                trail.append(nxt)
                stack.append((nxt, iter(edges[nxt])))
    return None


def check_nonrecursive(h: Schema) -> None:
    """Raise :class:`RecursiveSchemaError` carrying one cycle if ``h`` is recursive."""
    cycle = find_cycle(h)
    if cycle is not None:
        raise RecursiveSchemaError(cycle)


def expand(s: Shape, h: Schema) -> Shape:
    """Inline every hasShape reference (schema must be nonrecursive)."""
    if isinstance(s, HasShape):
        return expand(h.resolve(s.name), h)
    if isinstance(s, Not):
        return Not(expand(s.shape, h))
    if isinstance(s, And):
        return And(expand(s.left, h), expand(s.right, h))
    if isinstance(s, Or):
        return Or(expand(s.left, h), expand(s.right, h))
    if isinstance(s, GeqN):
        return GeqN(s.n, s.path, expand(s.shape, h))
    if isinstance(s, LeqN):
        return LeqN(s.n, s.path, expand(s.shape, h))
    if isinstance(s, ForAll):
        return ForAll(s.path, expand(s.shape, h))
    return s


def all_shapes(shapes: Iterable[Shape]) -> Iterator[Shape]:
    for s in shapes:
        yield from subshapes(s)
