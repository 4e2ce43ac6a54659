"""Path expressions: evaluation and the subgraph traced out by all matching paths.

``eval_path(E, g, a)`` returns the nodes reachable from ``a`` through ``E``.
``path_graph(E, g, a, b)`` returns the triples underlying every ``E``-path from
``a`` to ``b`` without enumerating paths: zero-length witnesses (from ``?``
and ``*``) contribute no triples, and a star is handled by collecting every
``E``-segment that lies between a node reachable from ``a`` and a node that
reaches ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .rdf import Graph, IRI, Node, Triple


class PathExpr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Prop(PathExpr):
    iri: IRI


@dataclass(frozen=True, slots=True)
class Inverse(PathExpr):
    path: PathExpr


@dataclass(frozen=True, slots=True)
class Seq(PathExpr):
    first: PathExpr
    second: PathExpr


@dataclass(frozen=True, slots=True)
class Alt(PathExpr):
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True, slots=True)
class Star(PathExpr):
    path: PathExpr


@dataclass(frozen=True, slots=True)
class Opt(PathExpr):
    path: PathExpr


class _Id:
    """The ``id`` marker usable in eq/disj shapes; evaluates to the focus node."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Id"

    def __reduce__(self):
        return (_Id, ())


Id = _Id()
PathOrId = Union[PathExpr, _Id]


def prop(iri: Union[str, IRI]) -> Prop:
    return Prop(iri if isinstance(iri, IRI) else IRI(iri))


def seq(*paths: PathExpr) -> PathExpr:
    """Right-folded sequence."""
    out = paths[-1]
    for p in reversed(paths[:-1]):
        out = Seq(p, out)
    return out


def alt(*paths: PathExpr) -> PathExpr:
    out = paths[-1]
    for p in reversed(paths[:-1]):
        out = Alt(p, out)
    return out


def path_properties(e: PathOrId) -> set:
    """IRIs mentioned in a path expression."""
    if isinstance(e, Prop):
        return {e.iri}
    if isinstance(e, (Inverse, Star, Opt)):
        return path_properties(e.path)
    if isinstance(e, Seq):
        return path_properties(e.first) | path_properties(e.second)
    if isinstance(e, Alt):
        return path_properties(e.left) | path_properties(e.right)
    return set()


class PathEvaluator:
    """Evaluates paths on one graph, memoizing per (expression, node, direction)."""

    def __init__(self, g: Graph):
        self.g = g
        self._eval: dict = {}
        self._pg: dict = {}

    # -- evaluation -------------------------------------------------------

    def eval(self, e: PathOrId, a: Node, inverse: bool = False) -> frozenset:
        if e is Id:
            return frozenset((a,))
        key = (e, a, inverse)
        hit = self._eval.get(key)
        if hit is None:
            hit = self._eval[key] = frozenset(self._compute(e, a, inverse))
        return hit

    def _compute(self, e, a, inverse):
        g = self.g
        if isinstance(e, Prop):
            return g._subjects_raw(e.iri, a) if inverse else g._objects_raw(a, e.iri)
        if isinstance(e, Inverse):
            return self.eval(e.path, a, not inverse)
        if isinstance(e, Alt):
            return self.eval(e.left, a, inverse) | self.eval(e.right, a, inverse)
        if isinstance(e, Seq):
            first, second = (e.second, e.first) if inverse else (e.first, e.second)
            out = set()
            for m in self.eval(first, a, inverse):
                out |= self.eval(second, m, inverse)
            return out
        if isinstance(e, Opt):
            return self.eval(e.path, a, inverse) | {a}
        if isinstance(e, Star):
            seen = {a}
            todo = [a]
            while todo:
                x = todo.pop()
                for y in self.eval(e.path, x, inverse):
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
            return seen
        raise TypeError(f"not a path expression: {e!r}")

    def holds(self, e: PathOrId, a: Node, b: Node) -> bool:
        return b in self.eval(e, a)

    # -- traced subgraphs -------------------------------------------------

    def graph(self, e: PathExpr, a: Node, b: Node) -> frozenset:
        """Triples of graph(paths(e, g, a, b))."""
        key = (e, a, b)
        hit = self._pg.get(key)
        if hit is None:
            if b in self.eval(e, a):
                hit = frozenset(self._trace(e, a, b))
            else:
                hit = frozenset()
            self._pg[key] = hit
        return hit

    def _trace(self, e, a, b):
        # precondition: (a, b) in [[e]]
        if isinstance(e, Prop):
            return {Triple(a, e.iri, b)}
        if isinstance(e, Inverse):
            return self.graph(e.path, b, a)
        if isinstance(e, Alt):
            return self.graph(e.left, a, b) | self.graph(e.right, a, b)
        if isinstance(e, Opt):
            return self.graph(e.path, a, b)
        if isinstance(e, Seq):
            out = set()
            back = self.eval(e.second, b, True)
            for m in self.eval(e.first, a):
                if m in back:
                    out |= self.graph(e.first, a, m)
                    out |= self.graph(e.second, m, b)
            return out
        if isinstance(e, Star):
            inner = e.path
            back = self.eval(e, b, True)
            out = set()
            for x in self.eval(e, a):
                for y in self.eval(inner, x):
                    if y in back:
                        out |= self.graph(inner, x, y)
            return out
        raise TypeError(f"not a path expression: {e!r}")

    def graph_from(self, e: PathExpr, a: Node) -> frozenset:
        """Triples of graph(pathsfrom(e, g, a))."""
        out = set()
        for x in self.eval(e, a):
            out |= self.graph(e, a, x)
        return frozenset(out)


def eval_path(e: PathOrId, g: Graph, a: Node) -> frozenset:
    return PathEvaluator(g).eval(e, a)


def path_graph(e: PathExpr, g: Graph, a: Node, b: Node) -> Graph:
    return Graph(PathEvaluator(g).graph(e, a, b))


def path_graph_from(e: PathExpr, g: Graph, a: Node) -> Graph:
    return Graph(PathEvaluator(g).graph_from(e, a))
