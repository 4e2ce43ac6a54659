"""Neighborhoods: the triples witnessing that a node conforms to a shape."""
from __future__ import annotations

from .conformance import Evaluator
from .paths import Alt, Id, Prop
from .rdf import Graph, Node, Order, Triple, compare_literals, lang_equiv
from .shapes import (
    And, Closed, Disj, Eq, ForAll, GeqN, HasShape, LeqN, LessThan, LessThanEq, Not, Or,
    Schema, Shape, UniqueLang, nnf,
)


class NeighborhoodBuilder:
    """Computes B(v, G, phi) for NNF shapes, sharing an :class:`Evaluator`."""

    def __init__(self, evaluator: Evaluator):
        self.ev = evaluator
        self.g = evaluator.g
        self.paths = evaluator.paths
        self._memo: dict = {}
        self._keep: dict = {}
        self._nnf_neg: dict = {}

    def of(self, v: Node, phi: Shape) -> frozenset:
        """Neighborhood of ``v`` for ``phi``; ``phi`` must already be in NNF."""
        key = (id(phi), v)
        hit = self._memo.get(key)
        if hit is None:
            self._keep[id(phi)] = phi
            if self.ev.conforms(v, phi):
                hit = frozenset(self._build(v, phi))
            else:
                hit = frozenset()
            self._memo[key] = hit
        return hit

    def _negated(self, psi: Shape) -> Shape:
        hit = self._nnf_neg.get(id(psi))
        if hit is None:
            hit = nnf(Not(psi))
            self._nnf_neg[id(psi)] = hit
            self._keep[("neg", id(psi))] = psi
        return hit

    def _build(self, v: Node, phi: Shape) -> set:
        paths = self.paths
        if isinstance(phi, HasShape):
            return self.of(v, self.ev.nnf_definition(phi.name))
        if isinstance(phi, (And, Or)):
            return self.of(v, phi.left) | self.of(v, phi.right)
        if isinstance(phi, (GeqN, ForAll)):
            out = set()
            for x in paths.eval(phi.path, v):
                if isinstance(phi, ForAll) or self.ev.conforms(x, phi.shape):
                    out |= paths.graph(phi.path, v, x)
                    out |= self.of(x, phi.shape)
            return out
        if isinstance(phi, LeqN):
            neg = self._negated(phi.shape)
            out = set()
            for x in paths.eval(phi.path, v):
                if self.ev.conforms(x, neg):
                    out |= paths.graph(phi.path, v, x)
                    out |= self.of(x, neg)
            return out
        if isinstance(phi, Eq):
            if phi.path is Id:
                return {Triple(v, phi.prop, v)}
            return set(paths.graph_from(Alt(phi.path, Prop(phi.prop)), v))
        if isinstance(phi, Not):
            return self._negated_atom(v, phi.shape)
        # Top, Bottom, Test, HasValue, Closed, Disj, LessThan(Eq), UniqueLang
        return set()

    def _negated_atom(self, v: Node, s: Shape) -> set:
        g, paths = self.g, self.paths
        if isinstance(s, HasShape):
            return self.of(v, self.ev.nnf_definition(s.name, negated=True))
        if isinstance(s, Eq):
            values = g.objects(v, s.prop)
            if s.path is Id:
                return {Triple(v, s.prop, x) for x in values if x != v}
            reach = paths.eval(s.path, v)
            out = set()
            for x in reach:
                if x not in values:
                    out |= paths.graph(s.path, v, x)
            out |= {Triple(v, s.prop, x) for x in values if x not in reach}
            return out
        if isinstance(s, Disj):
            if s.path is Id:
                return {Triple(v, s.prop, v)}
            out = set()
            for x in paths.eval(s.path, v):
                if g.has(v, s.prop, x):
                    out |= paths.graph(s.path, v, x)
                    out.add(Triple(v, s.prop, x))
            return out
        if isinstance(s, (LessThan, LessThanEq)):
            ok = (Order.LESS,) if isinstance(s, LessThan) else (Order.LESS, Order.EQUAL)
            values = g.objects(v, s.prop)
            out = set()
            for x in paths.eval(s.path, v):
                for y in values:
                    if compare_literals(x, y) not in ok:
                        out |= paths.graph(s.path, v, x)
                        out.add(Triple(v, s.prop, y))
            return out
        if isinstance(s, UniqueLang):
            vals = paths.eval(s.path, v)
            out = set()
            for x in vals:
                if any(y != x and lang_equiv(x, y) for y in vals):
                    out |= paths.graph(s.path, v, x)
            return out
        if isinstance(s, Closed):
            return {t for t in g.outgoing(v) if t.p not in s.allowed}
        # negated Top, Bottom, Test, HasValue
        return set()


def neighborhood(h: Schema, g: Graph, v: Node, s: Shape) -> Graph:
    builder = NeighborhoodBuilder(Evaluator(h, g))
    return Graph(builder.of(v, nnf(s)))
