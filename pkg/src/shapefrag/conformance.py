"""Conformance of nodes to shapes, target evaluation and graph validation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .paths import PathEvaluator
from .rdf import Graph, Node, Order, compare_literals, lang_equiv
from .shapes import (
    And, Bottom, Closed, Disj, Eq, ForAll, GeqN, HasShape, HasValue, LeqN, LessThan,
    LessThanEq, Not, Or, Schema, Shape, Test, Top, UniqueLang, check_nonrecursive,
    constants, eval_node_test, is_admitted_target, nnf,
)


# shapes that are constant time on their own or that only combine memoized parts;
# memoizing them costs more memory than it saves
_CHEAP = (Top, Bottom, HasValue, Test, Not, And, Or, HasShape)


class Evaluator:
    """Shape evaluation over one (schema, graph) pair.

    Results are memoized on (shape identity, node). Both inputs are treated as
    immutable for the lifetime of the evaluator.
    """

    def __init__(self, schema: Schema, g: Graph, check: bool = True):
        if check:
            check_nonrecursive(schema)
        self.schema = schema
        self.g = g
        self.paths = PathEvaluator(g)
        self._memo: dict = {}
        self._keep: dict = {}
        self._nnf_defs: dict = {}
        self._nnf_neg_defs: dict = {}

    def conforms(self, a: Node, s: Shape) -> bool:
        if isinstance(s, _CHEAP):
            return self._conforms(a, s)
        key = (id(s), a)
        hit = self._memo.get(key)
        if hit is None:
            self._keep[id(s)] = s
            hit = self._memo[key] = self._conforms(a, s)
        return hit

    def _conforms(self, a: Node, s: Shape) -> bool:
        if isinstance(s, Top):
            return True
        if isinstance(s, Bottom):
            return False
        if isinstance(s, HasValue):
            return a == s.value
        if isinstance(s, Test):
            return eval_node_test(s.test, a)
        if isinstance(s, HasShape):
            return self.conforms(a, self.definition(s.name))
        if isinstance(s, Not):
            return not self.conforms(a, s.shape)
        if isinstance(s, And):
            return self.conforms(a, s.left) and self.conforms(a, s.right)
        if isinstance(s, Or):
            return self.conforms(a, s.left) or self.conforms(a, s.right)
        if isinstance(s, GeqN):
            if s.n == 0:
                return True
            count = 0
            for b in self.paths.eval(s.path, a):
                if self.conforms(b, s.shape):
                    count += 1
                    if count >= s.n:
                        return True
            return False
        if isinstance(s, LeqN):
            count = 0
            for b in self.paths.eval(s.path, a):
                if self.conforms(b, s.shape):
                    count += 1
                    if count > s.n:
                        return False
            return True
        if isinstance(s, ForAll):
            return all(self.conforms(b, s.shape) for b in self.paths.eval(s.path, a))
        if isinstance(s, Eq):
            return self.paths.eval(s.path, a) == self.g.objects(a, s.prop)
        if isinstance(s, Disj):
            return self.paths.eval(s.path, a).isdisjoint(self.g.objects(a, s.prop))
        if isinstance(s, Closed):
            return all(t.p in s.allowed for t in self.g.outgoing(a))
        if isinstance(s, (LessThan, LessThanEq)):
            ok = (Order.LESS,) if isinstance(s, LessThan) else (Order.LESS, Order.EQUAL)
            values = self.g.objects(a, s.prop)
            return all(
                compare_literals(b, c) in ok for b in self.paths.eval(s.path, a) for c in values
            )
        if isinstance(s, UniqueLang):
            vals = list(self.paths.eval(s.path, a))
            return not any(
                lang_equiv(b, c) for i, b in enumerate(vals) for c in vals[i + 1:]
            )
        raise TypeError(f"not a shape: {s!r}")

    def definition(self, name) -> Shape:
        return self.schema.resolve(name)

    def nnf_definition(self, name, negated: bool = False) -> Shape:
        """NNF of def(name), or of its negation; cached so memo identities are stable."""
        cache = self._nnf_neg_defs if negated else self._nnf_defs
        hit = cache.get(name)
        if hit is None:
            d = self.definition(name)
            hit = cache[name] = nnf(Not(d) if negated else d)
        return hit

    def target_nodes(self, target: Shape) -> set:
        candidates = set(self.g.nodes()) | constants(target)
        return {a for a in candidates if self.conforms(a, target)}


def conforms(h: Schema, g: Graph, a: Node, s: Shape) -> bool:
    return Evaluator(h, g).conforms(a, s)


def target_nodes(h: Schema, g: Graph, target: Shape) -> set:
    if not h.arbitrary_targets and not is_admitted_target(target):
        raise ValueError("target is not an admitted monotone target form")
    return Evaluator(h, g).target_nodes(target)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def conforms(self) -> bool:
        return not self.violations

    def to_text(self) -> str:
        lines = [f"conforms: {'true' if self.conforms else 'false'}"]
        for name, node in self.violations:
            lines.append(f"violation: {name.n3()} {node.n3()}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "conforms": self.conforms,
            "violations": [
                {"shape": name.n3(), "focusNode": node.n3()} for name, node in self.violations
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def validate(h: Schema, g: Graph, evaluator: Evaluator | None = None) -> ValidationReport:
    ev = evaluator or Evaluator(h, g)
    violations = []
    for d in h:
        for a in ev.target_nodes(d.target):
            if not ev.conforms(a, d.shape):
                violations.append((d.name, a))
    violations.sort(key=lambda v: (v[0].n3(), v[1].n3()))
    return ValidationReport(violations)
