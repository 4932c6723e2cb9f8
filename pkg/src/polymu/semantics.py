"""Evaluation of arity-d formulas on finite graphs.

The denotation of an arity-d formula is a set of d-tuples of nodes.
Fixpoints are computed by iteration: least fixpoints climb from the
empty set, greatest fixpoints descend from the full tuple space.
Positivity of bound variables (checked up front) makes both monotone,
so each loop stabilizes after at most |V|^d + 1 rounds; exceeding the
bound is reported as an error instead of looping forever.

The full tuple space is materialized, so evaluation refuses to start
when |V|^arity exceeds the configured cap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import FormulaError, PolymuError, ResourceLimitError
from .graphs import LabeledGraph
from .logic import (
    And,
    Box,
    Color,
    Diamond,
    Formula,
    Mu,
    Neg,
    Node,
    Nu,
    Or,
    Replace,
    TT,
    Var,
    _children,
    free_vars,
    validate_formula,
)

DEFAULT_TUPLE_CAP = 2**20


@dataclass(frozen=True)
class TupleSet:
    """A set of same-arity node tuples."""

    arity: int
    tuples: frozenset[tuple[str, ...]]

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self):
        return len(self.tuples)

    def sorted(self) -> list[tuple[str, ...]]:
        return sorted(self.tuples)


def _free_map(root: Node) -> dict[int, frozenset[str]]:
    """Free variables per AST node, keyed by object identity."""
    out: dict[int, frozenset[str]] = {}

    def go(n: Node) -> frozenset[str]:
        if id(n) in out:
            return out[id(n)]
        if isinstance(n, Var):
            fv = frozenset({n.name})
        elif isinstance(n, (Mu, Nu)):
            fv = go(n.body) - {n.var}
        else:
            fv = frozenset().union(*(go(c) for c in _children(n))) if _children(n) else frozenset()
        out[id(n)] = fv
        return fv

    go(root)
    return out


def evaluate(
    g: LabeledGraph,
    phi: Formula,
    d: int | None = None,
    env: Mapping[str, TupleSet] | None = None,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> TupleSet:
    """Denotation of phi over g as a TupleSet of arity phi.arity.

    env supplies denotations for free variables.  d, when given, must
    match the formula arity.
    """
    validate_formula(phi, g.signature)
    if d is not None and d != phi.arity:
        raise FormulaError(f"formula has arity {phi.arity}, expected {d}")
    arity = phi.arity
    env = dict(env or {})
    missing = free_vars(phi) - set(env)
    if missing:
        raise FormulaError(f"unbound variables: {', '.join(sorted(missing))}")

    n = len(g.nodes)
    if n**arity > tuple_cap:
        raise ResourceLimitError(
            f"tuple space {n}^{arity} exceeds the cap of {tuple_cap}"
        )
    idx = {v: k for k, v in enumerate(g.nodes)}
    names = g.nodes
    full = frozenset(itertools.product(range(n), repeat=arity))
    max_rounds = n**arity + 1

    pred: dict[tuple[int, str], tuple[int, ...]] = {}
    for v in g.nodes:
        for a in g.signature.actions:
            ps = g.pred(v, a)
            if ps:
                pred[(idx[v], a)] = tuple(idx[p] for p in ps)
    color_nodes = {
        c: frozenset(idx[v] for v in g.nodes if g.has_color(v, c))
        for c in g.signature.colors
    }

    base_env: dict[str, frozenset] = {}
    for name, ts in env.items():
        if ts.arity != arity:
            raise FormulaError(f"environment entry {name!r} has arity {ts.arity}, expected {arity}")
        conv = set()
        for t in ts.tuples:
            if len(t) != arity or any(v not in idx for v in t):
                raise FormulaError(f"environment entry {name!r} contains a bad tuple {t!r}")
            conv.add(tuple(idx[v] for v in t))
        base_env[name] = frozenset(conv)

    fmap = _free_map(phi.root)
    closed_cache: dict[int, frozenset] = {}

    def diamond_pre(a: str, i: int, s: frozenset) -> frozenset:
        out = set()
        for t in s:
            for p in pred.get((t[i], a), ()):
                out.add(t[:i] + (p,) + t[i + 1 :])
        return frozenset(out)

    def go(node: Node, scope: dict[str, frozenset]) -> frozenset:
        closed = not fmap[id(node)]
        if closed and id(node) in closed_cache:
            return closed_cache[id(node)]
        if isinstance(node, TT):
            res = full
        elif isinstance(node, Color):
            good = color_nodes[node.color]
            i = node.comp
            res = frozenset(t for t in full if t[i] in good)
        elif isinstance(node, Var):
            res = scope[node.name]
        elif isinstance(node, Neg):
            res = full - go(node.sub, scope)
        elif isinstance(node, And):
            res = go(node.left, scope) & go(node.right, scope)
        elif isinstance(node, Or):
            res = go(node.left, scope) | go(node.right, scope)
        elif isinstance(node, Diamond):
            res = diamond_pre(node.action, node.comp, go(node.sub, scope))
        elif isinstance(node, Box):
            inner = go(node.sub, scope)
            res = full - diamond_pre(node.action, node.comp, full - inner)
        elif isinstance(node, Replace):
            inner = go(node.sub, scope)
            m = node.mapping
            res = frozenset(t for t in full if tuple(t[k] for k in m) in inner)
        elif isinstance(node, (Mu, Nu)):
            cur = frozenset() if isinstance(node, Mu) else full
            for _ in range(max_rounds):
                scope2 = dict(scope)
                scope2[node.var] = cur
                nxt = go(node.body, scope2)
                if nxt == cur:
                    break
                cur = nxt
            else:
                raise PolymuError(
                    f"fixpoint for {node.var!r} did not stabilize in {max_rounds} rounds"
                )
            res = cur
        else:
            # FF and anything unexpected; validate_formula already vetted types
            res = frozenset()
        if closed:
            closed_cache[id(node)] = res
        return res

    result = go(phi.root, base_env)
    return TupleSet(arity, frozenset(tuple(names[k] for k in t) for t in result))


def models(g: LabeledGraph, phi: Formula, d: int | None = None,
           tuple_cap: int = DEFAULT_TUPLE_CAP) -> bool:
    """Does the arity-fold root tuple of g satisfy phi?  phi must be closed."""
    if free_vars(phi):
        raise FormulaError("models needs a closed formula")
    res = evaluate(g, phi, d, None, tuple_cap)
    return (g.root,) * phi.arity in res
