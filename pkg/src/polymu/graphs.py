"""Finite rooted graphs with labeled edges and colored nodes.

A graph doubles as an NFA by reading one designated color as the
accepting condition, and as a finite tree when its edge relation is
tree shaped.  Node ids are opaque strings.  Graphs are immutable after
construction; adjacency maps are precomputed.

The d-fold product of graphs over a shared base signature is a graph
over the lifted signature: action x@i moves component i along an
x-edge of factor i, action rst@i resets component i to the root of
factor i, and color c@i holds where component i carries c.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import GraphFormatError

_NAME_RE = re.compile(r"[a-z0-9_]+(@\d+)?\Z")
_LIFTED_RE = re.compile(r"([a-z0-9_]+)@(\d+)\Z")

RESET = "rst"


@dataclass(frozen=True)
class Signature:
    """Finite action and color alphabets.

    Names are non-empty words over [a-z0-9_], optionally carrying a
    single @i component suffix (lifted form).  Order is significant
    and preserved; two signatures are equal only if they list the same
    names in the same order.
    """

    actions: tuple[str, ...]
    colors: tuple[str, ...]

    def __init__(self, actions: Iterable[str], colors: Iterable[str]):
        object.__setattr__(self, "actions", tuple(actions))
        object.__setattr__(self, "colors", tuple(colors))
        if not self.actions:
            raise GraphFormatError("actions: must be non-empty")
        if not self.colors:
            raise GraphFormatError("colors: must be non-empty")
        seen: set[str] = set()
        for kind, names in (("actions", self.actions), ("colors", self.colors)):
            for name in names:
                if not isinstance(name, str) or not _NAME_RE.match(name):
                    raise GraphFormatError(f"{kind}: bad name {name!r}")
                if name in seen:
                    raise GraphFormatError(f"{kind}: duplicate name {name!r}")
                seen.add(name)

    def is_base(self) -> bool:
        return all("@" not in n for n in self.actions + self.colors)


def lift_signature(sig: Signature, d: int) -> Signature:
    """Signature of d-fold products: x@i and rst@i actions, c@i colors."""
    if d < 1:
        raise GraphFormatError(f"d: must be >= 1, got {d}")
    if not sig.is_base():
        raise GraphFormatError("signature: already lifted, refusing to lift again")
    if RESET in sig.actions:
        raise GraphFormatError(f"actions: {RESET!r} is reserved")
    actions = [f"{x}@{i}" for x in sig.actions for i in range(d)]
    actions += [f"{RESET}@{i}" for i in range(d)]
    colors = [f"{c}@{i}" for c in sig.colors for i in range(d)]
    return Signature(actions, colors)


def split_lifted(sig: Signature) -> tuple[Signature, int]:
    """Recover (base signature, d) from a lifted signature.

    Raises GraphFormatError when the signature does not have the exact
    shape produced by lift_signature (up to reordering).
    """
    act_idx: dict[str, set[int]] = {}
    col_idx: dict[str, set[int]] = {}
    act_order: list[str] = []
    col_order: list[str] = []
    for name in sig.actions:
        m = _LIFTED_RE.match(name)
        if not m:
            raise GraphFormatError(f"actions: {name!r} is not of the form x@i")
        base, i = m.group(1), int(m.group(2))
        if base not in act_idx:
            act_idx[base] = set()
            act_order.append(base)
        act_idx[base].add(i)
    for name in sig.colors:
        m = _LIFTED_RE.match(name)
        if not m:
            raise GraphFormatError(f"colors: {name!r} is not of the form c@i")
        base, i = m.group(1), int(m.group(2))
        if base not in col_idx:
            col_idx[base] = set()
            col_order.append(base)
        col_idx[base].add(i)
    if RESET not in act_idx:
        raise GraphFormatError(f"actions: no {RESET}@i actions, not a lifted signature")
    d = max(act_idx[RESET]) + 1
    full = set(range(d))
    for base, idx in itertools.chain(act_idx.items(), col_idx.items()):
        if idx != full:
            raise GraphFormatError(
                f"signature: component indices for {base!r} are {sorted(idx)}, expected 0..{d - 1}"
            )
    act_order.remove(RESET)
    if not act_order:
        raise GraphFormatError("actions: only reset actions present")
    return Signature(act_order, col_order), d


class LabeledGraph:
    """Finite rooted graph over a signature.

    nodes: unique non-empty string ids, order preserved.
    edges: (src, action, dst) triples, no duplicates.
    labels: node id to set of colors.
    """

    def __init__(
        self,
        signature: Signature,
        nodes: Iterable[str],
        root: str,
        edges: Iterable[tuple[str, str, str]],
        labels: Mapping[str, Iterable[str]],
    ):
        self.signature = signature
        self.nodes = tuple(nodes)
        self.root = root
        node_set = set()
        for i, v in enumerate(self.nodes):
            if not isinstance(v, str) or not v:
                raise GraphFormatError(f"nodes[{i}]: id must be a non-empty string")
            if v in node_set:
                raise GraphFormatError(f"nodes[{i}]: duplicate id {v!r}")
            node_set.add(v)
        if root not in node_set:
            raise GraphFormatError(f"root: {root!r} is not a node")
        action_set = set(signature.actions)
        color_set = set(signature.colors)
        edge_list: list[tuple[str, str, str]] = []
        edge_set = set()
        for i, e in enumerate(edges):
            e = tuple(e)
            if len(e) != 3:
                raise GraphFormatError(f"edges[{i}]: expected [src, action, dst]")
            src, a, dst = e
            if src not in node_set:
                raise GraphFormatError(f"edges[{i}]: unknown source {src!r}")
            if dst not in node_set:
                raise GraphFormatError(f"edges[{i}]: unknown target {dst!r}")
            if a not in action_set:
                raise GraphFormatError(f"edges[{i}]: unknown action {a!r}")
            if e in edge_set:
                raise GraphFormatError(f"edges[{i}]: duplicate edge {e!r}")
            edge_set.add(e)
            edge_list.append(e)
        self.edges = tuple(edge_list)
        lab: dict[str, frozenset[str]] = {v: frozenset() for v in self.nodes}
        for v, cs in labels.items():
            if v not in node_set:
                raise GraphFormatError(f"labels: unknown node {v!r}")
            cs = tuple(cs)
            for c in cs:
                if c not in color_set:
                    raise GraphFormatError(f"labels[{v!r}]: unknown color {c!r}")
            lab[v] = frozenset(cs)
        self._labels = lab
        succ: dict[tuple[str, str], list[str]] = {}
        pred: dict[tuple[str, str], list[str]] = {}
        for src, a, dst in self.edges:
            succ.setdefault((src, a), []).append(dst)
            pred.setdefault((dst, a), []).append(src)
        self._succ = {k: tuple(sorted(v)) for k, v in succ.items()}
        self._pred = {k: tuple(sorted(v)) for k, v in pred.items()}

    def succ(self, v: str, a: str) -> tuple[str, ...]:
        return self._succ.get((v, a), ())

    def pred(self, v: str, a: str) -> tuple[str, ...]:
        return self._pred.get((v, a), ())

    def label(self, v: str) -> frozenset[str]:
        return self._labels[v]

    def has_color(self, v: str, c: str) -> bool:
        return c in self._labels[v]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.signature == other.signature
            and set(self.nodes) == set(other.nodes)
            and self.root == other.root
            and set(self.edges) == set(other.edges)
            and self._labels == other._labels
        )

    def __hash__(self):
        return hash((self.signature, frozenset(self.nodes), self.root, frozenset(self.edges)))

    def __repr__(self):
        return f"<LabeledGraph {len(self.nodes)} nodes, {len(self.edges)} edges, root {self.root!r}>"


class FiniteTree(LabeledGraph):
    """LabeledGraph whose edge relation is a tree rooted at root.

    Every non-root node has exactly one incoming edge and is reachable
    from the root; the root has none.
    """

    def __init__(self, signature, nodes, root, edges, labels):
        super().__init__(signature, nodes, root, edges, labels)
        parent: dict[str, tuple[str, str]] = {}
        for src, a, dst in self.edges:
            if dst == self.root:
                raise GraphFormatError(f"edges: root {dst!r} has an incoming edge")
            if dst in parent:
                raise GraphFormatError(f"edges: node {dst!r} has two incoming edges")
            parent[dst] = (src, a)
        for v in self.nodes:
            if v != self.root and v not in parent:
                raise GraphFormatError(f"nodes: {v!r} is unreachable from the root")
        self._parent = parent
        paths: dict[str, tuple[str, ...]] = {self.root: (self.root,)}

        def path_of(v: str) -> tuple[str, ...]:
            if v in paths:
                return paths[v]
            chain = []
            w = v
            while w not in paths:
                chain.append(w)
                p = self._parent.get(w)
                if p is None:
                    raise GraphFormatError(f"nodes: {v!r} is not connected to the root")
                w = p[0]
                if len(chain) > len(self.nodes):
                    raise GraphFormatError("edges: cycle in tree")
            for w2 in reversed(chain):
                paths[w2] = paths[self._parent[w2][0]] + (w2,)
            return paths[v]

        for v in self.nodes:
            path_of(v)
        self._paths = paths

    @classmethod
    def from_graph(cls, g: LabeledGraph) -> "FiniteTree":
        return cls(g.signature, g.nodes, g.root, g.edges, {v: g.label(v) for v in g.nodes})

    def parent(self, v: str) -> tuple[str, str] | None:
        """(parent node, action of the incoming edge), None for the root."""
        return self._parent.get(v)

    def root_path(self, v: str) -> tuple[str, ...]:
        """Node sequence from the root to v, inclusive."""
        return self._paths[v]

    def depth_of(self, v: str) -> int:
        return len(self._paths[v]) - 1

    def levels(self) -> list[list[str]]:
        """Nodes grouped by depth, each level sorted."""
        by_depth: dict[int, list[str]] = {}
        for v in self.nodes:
            by_depth.setdefault(self.depth_of(v), []).append(v)
        return [sorted(by_depth[k]) for k in sorted(by_depth)]

    def children(self, v: str) -> list[tuple[str, str]]:
        """Outgoing (action, child) pairs, sorted."""
        out = []
        for a in self.signature.actions:
            for w in self.succ(v, a):
                out.append((a, w))
        return sorted(out)


def tuple_id(parts: Sequence[str]) -> str:
    return "(" + ",".join(parts) + ")"


def product(graphs: Sequence[LabeledGraph]) -> LabeledGraph:
    """d-fold product of graphs over one shared base signature."""
    if not graphs:
        raise GraphFormatError("graphs: need at least one factor")
    sig = graphs[0].signature
    for i, g in enumerate(graphs[1:], start=1):
        if g.signature != sig:
            raise GraphFormatError(f"graphs[{i}]: signature differs from graphs[0]")
    d = len(graphs)
    lifted = lift_signature(sig, d)
    tuples = list(itertools.product(*[g.nodes for g in graphs]))
    ids = {t: tuple_id(t) for t in tuples}
    labels = {
        ids[t]: [f"{c}@{i}" for i in range(d) for c in graphs[i].label(t[i])]
        for t in tuples
    }
    edges: list[tuple[str, str, str]] = []
    for t in tuples:
        for i in range(d):
            for a in sig.actions:
                for u in graphs[i].succ(t[i], a):
                    t2 = t[:i] + (u,) + t[i + 1 :]
                    edges.append((ids[t], f"{a}@{i}", ids[t2]))
            t_rst = t[:i] + (graphs[i].root,) + t[i + 1 :]
            edges.append((ids[t], f"{RESET}@{i}", ids[t_rst]))
    root = ids[tuple(g.root for g in graphs)]
    return LabeledGraph(lifted, [ids[t] for t in tuples], root, edges, labels)


def power(g: LabeledGraph, d: int) -> LabeledGraph:
    """d-fold product of g with itself."""
    if d < 1:
        raise GraphFormatError(f"d: must be >= 1, got {d}")
    return product([g] * d)


def unfold(g: LabeledGraph, depth: int) -> FiniteTree:
    """Tree of edge-paths from the root of length <= depth.

    A tree node stands for one path; its id is the traversed node ids
    and actions joined with "|".  Labels come from the path's endpoint.
    """
    if depth < 0:
        raise GraphFormatError(f"depth: must be >= 0, got {depth}")
    nodes: list[str] = []
    edges: list[tuple[str, str, str]] = []
    labels: dict[str, frozenset[str]] = {}
    frontier = [(g.root, g.root)]
    nodes.append(g.root)
    labels[g.root] = g.label(g.root)
    for _ in range(depth):
        nxt = []
        for pid, v in frontier:
            for a in g.signature.actions:
                for w in g.succ(v, a):
                    cid = f"{pid}|{a}|{w}"
                    nodes.append(cid)
                    labels[cid] = g.label(w)
                    edges.append((pid, a, cid))
                    nxt.append((cid, w))
        frontier = nxt
    return FiniteTree(g.signature, nodes, g.root, edges, labels)


def read_graph(data) -> LabeledGraph:
    """Parse graph JSON.  Accepts bytes or str."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise GraphFormatError("top level: expected an object")
    required = ["actions", "colors", "nodes", "root", "edges"]
    for key in required:
        if key not in obj:
            raise GraphFormatError(f"{key}: missing field")
    for key in obj:
        if key not in required:
            raise GraphFormatError(f"{key}: unknown field")
    for key in ("actions", "colors", "nodes", "edges"):
        if not isinstance(obj[key], list):
            raise GraphFormatError(f"{key}: expected a list")
    if not isinstance(obj["root"], str):
        raise GraphFormatError("root: expected a string")
    sig = Signature(obj["actions"], obj["colors"])
    nodes: list[str] = []
    labels: dict[str, list[str]] = {}
    for i, entry in enumerate(obj["nodes"]):
        if not isinstance(entry, dict) or set(entry) != {"id", "colors"}:
            raise GraphFormatError(f'nodes[{i}]: expected {{"id", "colors"}}')
        if not isinstance(entry["id"], str):
            raise GraphFormatError(f"nodes[{i}].id: expected a string")
        if not isinstance(entry["colors"], list) or not all(
            isinstance(c, str) for c in entry["colors"]
        ):
            raise GraphFormatError(f"nodes[{i}].colors: expected a list of strings")
        nodes.append(entry["id"])
        labels[entry["id"]] = entry["colors"]
    edges = []
    for i, e in enumerate(obj["edges"]):
        if not isinstance(e, list) or len(e) != 3 or not all(isinstance(x, str) for x in e):
            raise GraphFormatError(f"edges[{i}]: expected [src, action, dst] strings")
        edges.append(tuple(e))
    return LabeledGraph(sig, nodes, obj["root"], edges, labels)


def read_tree(data) -> FiniteTree:
    return FiniteTree.from_graph(read_graph(data))


def write_graph(g: LabeledGraph) -> str:
    """Serialize to canonical JSON: sorted keys, sorted node and edge lists."""
    obj = {
        "actions": list(g.signature.actions),
        "colors": list(g.signature.colors),
        "nodes": [{"id": v, "colors": sorted(g.label(v))} for v in sorted(g.nodes)],
        "root": g.root,
        "edges": sorted(list(e) for e in g.edges),
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
