"""Tree pumping between two path nodes, and the word-shaped example trees.

pump(tree, path, i, j, k) excises (k = 0) or replicates (k >= 2) the
segment of the tree hanging between path nodes v_i (inclusive) and v_j
(exclusive), branches included; k = 1 reproduces the tree up to node
renaming.  The word-shaped trees give a family where membership of a
level language is checkable both by formula evaluation and by direct
level inspection.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import PolymuError
from .graphs import FiniteTree, Signature
from .logic import Formula
from .semantics import models


@dataclass(frozen=True)
class PumpPartition:
    """Nodes strictly before the segment, in it, and at or below v_j."""

    before: frozenset
    segment: frozenset
    after: frozenset


def _validated_path(tree: FiniteTree, path: Sequence[str]) -> list[str]:
    path = list(path)
    if not path:
        raise PolymuError("path is empty")
    known = set(tree.nodes)
    for v in path:
        if v not in known:
            raise PolymuError(f"path node {v} is not in the tree")
    if list(tree.root_path(path[-1])) != path:
        raise PolymuError("path is not a root path of the tree")
    return path


def partition_nodes(tree: FiniteTree, path: Sequence[str], i: int, j: int) -> PumpPartition:
    """Split the nodes by root-path prefixes: before misses the prefix up
    to v_i, after extends the prefix up to v_j, the segment is the rest."""
    path = _validated_path(tree, path)
    if not 0 < i < j <= len(path) - 1:
        raise PolymuError(f"need 0 < i < j <= {len(path) - 1}, got i={i} j={j}")
    pre_i = tuple(path[: i + 1])
    pre_j = tuple(path[: j + 1])
    before, segment, after = set(), set(), set()
    for v in tree.nodes:
        rp = tree.root_path(v)
        if rp[: j + 1] == pre_j:
            after.add(v)
        elif rp[: i + 1] == pre_i:
            segment.add(v)
        else:
            before.add(v)
    return PumpPartition(frozenset(before), frozenset(segment), frozenset(after))


def pump(tree: FiniteTree, path: Sequence[str], i: int, j: int, k: int) -> FiniteTree:
    """The k-fold pump between v_i and v_j: segment nodes become (v, c)
    copies for c < k, the copies chain through the v_{j-1} -> v_j edge's
    action, and k = 0 bridges v_{i-1} straight to v_j."""
    if k < 0:
        raise PolymuError("k must be >= 0")
    path = _validated_path(tree, path)
    part = partition_nodes(tree, path, i, j)
    seg = part.segment

    def cid(v: str, c: int) -> str:
        return f"({v},{c})"

    nodes = [v for v in tree.nodes if v not in seg]
    for c in range(k):
        nodes += [cid(v, c) for v in tree.nodes if v in seg]
    labels = {v: tree.label(v) for v in tree.nodes if v not in seg}
    for c in range(k):
        for v in tree.nodes:
            if v in seg:
                labels[cid(v, c)] = tree.label(v)

    edges = []
    for (u, a, w) in tree.edges:
        u_in, w_in = u in seg, w in seg
        if not u_in and not w_in:
            edges.append((u, a, w))
        elif u_in and w_in:
            edges += [(cid(u, c), a, cid(w, c)) for c in range(k)]
        elif u_in:
            # the unique exit edge v_{j-1} -> v_j
            if k > 0:
                edges.append((cid(u, k - 1), a, w))
        else:
            # the unique entry edge v_{i-1} -> v_i
            if k > 0:
                edges.append((u, a, cid(w, 0)))
            else:
                edges.append((u, a, path[j]))
    exit_action = tree.parent(path[j])[1]
    for c in range(k - 1):
        edges.append((cid(path[j - 1], c), exit_action, cid(path[i], c + 1)))

    return FiniteTree(tree.signature, nodes, tree.root, edges, labels)


def canonical_tree_form(tree: FiniteTree):
    """Order-independent nested-tuple form; equal forms mean isomorphic."""
    canon: dict = {}
    for level in reversed(tree.levels()):
        for v in level:
            kids = tuple(sorted((a, canon[w]) for a, w in tree.children(v)))
            canon[v] = (tuple(sorted(tree.label(v))), kids)
    return canon[tree.root]


def is_isomorphic(t1: FiniteTree, t2: FiniteTree) -> bool:
    return t1.signature == t2.signature and canonical_tree_form(t1) == canonical_tree_form(t2)


# -------------------------------------------------- word-shaped tree family


DEFAULT_WORD_SIG = Signature(("a", "b"), ("f",))

Word = Sequence[tuple[Iterable[str], str]]


def gen_rword_tree(word: Word, branching: int, depth: int,
                   sig: Signature = DEFAULT_WORD_SIG) -> FiniteTree:
    """Full branching-ary tree of the given depth: level-l nodes carry the
    l-th label set of the word and their outgoing edges the l-th action.
    When depth equals the word length the deepest level stays unlabeled."""
    if branching < 1:
        raise PolymuError("branching must be >= 1")
    if not 0 <= depth <= len(word):
        raise PolymuError("need 0 <= depth <= word length")
    for lv, (cols, act) in enumerate(word):
        if act not in sig.actions:
            raise PolymuError(f"word action {act} not in the signature")
        for c in cols:
            if c not in sig.colors:
                raise PolymuError(f"word color {c} not in the signature")
    nodes, edges, labels = ["n"], [], {}
    level = ["n"]
    for lv in range(depth + 1):
        if lv < len(word):
            for v in level:
                labels[v] = tuple(sorted(word[lv][0]))
        if lv == depth:
            break
        act = word[lv][1]
        nxt = []
        for v in level:
            for c in range(branching):
                w = f"{v}.{c}"
                nodes.append(w)
                edges.append((v, act, w))
                nxt.append(w)
        level = nxt
    return FiniteTree(sig, nodes, "n", edges, labels)


def is_rword(tree: FiniteTree) -> bool:
    """Same-depth nodes share one label set and one outgoing action; leaf
    nodes constrain nothing, so early truncation is allowed."""
    for level in tree.levels():
        if len({tree.label(v) for v in level}) > 1:
            return False
        acts = {a for v in level for a, _ in tree.children(v)}
        if len(acts) > 1:
            return False
    return True


def check_luni(tree: FiniteTree, color: Optional[str] = None) -> Optional[int]:
    """Least depth whose nodes all carry the color (default f), else None."""
    if color is None:
        color = "f" if "f" in tree.signature.colors else tree.signature.colors[0]
    for n, level in enumerate(tree.levels()):
        if all(tree.has_color(v, color) for v in level):
            return n
    return None


def check_relative_membership(
    phi: Formula,
    r_oracle: Callable[[FiniteTree], bool],
    trees: Iterable[FiniteTree],
) -> list[dict]:
    """Evaluate the formula only on trees inside the context language; a
    tree outside it gets no membership claim."""
    report = []
    for t in trees:
        in_r = bool(r_oracle(t))
        report.append({"in_r": in_r, "models": models(t, phi) if in_r else None})
    return report
