"""Alternating parity automata from formulas, and their acceptance games.

A closed arity-1 formula becomes an automaton whose states are the
subformulas of its positive normal form.  Running the automaton on a
graph is a parity game between Exists (claims acceptance) and Forall;
the game is solved exactly with Zielonka's recursive algorithm, which
also yields positional strategies for both players.
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from typing import Union

from .errors import FormulaError, PolymuError
from .graphs import FiniteTree, LabeledGraph, Signature
from .logic import (
    And,
    Box,
    Color,
    Diamond,
    FF,
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
    print_formula,
    validate_formula,
)

EXISTS = 0
FORALL = 1


@dataclass(frozen=True)
class TransLit:
    color: str
    positive: bool


@dataclass(frozen=True)
class TransMod:
    action: str
    existential: bool
    target: int


@dataclass(frozen=True)
class TransBool:
    conj: bool
    left: int
    right: int


Trans = Union[TransLit, TransMod, TransBool]


@dataclass(frozen=True)
class Apt:
    """Alternating parity automaton over arity-1 formulas.

    states holds the canonical text of the subformula each state stands
    for; delta and priority are indexed by state."""

    signature: Signature
    states: tuple[str, ...]
    initial: int
    delta: tuple[Trans, ...]
    priority: tuple[int, ...]

    def __repr__(self) -> str:
        return f"Apt(states={len(self.states)}, initial={self.initial})"


# ------------------------------------------------------------ normal form


def _strip_replace(n: Node) -> Node:
    """Drop arity-1 replacements; the only mapping there is the identity."""
    if isinstance(n, Replace):
        return _strip_replace(n.sub)
    if isinstance(n, Neg):
        return Neg(_strip_replace(n.sub))
    if isinstance(n, And):
        return And(_strip_replace(n.left), _strip_replace(n.right))
    if isinstance(n, Or):
        return Or(_strip_replace(n.left), _strip_replace(n.right))
    if isinstance(n, Diamond):
        return Diamond(n.action, n.comp, _strip_replace(n.sub))
    if isinstance(n, Box):
        return Box(n.action, n.comp, _strip_replace(n.sub))
    if isinstance(n, Mu):
        return Mu(n.var, _strip_replace(n.body))
    if isinstance(n, Nu):
        return Nu(n.var, _strip_replace(n.body))
    return n


def _pnf(n: Node, pos: bool, flipped: set) -> Node:
    if isinstance(n, TT):
        return TT() if pos else FF()
    if isinstance(n, FF):
        return FF() if pos else TT()
    if isinstance(n, Color):
        return n if pos else Neg(n)
    if isinstance(n, Var):
        # positivity of the input guarantees the occurrence comes out positive
        if pos == (n.name in flipped):
            raise FormulaError(f"variable {n.name} survives negatively")
        return n
    if isinstance(n, Neg):
        return _pnf(n.sub, not pos, flipped)
    if isinstance(n, And):
        l, r = _pnf(n.left, pos, flipped), _pnf(n.right, pos, flipped)
        return And(l, r) if pos else Or(l, r)
    if isinstance(n, Or):
        l, r = _pnf(n.left, pos, flipped), _pnf(n.right, pos, flipped)
        return Or(l, r) if pos else And(l, r)
    if isinstance(n, Diamond):
        sub = _pnf(n.sub, pos, flipped)
        return Diamond(n.action, n.comp, sub) if pos else Box(n.action, n.comp, sub)
    if isinstance(n, Box):
        sub = _pnf(n.sub, pos, flipped)
        return Box(n.action, n.comp, sub) if pos else Diamond(n.action, n.comp, sub)
    if isinstance(n, Replace):
        return Replace(n.mapping, _pnf(n.sub, pos, flipped))
    if isinstance(n, Mu):
        if pos:
            return Mu(n.var, _pnf(n.body, True, flipped))
        flipped.add(n.var)
        return Nu(n.var, _pnf(n.body, False, flipped))
    if isinstance(n, Nu):
        if pos:
            return Nu(n.var, _pnf(n.body, True, flipped))
        flipped.add(n.var)
        return Mu(n.var, _pnf(n.body, False, flipped))
    raise FormulaError(f"unknown node {type(n).__name__}")


def positive_normal_form(phi: Formula) -> Formula:
    """Negations pushed onto colors; negated fixpoints dualize and their
    variables flip polarity."""
    return Formula(phi.arity, _pnf(phi.root, True, set()))


# ------------------------------------------------------------ translation


def formula_to_apt(phi: Formula, sig: Signature) -> Apt:
    """States are the distinct subformulas of the positive normal form;
    a variable is identified with its binder's state.  Least fixpoints
    get the smallest odd priority at least the maximum inside their
    body, greatest fixpoints the smallest such even one; every other
    state has priority 0."""
    validate_formula(phi, sig)
    if phi.arity != 1:
        raise FormulaError("automaton translation needs an arity-1 formula")
    if free_vars(phi):
        raise FormulaError("automaton translation needs a closed formula")
    root = _pnf(_strip_replace(phi.root), True, set())

    names: list[str] = []
    delta: list[Trans | None] = []
    prio: list[int] = []
    key2id: dict[str, int] = {}
    binder: dict[str, int] = {}
    c0 = sig.colors[0]

    def text(n: Node) -> str:
        return print_formula(Formula(1, n))

    def build(n: Node) -> int:
        if isinstance(n, Var):
            return binder[n.name]
        t = text(n)
        q = key2id.get(t)
        if q is not None and delta[q] is not None:
            return q
        if q is None:
            q = len(names)
            key2id[t] = q
            names.append(t)
            delta.append(None)
            prio.append(0)
        if isinstance(n, (Mu, Nu)):
            binder[n.var] = q
            b = build(n.body)
            delta[q] = TransBool(False, b, b)
        elif isinstance(n, TT):
            delta[q] = TransBool(False, build(Color(c0, 0)), build(Neg(Color(c0, 0))))
        elif isinstance(n, FF):
            delta[q] = TransBool(True, build(Color(c0, 0)), build(Neg(Color(c0, 0))))
        elif isinstance(n, Color):
            delta[q] = TransLit(n.color, True)
        elif isinstance(n, Neg):
            delta[q] = TransLit(n.sub.color, False)
        elif isinstance(n, And):
            delta[q] = TransBool(True, build(n.left), build(n.right))
        elif isinstance(n, Or):
            delta[q] = TransBool(False, build(n.left), build(n.right))
        elif isinstance(n, Diamond):
            delta[q] = TransMod(n.action, True, build(n.sub))
        elif isinstance(n, Box):
            delta[q] = TransMod(n.action, False, build(n.sub))
        else:
            raise FormulaError(f"untranslatable node {type(n).__name__}")
        return q

    initial = build(root)

    def assign(n: Node) -> int:
        if isinstance(n, Var):
            return 0
        if isinstance(n, (Mu, Nu)):
            inner = assign(n.body)
            want_odd = isinstance(n, Mu)
            p = inner if inner % 2 == (1 if want_odd else 0) else inner + 1
            prio[key2id[text(n)]] = p
            return p
        return max((assign(c) for c in _children(n)), default=0)

    assign(root)
    return Apt(sig, tuple(names), initial, tuple(delta), tuple(prio))


def render_transition(t: Trans) -> str:
    if isinstance(t, TransLit):
        return t.color if t.positive else "~" + t.color
    if isinstance(t, TransMod):
        brackets = "<>" if t.existential else "[]"
        return f"{brackets[0]}{t.action}{brackets[1]}q{t.target}"
    op = "&" if t.conj else "|"
    return f"q{t.left} {op} q{t.right}"


def format_apt(apt: Apt) -> str:
    lines = [
        f"states {len(apt.states)} initial q{apt.initial}",
    ]
    for q, name in enumerate(apt.states):
        lines.append(f"q{q} p{apt.priority[q]} = {render_transition(apt.delta[q])}  ({name})")
    return "\n".join(lines)


# ------------------------------------------------------------ parity games


@dataclass(frozen=True)
class ParityGame:
    """Max-parity game; player 0 (Exists) wants the highest priority seen
    infinitely often to be even.  A player with no move loses."""

    labels: tuple[str, ...]
    owner: tuple[int, ...]
    priority: tuple[int, ...]
    moves: tuple[tuple[int, ...], ...]
    initial: int

    def __repr__(self) -> str:
        return f"ParityGame(positions={len(self.labels)}, initial={self.initial})"


@dataclass(frozen=True)
class GameResult:
    winner: tuple[int, ...]
    strategy: tuple[dict, dict]


def acceptance_game(apt: Apt, g: LabeledGraph) -> ParityGame:
    """Positions are (node, state) pairs.  Literal positions are terminal
    and owned by whoever loses there; modal and boolean positions are
    owned by Exists on disjunctive transitions, Forall on conjunctive."""
    if g.signature != apt.signature:
        raise PolymuError("acceptance_game: graph and automaton signatures differ")
    nq = len(apt.states)
    index = {v: i for i, v in enumerate(g.nodes)}

    def pid(v: str, q: int) -> int:
        return index[v] * nq + q

    labels, owner, priority, moves = [], [], [], []
    for v in g.nodes:
        for q in range(nq):
            t = apt.delta[q]
            labels.append(f"({v},q{q})")
            priority.append(apt.priority[q])
            if isinstance(t, TransLit):
                sat = g.has_color(v, t.color) == t.positive
                owner.append(FORALL if sat else EXISTS)
                moves.append(())
            elif isinstance(t, TransMod):
                owner.append(EXISTS if t.existential else FORALL)
                moves.append(tuple(pid(w, t.target) for w in g.succ(v, t.action)))
            else:
                owner.append(FORALL if t.conj else EXISTS)
                dests = sorted({pid(v, t.left), pid(v, t.right)})
                moves.append(tuple(dests))
    return ParityGame(
        tuple(labels), tuple(owner), tuple(priority), tuple(moves),
        pid(g.root, apt.initial),
    )


def solve_parity(game: ParityGame) -> GameResult:
    """Exact solution with winner and positional strategy per position.

    Dead ends are routed to a fresh losing sink for their owner, which
    makes the game total for the recursive attractor decomposition; the
    sinks are stripped from the answer."""
    n = len(game.labels)
    sink = {EXISTS: n, FORALL: n + 1}
    prio = list(game.priority) + [1, 0]
    owner = list(game.owner) + [EXISTS, FORALL]
    moves: list[tuple[int, ...]] = [
        m if m else (sink[game.owner[v]],) for v, m in enumerate(game.moves)
    ]
    moves += [(n,), (n + 1,)]
    preds: list[list[int]] = [[] for _ in range(n + 2)]
    for v, ms in enumerate(moves):
        for w in ms:
            preds[w].append(v)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 3 * n + 200))

    def attractor(target: set, region: set, player: int, strat: dict) -> set:
        attr = set(target)
        count = {}
        queue = deque(sorted(target))
        while queue:
            v = queue.popleft()
            for u in preds[v]:
                if u not in region or u in attr:
                    continue
                if owner[u] == player:
                    attr.add(u)
                    strat[u] = v
                    queue.append(u)
                else:
                    c = count.get(u)
                    if c is None:
                        c = sum(1 for w in moves[u] if w in region)
                    c -= 1
                    count[u] = c
                    if c == 0:
                        attr.add(u)
                        queue.append(u)
        return attr

    def zielonka(region: set) -> tuple[set, set, dict, dict]:
        if not region:
            return set(), set(), {}, {}
        p = max(prio[v] for v in region)
        sigma = p % 2
        top = {v for v in region if prio[v] == p}
        s_attr: dict = {}
        a = attractor(top, region, sigma, s_attr)
        w0, w1, s0, s1 = zielonka(region - a)
        w_sig, w_opp = (w0, w1) if sigma == EXISTS else (w1, w0)
        s_sig, s_opp = (s0, s1) if sigma == EXISTS else (s1, s0)
        if not w_opp:
            for v in sorted(top):
                if owner[v] == sigma:
                    s_sig[v] = min(w for w in moves[v] if w in region)
            s_sig.update(s_attr)
            win_sig, win_opp, strat_opp = set(region), set(), {}
        else:
            s_back: dict = {}
            b = attractor(w_opp, region, 1 - sigma, s_back)
            w0b, w1b, s0b, s1b = zielonka(region - b)
            wsb, wob = (w0b, w1b) if sigma == EXISTS else (w1b, w0b)
            ssb, sob = (s0b, s1b) if sigma == EXISTS else (s1b, s0b)
            win_sig, s_sig = wsb, ssb
            win_opp = b | wob
            strat_opp = dict(s_opp)
            strat_opp.update(s_back)
            strat_opp.update(sob)
        if sigma == EXISTS:
            return win_sig, win_opp, s_sig, strat_opp
        return win_opp, win_sig, strat_opp, s_sig

    try:
        w0, w1, s0, s1 = zielonka(set(range(n + 2)))
    finally:
        sys.setrecursionlimit(limit)

    winner = tuple(EXISTS if v in w0 else FORALL for v in range(n))
    strategies: tuple[dict, dict] = ({}, {})
    for player, s in ((EXISTS, s0), (FORALL, s1)):
        for v, w in s.items():
            if v < n and w < n:
                strategies[player][v] = w
    return GameResult(winner, strategies)


def strategy_is_winning(game: ParityGame, player: int, win: set, strat: dict) -> bool:
    """Check a positional strategy on a claimed winning set: the set must
    be closed under opponent moves and the strategy, the player never
    gets stuck, and the restricted graph has no cycle whose maximal
    priority favors the opponent."""
    succ: dict[int, tuple[int, ...]] = {}
    for v in win:
        if game.owner[v] == player:
            w = strat.get(v)
            if w is None or w not in game.moves[v] or w not in win:
                return False
            succ[v] = (w,)
        else:
            if any(w not in win for w in game.moves[v]):
                return False
            succ[v] = game.moves[v]

    bad = 1 - player % 2
    bad_prios = sorted({game.priority[v] for v in win if game.priority[v] % 2 == bad})
    for p in bad_prios:
        sub = {v for v in win if game.priority[v] <= p}
        for comp in _sccs(sub, succ):
            if not any(game.priority[v] == p for v in comp):
                continue
            if len(comp) > 1 or any(v in succ[v] for v in comp):
                return False
    return True


def _sccs(nodes: set, succ: dict) -> list[set]:
    """Tarjan, iterative."""
    order: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set = set()
    stack: list[int] = []
    out: list[set] = []
    counter = [0]

    for root in sorted(nodes):
        if root in order:
            continue
        work = [(root, iter([w for w in succ.get(root, ()) if w in nodes]))]
        order[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in order:
                    order[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([u for u in succ.get(w, ()) if u in nodes])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], order[w])
            if advanced:
                continue
            work.pop()
            if low[v] == order[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return out


# ------------------------------------------------------------ runs on trees


def accepts(apt: Apt, g: LabeledGraph) -> bool:
    game = acceptance_game(apt, g)
    res = solve_parity(game)
    return res.winner[game.initial] == EXISTS


def winning_state_sets(apt: Apt, tree: FiniteTree, path: list[str]) -> list[frozenset[int]]:
    """For each node v on the path, the states q with (v, q) won by Exists
    in the acceptance game on the tree."""
    _check_root_path(tree, path)
    nq = len(apt.states)
    game = acceptance_game(apt, tree)
    res = solve_parity(game)
    index = {v: i for i, v in enumerate(tree.nodes)}
    out = []
    for v in path:
        base = index[v] * nq
        out.append(frozenset(q for q in range(nq) if res.winner[base + q] == EXISTS))
    return out


def _check_root_path(tree: FiniteTree, path: list[str]) -> None:
    if not path or path[0] != tree.root:
        raise PolymuError("path must start at the root")
    for t in range(1, len(path)):
        par = tree.parent(path[t])
        if par is None or par[0] != path[t - 1]:
            raise PolymuError(f"path breaks between {path[t - 1]} and {path[t]}")


def find_pumping_pair(apt: Apt, tree: FiniteTree, path: list[str]) -> tuple[int, int]:
    """Least (i, j) with 1 <= i < j and equal Exists-winning state sets at
    path nodes i and j.  The path needs at least 2^|Q| + 2 nodes so the
    pair exists by pigeonhole; the tree must be accepted."""
    _check_root_path(tree, path)
    n = 2 ** len(apt.states) + 1
    if len(path) < n + 1:
        raise PolymuError(
            f"path has {len(path)} nodes, need at least {n + 1} for {len(apt.states)} states"
        )
    game = acceptance_game(apt, tree)
    res = solve_parity(game)
    if res.winner[game.initial] != EXISTS:
        raise PolymuError("the automaton does not accept the tree")
    nq = len(apt.states)
    index = {v: i for i, v in enumerate(tree.nodes)}
    sets = []
    for v in path[: n + 1]:
        base = index[v] * nq
        sets.append(frozenset(q for q in range(nq) if res.winner[base + q] == EXISTS))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if sets[i] == sets[j]:
                return i, j
    raise PolymuError("no repeated winning-state set on the path")
