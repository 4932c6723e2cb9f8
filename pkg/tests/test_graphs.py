"""Core graph type, products, unfolding, serialization."""
import itertools

import pytest

from polymu.errors import GraphFormatError
from polymu.graphs import (
    FiniteTree,
    LabeledGraph,
    Signature,
    lift_signature,
    power,
    product,
    read_graph,
    read_tree,
    split_lifted,
    unfold,
    write_graph,
)

from conftest import SIG_AF, SIG_ABF, make_loop3


def test_signature_validation():
    with pytest.raises(GraphFormatError, match="actions"):
        Signature([], ["f"])
    with pytest.raises(GraphFormatError, match="colors"):
        Signature(["a"], [])
    with pytest.raises(GraphFormatError, match="duplicate"):
        Signature(["a", "a"], ["f"])
    with pytest.raises(GraphFormatError, match="duplicate"):
        Signature(["a"], ["a"])
    with pytest.raises(GraphFormatError, match="bad name"):
        Signature(["A"], ["f"])
    with pytest.raises(GraphFormatError, match="bad name"):
        Signature(["a@1@0"], ["f"])
    # lifted-form names are fine
    Signature(["a@0", "rst@0"], ["f@0"])


def test_lift_signature_shape():
    sig = lift_signature(SIG_ABF, 2)
    assert sig.actions == ("a@0", "a@1", "b@0", "b@1", "rst@0", "rst@1")
    assert sig.colors == ("f@0", "f@1")
    base, d = split_lifted(sig)
    assert base == SIG_ABF and d == 2


def test_lift_rejects_relift_and_reserved():
    with pytest.raises(GraphFormatError, match="lifted"):
        lift_signature(lift_signature(SIG_AF, 1), 2)
    with pytest.raises(GraphFormatError, match="reserved"):
        lift_signature(Signature(["rst"], ["f"]), 2)


def test_split_lifted_rejects_partial():
    with pytest.raises(GraphFormatError):
        split_lifted(Signature(["a@0", "rst@0", "rst@1"], ["f@0", "f@1"]))
    with pytest.raises(GraphFormatError):
        split_lifted(Signature(["a"], ["f"]))
    with pytest.raises(GraphFormatError, match="reset"):
        split_lifted(Signature(["rst@0"], ["f@0"]))


def test_graph_validation_errors():
    with pytest.raises(GraphFormatError, match="root"):
        LabeledGraph(SIG_AF, ["0"], "9", [], {})
    with pytest.raises(GraphFormatError, match="duplicate id"):
        LabeledGraph(SIG_AF, ["0", "0"], "0", [], {})
    with pytest.raises(GraphFormatError, match="unknown action 'z'"):
        LabeledGraph(SIG_AF, ["0"], "0", [("0", "z", "0")], {})
    with pytest.raises(GraphFormatError, match="unknown target"):
        LabeledGraph(SIG_AF, ["0"], "0", [("0", "a", "1")], {})
    with pytest.raises(GraphFormatError, match="duplicate edge"):
        LabeledGraph(SIG_AF, ["0"], "0", [("0", "a", "0"), ("0", "a", "0")], {})
    with pytest.raises(GraphFormatError, match="unknown color"):
        LabeledGraph(SIG_AF, ["0"], "0", [], {"0": ["g"]})
    with pytest.raises(GraphFormatError, match="unknown node"):
        LabeledGraph(SIG_AF, ["0"], "0", [], {"1": ["f"]})


def test_adjacency(loop3):
    assert loop3.succ("0", "a") == ("1",)
    assert loop3.succ("2", "a") == ("1",)
    assert loop3.pred("1", "a") == ("0", "2")
    assert loop3.label("1") == frozenset({"f"})
    assert loop3.label("0") == frozenset()


def test_power_counts(loop3):
    p = power(loop3, 2)
    assert len(p.nodes) == 9
    assert len(p.edges) == 36
    by_action = {}
    for _, a, _ in p.edges:
        by_action[a] = by_action.get(a, 0) + 1
    assert by_action == {"a@0": 9, "a@1": 9, "rst@0": 9, "rst@1": 9}
    assert p.root == "(0,0)"
    assert p.label("(1,0)") == frozenset({"f@0"})
    assert p.label("(0,1)") == frozenset({"f@1"})
    assert p.label("(1,1)") == frozenset({"f@0", "f@1"})
    assert p.succ("(0,0)", "a@0") == ("(1,0)",)
    assert p.succ("(2,1)", "rst@0") == ("(0,1)",)
    assert p.succ("(2,1)", "rst@1") == ("(2,0)",)


def _edge_count_formula(g, d):
    # one reset edge per node per component, plus lifted copies of base edges
    n = len(g.nodes)
    return d * n**d + d * len(g.edges) * n ** (d - 1)


def test_product_edge_count_brute_force():
    sig = SIG_ABF
    samples = [
        LabeledGraph(sig, ["0"], "0", [], {}),
        LabeledGraph(sig, ["0", "1"], "0", [("0", "a", "1"), ("1", "b", "0"), ("1", "a", "1")], {"1": ["f"]}),
        make_loop3_ab(),
        LabeledGraph(
            sig,
            ["0", "1", "2", "3"],
            "0",
            [("0", "a", "1"), ("0", "b", "2"), ("2", "a", "3"), ("3", "b", "3"), ("1", "a", "0")],
            {"3": ["f"]},
        ),
    ]
    for g in samples:
        for d in (1, 2, 3):
            p = power(g, d)
            assert len(p.nodes) == len(g.nodes) ** d
            assert len(p.edges) == _edge_count_formula(g, d)


def make_loop3_ab():
    return LabeledGraph(
        SIG_ABF,
        ["0", "1", "2"],
        "0",
        [("0", "a", "1"), ("1", "b", "2"), ("2", "a", "1")],
        {"1": ["f"]},
    )


def test_product_mixed_factors():
    g1 = make_loop3()
    g2 = LabeledGraph(SIG_AF, ["x"], "x", [("x", "a", "x")], {"x": ["f"]})
    p = product([g1, g2])
    assert len(p.nodes) == 3
    assert p.root == "(0,x)"
    assert p.label("(1,x)") == frozenset({"f@0", "f@1"})
    assert p.succ("(0,x)", "a@1") == ("(0,x)",)
    with pytest.raises(GraphFormatError, match="signature"):
        product([g1, LabeledGraph(SIG_ABF, ["0"], "0", [], {})])
    with pytest.raises(GraphFormatError, match="at least one"):
        product([])


def test_unfold_shape(loop3):
    t0 = unfold(loop3, 0)
    assert len(t0.nodes) == 1 and t0.root == "0"
    t = unfold(loop3, 3)
    # deterministic graph: a single path 0,1,2,1
    assert len(t.nodes) == 4
    leaves = [v for v in t.nodes if not t.children(v)]
    assert len(leaves) == 1
    assert t.depth_of(leaves[0]) == 3
    assert t.label(leaves[0]) == frozenset({"f"})
    with pytest.raises(GraphFormatError, match="depth"):
        unfold(loop3, -1)


def test_unfold_branching():
    g = LabeledGraph(
        SIG_ABF,
        ["0", "1"],
        "0",
        [("0", "a", "0"), ("0", "a", "1"), ("0", "b", "1")],
        {"1": ["f"]},
    )
    t = unfold(g, 2)
    # level sizes: 1, 3, then only the a-self-loop branch continues
    assert [len(lv) for lv in t.levels()] == [1, 3, 3]
    assert isinstance(t, FiniteTree)


def test_tree_validation():
    with pytest.raises(GraphFormatError, match="two incoming"):
        FiniteTree(SIG_ABF, ["0", "1"], "0", [("0", "a", "1"), ("0", "b", "1")], {})
    with pytest.raises(GraphFormatError, match="root .* incoming"):
        FiniteTree(SIG_AF, ["0", "1"], "0", [("0", "a", "1"), ("1", "a", "0")], {})
    with pytest.raises(GraphFormatError, match="unreachable"):
        FiniteTree(SIG_AF, ["0", "1"], "0", [], {})


def test_tree_paths():
    t = FiniteTree(
        SIG_ABF,
        ["r", "x", "y", "z"],
        "r",
        [("r", "a", "x"), ("x", "b", "y"), ("r", "b", "z")],
        {},
    )
    assert t.root_path("y") == ("r", "x", "y")
    assert t.parent("y") == ("x", "b")
    assert t.parent("r") is None
    assert t.levels() == [["r"], ["x", "z"], ["y"]]


CANON_LOOP3 = (
    '{"actions":["a"],"colors":["f"],'
    '"edges":[["0","a","1"],["1","a","2"],["2","a","1"]],'
    '"nodes":[{"colors":[],"id":"0"},{"colors":["f"],"id":"1"},{"colors":[],"id":"2"}],'
    '"root":"0"}'
)


def test_write_canonical(loop3):
    assert write_graph(loop3) == CANON_LOOP3


def test_read_write_round_trip(loop3):
    for g in (loop3, power(loop3, 2), unfold(loop3, 3)):
        assert read_graph(write_graph(g)) == g
        assert write_graph(read_graph(write_graph(g))) == write_graph(g)


def test_read_errors():
    ok = CANON_LOOP3
    with pytest.raises(GraphFormatError, match="invalid JSON"):
        read_graph(b"{nope")
    with pytest.raises(GraphFormatError, match="top level"):
        read_graph(b"[1]")
    with pytest.raises(GraphFormatError, match="root: missing"):
        read_graph(ok.replace('"root":"0"', '"rooot":"0"').replace("}$", "}"))
    with pytest.raises(GraphFormatError, match="unknown field"):
        read_graph(ok[:-1] + ',"extra":1}')
    with pytest.raises(GraphFormatError, match=r"nodes\[0\]"):
        read_graph(ok.replace('{"colors":[],"id":"0"}', '{"id":"0"}'))
    with pytest.raises(GraphFormatError, match=r"edges\[0\]"):
        read_graph(ok.replace('["0","a","1"]', '["0","a"]'))
    with pytest.raises(GraphFormatError, match="unknown action 'z'"):
        read_graph(ok.replace('["0","a","1"]', '["0","z","1"]'))
    with pytest.raises(GraphFormatError, match="root"):
        read_graph(ok.replace('"root":"0"', '"root":"9"'))


def test_read_tree():
    g = make_loop3()
    with pytest.raises(GraphFormatError):
        read_tree(write_graph(g))
    t = unfold(g, 2)
    assert read_tree(write_graph(t)).root_path(t.nodes[-1]) == t.root_path(t.nodes[-1])


def test_product_label_and_edge_semantics_brute():
    # every product edge either moves one component along a base edge or resets it
    g = make_loop3_ab()
    for d in (1, 2):
        p = power(g, d)
        base, dd = split_lifted(p.signature)
        assert dd == d and base == g.signature
        for src, act, dst in p.edges:
            s = src[1:-1].split(",")
            t = dst[1:-1].split(",")
            name, i = act.rsplit("@", 1)
            i = int(i)
            assert [x for k, x in enumerate(s) if k != i] == [
                x for k, x in enumerate(t) if k != i
            ]
            if name == "rst":
                assert t[i] == g.root
            else:
                assert t[i] in g.succ(s[i], name)
        for t in itertools.product(g.nodes, repeat=d):
            v = "(" + ",".join(t) + ")"
            want = {f"{c}@{i}" for i in range(d) for c in g.label(t[i])}
            assert p.label(v) == frozenset(want)
