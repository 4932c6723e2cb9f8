"""Formula syntax: parser, printer, arity transforms, generated formulas."""
import pytest

from polymu.errors import FormulaError, ParseError
from polymu.graphs import Signature, lift_signature
from polymu.logic import (
    And,
    Box,
    Color,
    Diamond,
    FF,
    Formula,
    Mu,
    Neg,
    Nu,
    Or,
    Replace,
    TT,
    Var,
    bound_vars,
    check_d_rooted,
    formula_size,
    free_vars,
    gen_allbox,
    gen_bisim_formula,
    gen_per_formula,
    gen_pow_formula,
    gen_rst_formula,
    monofy,
    parse_formula,
    polyfy,
    print_formula,
    validate_formula,
)

SIG = Signature(["a", "b"], ["f"])
SIG3 = Signature(["a"], ["f", "g", "h"])


def test_parse_basic_shape():
    phi = parse_formula("mu X. f | <a>X | <b>X", SIG, 1)
    want = Mu(
        "X",
        Or(
            Or(Color("f", 0), Diamond("a", 0, Var("X"))),
            Diamond("b", 0, Var("X")),
        ),
    )
    assert phi == Formula(1, want)
    assert print_formula(phi) == "mu X. f@0 | <a@0>X | <b@0>X"


def test_parse_precedence():
    phi = parse_formula("~f & g | h", SIG3, 1)
    assert phi.root == Or(And(Neg(Color("f", 0)), Color("g", 0)), Color("h", 0))
    phi = parse_formula("f | g & h", SIG3, 1)
    assert phi.root == Or(Color("f", 0), And(Color("g", 0), Color("h", 0)))
    phi = parse_formula("(f | g) & h", SIG3, 1)
    assert phi.root == And(Or(Color("f", 0), Color("g", 0)), Color("h", 0))
    phi = parse_formula("[a]<a>f", SIG3, 1)
    assert phi.root == Box("a", 0, Diamond("a", 0, Color("f", 0)))


def test_fixpoint_extends_right():
    phi = parse_formula("mu X. f & nu Y. g | X & Y", SIG3, 1)
    assert phi.root == Mu(
        "X",
        And(
            Color("f", 0),
            Nu("Y", Or(Color("g", 0), And(Var("X"), Var("Y")))),
        ),
    )
    phi2 = parse_formula("<a>mu X. f | <a>X", SIG3, 1)
    assert isinstance(phi2.root, Diamond) and isinstance(phi2.root.sub, Mu)


def test_parse_components_and_replace():
    phi = parse_formula("%{1,1}(f@0 & <a@1>g@1)", SIG3, 2)
    assert phi.root == Replace(
        (1, 1), And(Color("f", 0), Diamond("a", 1, Color("g", 1)))
    )
    with pytest.raises(ParseError, match="lists 3 components"):
        parse_formula("%{0,1,0}f@0", SIG3, 2)
    with pytest.raises(ParseError, match="out of range"):
        parse_formula("%{0,2}f@0", SIG3, 2)


def test_parse_lifted_names():
    lsig = lift_signature(SIG, 2)
    phi = parse_formula("<a@1@0>f@0@1", lsig, 2)
    assert phi.root == Diamond("a@1", 0, Color("f@0", 1))
    # at arity 1 the trailing index may be omitted or explicit
    assert parse_formula("f@0", lsig, 1) == parse_formula("f@0@0", lsig, 1)


def test_parse_errors():
    with pytest.raises(ParseError, match="unknown color 'z'"):
        parse_formula("z", SIG, 1)
    with pytest.raises(ParseError, match="unknown action 'z'"):
        parse_formula("<z>f", SIG, 1)
    with pytest.raises(ParseError, match="out of range"):
        parse_formula("f@1", SIG, 1)
    with pytest.raises(ParseError, match="needs a component index"):
        parse_formula("f", SIG, 2)
    with pytest.raises(ParseError, match="bound twice"):
        parse_formula("mu X. f | mu X. <a>X", SIG, 1)
    with pytest.raises(ParseError, match="bound twice"):
        parse_formula("(mu X. f | X) & mu X. g | X", SIG3, 1)
    with pytest.raises(ParseError, match="negative occurrence"):
        parse_formula("mu X. f | ~X", SIG, 1)
    with pytest.raises(ParseError, match="negative occurrence"):
        parse_formula("mu X. f | ~<a>~~X", SIG, 1)
    with pytest.raises(ParseError, match="trailing input"):
        parse_formula("f f", SIG, 1)
    with pytest.raises(ParseError, match="unexpected character"):
        parse_formula("f ? g", SIG, 1)
    with pytest.raises(ParseError, match="expected a formula"):
        parse_formula("f &", SIG, 1)
    with pytest.raises(ParseError, match="expected a variable name"):
        parse_formula("mu & f", SIG, 1)
    # double negation over a bound variable is fine
    parse_formula("mu X. f | ~~X", SIG, 1)
    # free variables are allowed, as is negating them
    assert free_vars(parse_formula("~Y | f", SIG, 1)) == frozenset({"Y"})


def test_print_round_trip_structural():
    cases = [
        Formula(1, And(Color("f", 0), And(Color("g", 0), Color("h", 0)))),
        Formula(1, Or(Color("f", 0), Or(Color("g", 0), Color("h", 0)))),
        Formula(1, And(Or(Color("f", 0), Color("g", 0)), Color("h", 0))),
        Formula(1, Neg(Mu("X", Or(Color("f", 0), Diamond("a", 0, Var("X")))))),
        Formula(1, And(Mu("X", Var("X")), Color("g", 0))),
        Formula(1, Or(Mu("X", Var("X")), Nu("Y", Var("Y")))),
        Formula(1, Diamond("a", 0, Mu("X", Or(Var("X"), Color("f", 0))))),
        Formula(1, Box("a", 0, TT())),
        Formula(1, Neg(Neg(FF()))),
        Formula(2, Replace((1, 0), Mu("X", Or(Color("f", 1), Var("X"))))),
        Formula(2, And(Replace((0, 0), Color("f", 1)), Color("g", 0))),
    ]
    for phi in cases:
        validate_formula(phi, SIG3)
        text = print_formula(phi)
        assert parse_formula(text, SIG3, phi.arity) == phi, text


def test_print_generated_round_trip():
    lsig = lift_signature(SIG, 2)
    for phi in (
        gen_bisim_formula(0, 1, SIG, 2),
        gen_per_formula(SIG, 2),
        gen_rst_formula(SIG, 2),
        gen_pow_formula(SIG, 2),
    ):
        validate_formula(phi, lsig)
        assert parse_formula(print_formula(phi), lsig, 2) == phi


def test_validate_formula_rejects():
    with pytest.raises(FormulaError, match="bound twice"):
        validate_formula(Formula(1, And(Mu("X", Var("X")), Mu("X", Var("X")))), SIG)
    with pytest.raises(FormulaError, match="negative occurrence"):
        validate_formula(Formula(1, Mu("X", Neg(Var("X")))), SIG)
    with pytest.raises(FormulaError, match="unknown color"):
        validate_formula(Formula(1, Color("q", 0)), SIG)
    with pytest.raises(FormulaError, match="out of range"):
        validate_formula(Formula(1, Diamond("a", 1, TT())), SIG)
    with pytest.raises(FormulaError, match="replacement"):
        validate_formula(Formula(2, Replace((0,), TT())), SIG)
    with pytest.raises(FormulaError, match="arity"):
        validate_formula(Formula(0, TT()), SIG)


def test_size_and_vars():
    phi = parse_formula("mu X. f | <a>X", SIG, 1)
    assert formula_size(phi) == 5
    assert bound_vars(phi) == frozenset({"X"})
    assert free_vars(phi) == frozenset()


ROOTED = "mu X. (f@0 & %{1,1}X) | <a@0>X"


def test_check_d_rooted():
    phi = parse_formula(ROOTED, SIG, 2)
    assert check_d_rooted(phi, 1)
    assert not check_d_rooted(phi, 2)  # wrong arity
    assert not check_d_rooted(parse_formula("f@1", SIG, 2), 1)  # touches comp d
    assert not check_d_rooted(parse_formula("<a@1>f@0", SIG, 2), 1)
    assert not check_d_rooted(parse_formula("%{1,0}f@0", SIG, 2), 1)  # swap
    assert not check_d_rooted(parse_formula("%{0,1}f@0", SIG, 2), 1)  # identity
    assert check_d_rooted(parse_formula("%{2,1,2}f@1", SIG, 3), 2)


def test_monofy_shape():
    phi = parse_formula(ROOTED, SIG, 2)
    psi = monofy(phi, 1)
    lsig = lift_signature(SIG, 1)
    validate_formula(psi, lsig)
    assert psi == Formula(
        1,
        Mu(
            "X",
            Or(
                And(Color("f@0", 0), Diamond("rst@0", 0, Var("X"))),
                Diamond("a@0", 0, Var("X")),
            ),
        ),
    )
    with pytest.raises(FormulaError, match="rooted"):
        monofy(parse_formula("f@1", SIG, 2), 1)


def test_polyfy_inverse():
    for text, d in [
        (ROOTED, 1),
        ("nu Y. (g@1 | ~f@0) & [a@2]%{0,3,2,3}Y", 3),
        ("tt & ff", 2),
    ]:
        sig = SIG3 if d == 3 else SIG
        phi = parse_formula(text, sig, d + 1)
        assert check_d_rooted(phi, d)
        assert polyfy(monofy(phi, d), d) == phi


def test_polyfy_rejects_outside_fragment():
    lsig = lift_signature(SIG, 1)
    with pytest.raises(FormulaError, match="no arity-2 counterpart"):
        polyfy(parse_formula("[rst@0]f@0", lsig, 1), 1)
    with pytest.raises(FormulaError, match="no lifted counterpart"):
        polyfy(Formula(1, Replace((0,), TT())), 1)
    with pytest.raises(FormulaError, match="not a lifted name"):
        polyfy(parse_formula("f", SIG, 1), 1)
    with pytest.raises(FormulaError, match="exceeds dimension"):
        polyfy(parse_formula("f@1@0", lift_signature(SIG, 2), 1), 1)
    with pytest.raises(FormulaError, match="arity-1"):
        polyfy(parse_formula("f@0", SIG, 2), 1)


def test_monofy_polyfy_round_trip_on_lifted_side():
    lsig = lift_signature(SIG, 2)
    psi = parse_formula("mu X. f@1@0 | <a@0>X | <rst@1>[b@0]X", lsig, 1)
    assert monofy(polyfy(psi, 2), 2) == psi


def test_generated_formulas_are_wellformed():
    lsig = lift_signature(SIG, 2)
    for d in (1, 2, 3):
        ls = lift_signature(SIG, d)
        for i in range(d):
            for j in range(d):
                validate_formula(gen_bisim_formula(i, j, SIG, d), ls)
        validate_formula(gen_per_formula(SIG, d), ls)
        validate_formula(gen_rst_formula(SIG, d), ls)
        validate_formula(gen_pow_formula(SIG, d), ls)
    inner = gen_bisim_formula(0, 1, SIG, 2)
    outer = gen_allbox(0, inner, SIG, 2)
    validate_formula(outer, lsig)
    with pytest.raises(FormulaError, match="out of range"):
        gen_bisim_formula(0, 2, SIG, 2)
    with pytest.raises(FormulaError, match="out of range"):
        gen_allbox(2, inner, SIG, 2)
