import random

import pytest
from hypothesis import given, settings

from msc.errors import (
    ArityError, CyclicBinding, DuplicateName, FiberShapeError, InvalidDeclaration,
    ParseError, StackSyntaxError, UnknownName,
)
from msc.lang import (
    AffineSpace, ClassifyingGL, Complement, DisjointUnion, EilenbergMacLaneGa,
    Fibration, GeneralLinear, GenRef, Inverse, MultiplicativeGroup, Point, Product,
    ProjectiveSpace, QuotientByGL, Torus, parse, parse_expr, pretty,
)
from msc.ring import Poly
from strategies import DECLS, depth, exprs, random_expr


def test_parse_product_binding():
    p = parse("let f = GL(2) * B GL(2);")
    assert list(p.bindings) == ["f"]
    assert p.bindings["f"] == Product([GeneralLinear(2), ClassifyingGL(2)])


def test_parse_complement():
    p = parse("let p = P(2) - P(1);")
    assert p.bindings["p"] == Complement(ProjectiveSpace(2), ProjectiveSpace(1))


def test_fiber_shape_rejected():
    with pytest.raises(FiberShapeError) as info:
        parse("let bad = Fib(A(1), P(1));")
    assert isinstance(info.value, ArityError)
    assert (info.value.line, info.value.col) == (1, 21)


@pytest.mark.parametrize("fiber", ["pt", "A(3)", "Gm", "GL(2)", "T(2)", "K(Ga,4)", "A(1) * Gm", "X"])
def test_licensed_fibers(fiber):
    text = "gen X affine { }; let f = Fib(P(1), %s);" % fiber
    assert isinstance(parse(text).bindings["f"], Fibration)


@pytest.mark.parametrize("fiber", ["Y", "B Gm", "P(1) * A(1)", "K(Ga,1) * A(1)", "A(2) - pt", "[pt / GL(1)]"])
def test_unlicensed_fibers(fiber):
    with pytest.raises(FiberShapeError):
        parse("gen Y { }; let f = Fib(pt, %s);" % fiber)


def test_precedence_and_associativity():
    e = parse_expr("pt + A(1) * Gm - P(2) + GL(1)")
    assert e == DisjointUnion([
        Complement(DisjointUnion([Point(), Product([AffineSpace(1), MultiplicativeGroup()])]), ProjectiveSpace(2)),
        GeneralLinear(1),
    ])
    assert parse_expr("pt - (A(1) - Gm)") == Complement(Point(), Complement(AffineSpace(1), MultiplicativeGroup()))
    assert parse_expr("(pt + pt) + pt") == DisjointUnion([DisjointUnion([Point(), Point()]), Point()])


def test_all_constructors():
    text = """
    gen X affine { class: L^2 - 1; count: {2 -> 3, 3 -> 8}; };
    let e = [X / GL(3)] + Fib(B Gm, K(Ga,2)) * inv(T(2)) - A(0);
    """
    e = parse(text).bindings["e"]
    assert e == Complement(
        DisjointUnion([
            QuotientByGL(GenRef("X"), 3),
            Product([Fibration(_bgm(), EilenbergMacLaneGa(2)), Inverse(Torus(2))]),
        ]),
        AffineSpace(0),
    )


def _bgm():
    from msc.lang import ClassifyingGm
    return ClassifyingGm()


def test_bindings_expand_in_place():
    p = parse("let a = GL(2); let b = a * a;")
    assert p.bindings["b"] == Product([GeneralLinear(2), GeneralLinear(2)])


def test_comments_and_whitespace():
    p = parse("# header\nlet a = pt; # trailing\n\n  let b=Gm;")
    assert list(p.bindings) == ["a", "b"]


def test_generator_declaration():
    p = parse("gen S affine { class: L^3 - L; count: {2 -> 6, 4 -> 60}; hodge: { (3,3) -> 1, (1,1) -> -1 ; order 6 } };")
    d = p.decls["S"]
    assert d.affine and d.class_poly == Poly.from_coeffs({3: 1, 1: -1})
    assert d.count_table == {2: 6, 4: 60}
    assert d.hodge.terms() == [(1, 1, -1), (3, 3, 1)] and d.hodge.order == 6


def test_generator_defaults_non_affine():
    assert parse("gen Z { };").decls["Z"].affine is False


@pytest.mark.parametrize("text", [
    "gen S { class: L^2; count: {2 -> 5}; };",
    "gen S { class: L; hodge: { (0,0) -> 1 ; order 2 }; };",
    "gen S { count: {6 -> 1}; };",
])
def test_inconsistent_declaration(text):
    with pytest.raises(InvalidDeclaration):
        parse(text)


@pytest.mark.parametrize("text, exc, line, col", [
    ("let a = pt +;", StackSyntaxError, 1, 13),
    ("let a = pt;\nlet a = Gm;", DuplicateName, 2, 5),
    ("gen X { };\nlet X = pt;", DuplicateName, 2, 5),
    ("let a = b;", UnknownName, 1, 9),
    ("let a = a;", CyclicBinding, 1, 9),
    ("let a = b;\nlet b = pt;", CyclicBinding, 1, 9),
    ("let a = GL(0);", ArityError, 1, 9),
    ("let a = T(0);", ArityError, 1, 9),
    ("let a = K(Ga,0);", ArityError, 1, 9),
    ("let a = [pt / GL(0)];", ArityError, 1, 15),
    ("let a = A(-1);", ArityError, 1, 9),
    ("let a = pt $ pt;", StackSyntaxError, 1, 12),
    ("let a = pt", StackSyntaxError, 1, 11),
    ("gen pt { };", StackSyntaxError, 1, 5),
    ("gen X { colour: 3 };", StackSyntaxError, 1, 9),
    ("pt;", StackSyntaxError, 1, 1),
])
def test_errors_carry_positions(text, exc, line, col):
    with pytest.raises(exc) as info:
        parse(text, source="t.stk")
    assert (info.value.line, info.value.col) == (line, col)
    assert str(info.value).startswith(f"t.stk:{line}:{col}:")


def test_prelude_shares_names():
    first = parse("gen X affine { }; let a = A(1);")
    second = parse("let b = [X / GL(1)] + a;", prelude=first)
    assert second.bindings["b"] == DisjointUnion([QuotientByGL(GenRef("X"), 1), AffineSpace(1)])
    assert set(second.decls) == {"X"}


def test_constructor_arity_checks():
    with pytest.raises(ArityError):
        GeneralLinear(0)
    with pytest.raises(ArityError):
        DisjointUnion([Point()])
    with pytest.raises(ArityError):
        Product([])


def test_pretty_examples():
    assert pretty(EilenbergMacLaneGa(2)) == "K(Ga,2)"
    assert pretty(QuotientByGL(GenRef("X"), 3)) == "[X / GL(3)]"
    assert pretty(Product([DisjointUnion([Point(), Point()]), Point()])) == "(pt + pt) * pt"
    assert pretty(DisjointUnion([Point(), Complement(Point(), Point())])) == "pt + (pt - pt)"


def test_parse_error_is_parse_error():
    assert issubclass(StackSyntaxError, ParseError)


@settings(max_examples=500)
@given(exprs)
def test_pretty_round_trip(e):
    assert depth(e) <= 8
    assert parse_expr(pretty(e), DECLS) == e


def test_round_trip_deep_expressions():
    rng = random.Random(7)
    for _ in range(200):
        e = random_expr(rng, depth=7)
        assert depth(e) <= 8
        assert parse_expr(pretty(e), DECLS) == e
