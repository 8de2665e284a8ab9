import random

import pytest
from hypothesis import given, settings

from msc.errors import NotAUnit, UnboundGenerator
from msc.lang import (
    AffineSpace, ClassifyingGL, Complement, DisjointUnion, EilenbergMacLaneGa,
    GeneralLinear, GenRef, Inverse, Point, Product, ProjectiveSpace, QuotientByGL,
    parse,
)
from msc.normalize import normalize, normalize_program, program_report
from msc.ring import Poly, RingElement, rc_add, rc_mul
from strategies import DECLS, random_expr, seeds

L = RingElement.lefschetz()
ONE = RingElement.one()


def test_bgl2_class():
    got = normalize(ClassifyingGL(2))
    assert got == ONE / (L * (L - 1) * (L**2 - 1))


def test_projective_telescoping_example():
    assert normalize(Complement(ProjectiveSpace(2), ProjectiveSpace(1))) == L**2


def test_kga_pair_cancels():
    assert normalize(Product([EilenbergMacLaneGa(1), EilenbergMacLaneGa(2)])) == ONE


def test_program_inverse_pair():
    assert normalize_program(parse("let f = GL(2)*B GL(2);")) == {"f": ONE}


def test_program_symbolic_quotient():
    out = normalize_program(parse("gen X { }; let y = [X/GL(1)];"))
    assert out["y"] == RingElement.gen("X") / (L - 1)
    assert out["y"].symbols() == {"X"}


def test_empty_program():
    assert normalize_program(parse("")) == {}


def test_class_poly_substituted():
    p = parse("gen S affine { class: L^3 - L; }; let s = [S / GL(1)];")
    assert normalize_program(p)["s"] == L * (L + 1)


def test_program_report_text():
    rows = program_report(parse("let b = B GL(2); let a = A(3);"))
    assert rows == [
        ("b", "B GL(2)", "1 / [L^1 * (L^1-1)^1 * (L^2-1)^1]"),
        ("a", "A(3)", "L^3"),
    ]


def test_unbound_generator():
    with pytest.raises(UnboundGenerator):
        normalize(GenRef("Z"), {})


@pytest.mark.parametrize("e", [
    Inverse(DisjointUnion([AffineSpace(1), AffineSpace(1), Point()])),
    Inverse(DisjointUnion([Point(), Point()])),
    Inverse(Complement(Point(), Point())),
    Inverse(GenRef("X")),
])
def test_inverse_of_non_unit(e):
    with pytest.raises(NotAUnit):
        normalize(e, DECLS)


def test_inverse_of_projective_line():
    # [P^1] = L + 1 = (L^2 - 1)/(L - 1) is a unit.
    assert normalize(Inverse(ProjectiveSpace(1))) * (L + 1) == ONE


@pytest.mark.parametrize("n", range(1, 11))
def test_projective_recursion(n):
    assert normalize(ProjectiveSpace(n)) == normalize(AffineSpace(n)) + normalize(ProjectiveSpace(n - 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_bgl_inverts_gl(n):
    assert rc_mul(normalize(ClassifyingGL(n)), normalize(GeneralLinear(n))) == ONE


def test_gl_formula_small():
    assert normalize(GeneralLinear(1)) == L - 1
    assert normalize(GeneralLinear(2)).numer == Poly.from_coeffs({4: 1, 3: -1, 2: -1, 1: 1})


def test_quotient_rule():
    assert normalize(QuotientByGL(AffineSpace(4), 2)) == L**4 * normalize(ClassifyingGL(2))


@settings(max_examples=200)
@given(seeds)
def test_union_and_product_homomorphism(seed):
    rng = random.Random(seed)
    a, b = random_expr(rng, 3), random_expr(rng, 3)
    na, nb = normalize(a, DECLS), normalize(b, DECLS)
    assert normalize(DisjointUnion([a, b]), DECLS) == rc_add(na, nb)
    assert normalize(Product([a, b]), DECLS) == rc_mul(na, nb)
    assert normalize(Complement(a, b), DECLS) == na - nb
