import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from msc import load_corpus
from msc.errors import DenominatorVanishes, MissingCountData, NotPrimePower, UnboundGenerator
from msc.invariants import check_trace, gl_count, hodge, mu_compositional, point_count
from msc.lang import (
    AffineSpace, ClassifyingGL, ClassifyingGm, EilenbergMacLaneGa, Fibration,
    GeneralLinear, GeneratorDecl, GenRef, Point, Product, ProjectiveSpace,
    QuotientByGL, parse_expr,
)
from msc.normalize import normalize
from msc.ring import RingElement
from strategies import DECLS, QS, random_expr, seeds

CORPUS_QS = (2, 3, 4, 5, 7, 8, 9, 11)


def test_point_count_examples():
    assert point_count(normalize(GeneralLinear(2)), 3) == 48
    assert point_count(normalize(ClassifyingGm()), 4) == Fraction(1, 3)
    assert point_count(normalize(ProjectiveSpace(2)), 2) == 7


def test_point_count_rejects_non_prime_powers():
    for q in (0, 1, 6, 12, -3):
        with pytest.raises(NotPrimePower):
            point_count(RingElement.one(), q)


def test_point_count_needs_generator_values():
    with pytest.raises(UnboundGenerator):
        point_count(RingElement.gen("X"), 2)
    assert point_count(RingElement.gen("X"), 2, {"X": 5}) == 5


def test_mu_examples():
    assert mu_compositional(QuotientByGL(Point(), 1), 3) == Fraction(1, 2)
    assert mu_compositional(EilenbergMacLaneGa(1), 5) == Fraction(1, 5)
    assert mu_compositional(EilenbergMacLaneGa(2), 5) == 5
    assert mu_compositional(ClassifyingGL(2), 2) == Fraction(1, 6)


def test_mu_missing_count():
    decls = {"Z": GeneratorDecl("Z", count_table={2: 1})}
    assert mu_compositional(GenRef("Z"), 2, decls) == 1
    with pytest.raises(MissingCountData):
        mu_compositional(GenRef("Z"), 3, decls)


def test_gl_count_matches_formula():
    assert [gl_count(n, 2) for n in range(4)] == [1, 1, 6, 168]


def test_hodge_examples():
    assert hodge(ClassifyingGm(), 2).terms() == [(0, 0, -1), (1, 1, -1), (2, 2, -1)]
    assert hodge(AffineSpace(3), 6).terms() == [(3, 3, 1)]
    assert hodge(GeneralLinear(2), 6).terms() == [(1, 1, 1), (2, 2, -1), (3, 3, -1), (4, 4, 1)]


def test_hodge_of_element_with_generators():
    s = hodge(Product([GenRef("X"), AffineSpace(1)]), 2, env=DECLS)
    assert s.terms() == [(1, 2, -1), (2, 1, -1), (2, 2, 1)]


def test_check_trace_examples():
    reports = check_trace(ClassifyingGL(2), [2, 3])
    assert [(r.q, r.symbolic, r.compositional, r.agree) for r in reports] == [
        (2, Fraction(1, 6), Fraction(1, 6), True),
        (3, Fraction(1, 48), Fraction(1, 48), True),
    ]
    assert all(r.symbolic == r.compositional == 1 for r in check_trace(Point(), QS))
    (r,) = check_trace(Fibration(AffineSpace(1), EilenbergMacLaneGa(1)), [2])
    assert r.symbolic == r.compositional == 1


def test_denominator_vanishing_is_impossible_at_prime_powers():
    # 1/(L - 1) only vanishes at q = 1, which is not a prime power.
    with pytest.raises(NotPrimePower):
        point_count(normalize(ClassifyingGm()), 1)


def test_specialize_detects_vanishing_denominator():
    from msc.ring import rc_specialize
    with pytest.raises(DenominatorVanishes):
        rc_specialize(normalize(ClassifyingGm()), 1)


def test_corpus_size_and_coverage():
    program = load_corpus()
    assert len(program.bindings) >= 25
    from msc.lang import walk
    kinds = {type(x).__name__ for e in program.bindings.values() for x in walk(e)}
    assert kinds >= {
        "Point", "AffineSpace", "MultiplicativeGroup", "ProjectiveSpace", "GeneralLinear",
        "Torus", "ClassifyingGL", "ClassifyingGm", "EilenbergMacLaneGa", "GenRef",
        "DisjointUnion", "Product", "Complement", "QuotientByGL", "Fibration", "Inverse",
    }


@pytest.mark.parametrize("name", sorted(load_corpus().bindings))
def test_corpus_trace_coherence(name):
    program = load_corpus()
    for r in check_trace(program.bindings[name], CORPUS_QS, program.decls):
        assert r.agree, (name, r)


@settings(max_examples=200)
@given(seeds)
def test_mu_multiplicative(seed):
    rng = random.Random(seed)
    a, b = random_expr(rng, 3), random_expr(rng, 3)
    q = rng.choice(QS)
    ma, mb = mu_compositional(a, q, DECLS), mu_compositional(b, q, DECLS)
    assert mu_compositional(Product([a, b]), q, DECLS) == ma * mb


@settings(max_examples=300)
@given(seeds)
def test_random_expressions_trace(seed):
    rng = random.Random(seed)
    e = random_expr(rng, 4)
    q = rng.choice(QS)
    (r,) = check_trace(e, [q], DECLS)
    assert r.agree


Lsym = sympy.Symbol("L")


def _to_sympy(elem):
    numer = sum(c * Lsym**k for k, c in elem.numer.coefficients_L().items())
    denom = Lsym**elem.lpow
    for i, e in elem.cyclo:
        denom *= (Lsym**i - 1) ** e
    return numer / denom


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_hodge_diagonal_sums_match_laurent_expansion(seed):
    rng = random.Random(seed)
    e = random_expr(rng, 3, gens=False)
    elem = normalize(e)
    N = 6
    series = hodge(e, N)
    laurent = sympy.series(_to_sympy(elem), Lsym, 0, N + 1).removeO()
    laurent = sympy.expand(laurent)
    low = min(-elem.lpow, 0)
    for k in range(low, N + 1):
        diag = sum(c for p, q, c in series.terms() if p + q == 2 * k)
        assert diag == laurent.coeff(Lsym, k), (e, k)
