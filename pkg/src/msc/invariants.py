"""Point counts, homotopy cardinality, Hodge series and the trace check.

Two independent routes produce the number of F_q-points of a stack:

* ``point_count`` specializes the normalized class at L = q;
* ``mu_compositional`` walks the expression and combines closed-form
  counts of the pieces without touching the localized ring.

``check_trace`` compares them; a disagreement means one route is wrong.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import MissingCountData, NotPrimePower, UnboundGenerator
from .lang import (
    AffineSpace, ClassifyingGL, ClassifyingGm, Complement, DisjointUnion,
    EilenbergMacLaneGa, Fibration, GeneralLinear, GenRef, Inverse,
    MultiplicativeGroup, Point, Product, Program, ProjectiveSpace, QuotientByGL,
    StackExpr, Torus,
)
from .normalize import normalize
from .numtheory import is_prime_power
from .ring import rc_specialize
from .series import s_expand


def _require_prime_power(q):
    if not is_prime_power(q):
        raise NotPrimePower(f"q = {q!r} is not a prime power >= 2")


def _decls(env):
    if env is None:
        return {}
    return env.decls if isinstance(env, Program) else env


def gl_count(n, q):
    """|GL_n(F_q)| = prod_{i<n} (q^n - q^i): choose the columns one at a time."""
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


@dataclass(frozen=True)
class CountReport:
    q: int
    symbolic: Fraction
    compositional: Fraction

    @property
    def agree(self):
        return self.symbolic == self.compositional


def count_env(elem, q, decls):
    """Generator values at q taken from declared count tables."""
    env = {}
    for name in elem.symbols():
        decl = decls.get(name)
        if decl is None or q not in decl.count_table:
            raise UnboundGenerator(f"generator {name!r} has no point count at q={q}")
        env[name] = Fraction(decl.count_table[q])
    return env


def point_count(elem, q, env=None):
    """Number of F_q-points (homotopy cardinality) of the class ``elem``."""
    _require_prime_power(q)
    return rc_specialize(elem, q, env or {})


def mu_compositional(expr, q, env=None):
    """Homotopy cardinality of ``expr`` over F_q computed piece by piece."""
    _require_prime_power(q)
    decls = _decls(env)
    q = int(q)

    def go(e):
        match e:
            case Point():
                return Fraction(1)
            case AffineSpace(n):
                return Fraction(q**n)
            case MultiplicativeGroup():
                return Fraction(q - 1)
            case ProjectiveSpace(n):
                return Fraction(q ** (n + 1) - 1, q - 1)
            case GeneralLinear(n):
                return Fraction(gl_count(n, q))
            case Torus(n):
                return Fraction((q - 1) ** n)
            case ClassifyingGL(n):
                # Lang: every GL_n-torsor over F_q is trivial, so one point
                # with automorphism group GL_n(F_q).
                return Fraction(1, gl_count(n, q))
            case ClassifyingGm():
                return Fraction(1, q - 1)
            case EilenbergMacLaneGa(n):
                # one point, pi_n = F_q, all other homotopy groups trivial
                return Fraction(q) ** (-1) ** n
            case GenRef(name):
                return _generator_count(decls, name, q)
            case DisjointUnion(parts):
                return sum((go(p) for p in parts), Fraction(0))
            case Product(parts):
                out = Fraction(1)
                for p in parts:
                    out *= go(p)
                return out
            case Complement(ambient, closed):
                return go(ambient) - go(closed)
            case QuotientByGL(total, r):
                return go(total) / gl_count(r, q)
            case Fibration(base, fiber):
                return go(base) * go(fiber)
            case Inverse(operand):
                return 1 / go(operand)
        raise TypeError(f"not a stack expression: {e!r}")

    return go(expr)


def _generator_count(decls, name, q):
    decl = decls.get(name)
    if decl is None:
        raise UnboundGenerator(f"generator {name!r} is not declared")
    if q in decl.count_table:
        return Fraction(decl.count_table[q])
    if decl.class_poly is not None:
        return Fraction(sum(c * q**e for e, c in decl.class_poly.coefficients_L().items()))
    raise MissingCountData(f"generator {name!r} has no point count at q={q}")


def hodge(target, N, genv=None, env=None):
    """Hodge series of an expression or ring element, exact up to (uv)^N.

    For an expression, ``env`` is the declaration table; generator series
    default to the declared Hodge data.
    """
    if isinstance(target, StackExpr):
        decls = _decls(env)
        target = normalize(target, decls)
        if genv is None:
            genv = {n: d.hodge for n, d in decls.items() if d.hodge is not None}
    return s_expand(target, N, genv or {})


def check_trace(expr, qs, env=None):
    """Compare the specialization route with the compositional route for each q."""
    decls = _decls(env)
    elem = normalize(expr, decls)
    reports = []
    for q in sorted(qs):
        sym = point_count(elem, q, count_env(elem, q, decls))
        comp = mu_compositional(expr, q, decls)
        reports.append(CountReport(q, sym, comp))
    return reports
