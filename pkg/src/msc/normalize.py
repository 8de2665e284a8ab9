"""Evaluate stack expressions to elements of the localized ring.

Each constructor is sent to its class by structural recursion; the rules are
oriented identities, so no search or confluence check is involved.
"""

from .errors import UnboundGenerator
from .lang import (
    AffineSpace, ClassifyingGL, ClassifyingGm, Complement, DisjointUnion,
    EilenbergMacLaneGa, Fibration, GeneralLinear, GenRef, Inverse,
    MultiplicativeGroup, Point, Product, Program, ProjectiveSpace, QuotientByGL,
    Torus, check_fiber, pretty,
)
from .ring import (
    Poly, RingElement, bgl_class, format_element, gl_class, rc_add, rc_invert,
    rc_mul, rc_prod, rc_sum,
)


def _decls(env):
    if env is None:
        return {}
    if isinstance(env, Program):
        return env.decls
    return env


def normalize(expr, env=None):
    """Class of ``expr`` in Z[L, generators][L^-1, (L^i - 1)^-1]."""
    decls = _decls(env)

    def go(e):
        match e:
            case Point():
                return RingElement.one()
            case AffineSpace(n):
                return RingElement.lefschetz(n)
            case MultiplicativeGroup():
                return RingElement(Poly.cyclo(1))
            case ProjectiveSpace(n):
                return RingElement(Poly.from_coeffs({i: 1 for i in range(n + 1)}))
            case GeneralLinear(n):
                return gl_class(n)
            case Torus(n):
                return RingElement(Poly.cyclo(1) ** n)
            case ClassifyingGL(n):
                return bgl_class(n)
            case ClassifyingGm():
                return bgl_class(1)
            case EilenbergMacLaneGa(n):
                return RingElement.lefschetz(-1 if n % 2 else 1)
            case GenRef(name):
                if name not in decls:
                    raise UnboundGenerator(f"generator {name!r} is not declared")
                decl = decls[name]
                if decl.class_poly is not None:
                    return RingElement(decl.class_poly)
                return RingElement.gen(name)
            case DisjointUnion(parts):
                return rc_sum(go(p) for p in parts)
            case Product(parts):
                return rc_prod(go(p) for p in parts)
            case Complement(ambient, closed):
                return rc_add(go(ambient), -go(closed))
            case QuotientByGL(total, r):
                return rc_mul(go(total), bgl_class(r))
            case Fibration(base, fiber):
                check_fiber(fiber, decls)
                return rc_mul(go(base), go(fiber))
            case Inverse(operand):
                return rc_invert(go(operand))
        raise TypeError(f"not a stack expression: {e!r}")

    return go(expr)


def normalize_program(program):
    """Normalize every binding, in declaration order."""
    return {name: normalize(e, program.decls) for name, e in program.bindings.items()}


def program_report(program):
    """``(name, pretty expression, canonical class text)`` per binding."""
    classes = normalize_program(program)
    return [(name, pretty(program.bindings[name]), format_element(c)) for name, c in classes.items()]
