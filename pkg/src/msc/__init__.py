"""Classes of special Artin stacks in Z[L, generators][L^-1, (L^i - 1)^-1].

Build an expression with :func:`parse` or the AST constructors, turn it into
a ring element with :func:`normalize`, then evaluate invariants: point counts
over F_q, Hodge series, and the two-route trace check.
"""

from importlib import resources

from .errors import *  # noqa: F401,F403
from .invariants import CountReport, check_trace, hodge, mu_compositional, point_count
from .lang import GeneratorDecl, Program, parse, parse_expr, pretty
from .normalize import normalize, normalize_program
from .oracle import FieldSpec, VarietyPresentation, enumerate_points, gl_order, groupoid_count
from .ring import Poly, RingElement, rc_add, rc_eq, rc_invert, rc_mul, rc_specialize
from .series import TruncatedSeries, s_add, s_expand, s_mul

__version__ = "0.1.0"


def data_path(name):
    """Path to a shipped data file (``corpus.stk``, ``demo.stk``, ``demo.var``)."""
    return resources.files(__name__) / "data" / name


def load_corpus():
    return parse(data_path("corpus.stk").read_text(encoding="utf-8"), source="corpus.stk")
