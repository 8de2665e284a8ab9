"""Stack-class expressions, generator declarations and their textual syntax.

Concrete syntax::

    gen X affine { class: L^2 - 1; count: {2 -> 3, 3 -> 8}; hodge: { (1,1) -> 1, (0,0) -> -1 ; order 4 } };
    let f = GL(2) * B GL(2);
    let y = [X / GL(1)] + Fib(P(1), K(Ga,2)) - pt;

``*`` binds tighter than ``+`` and ``-``; both binary levels associate to the
left.  A binding may use earlier bindings, which are expanded in place.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ArityError, CyclicBinding, DuplicateName, FiberShapeError, InvalidDeclaration,
    UnknownName,
)
from .lexer import Cursor, tokenize
from .numtheory import is_prime_power
from .polytext import parse_poly
from .ring import LEFSCHETZ, Poly
from .series import TruncatedSeries, series_from_poly


class StackExpr:
    """Base class of the expression AST."""

    __slots__ = ()

    def __str__(self):
        return pretty(self)


def _need(n, lo, what):
    if not isinstance(n, int) or isinstance(n, bool) or n < lo:
        raise ArityError(f"{what} needs an integer >= {lo}, got {n!r}")


@dataclass(frozen=True)
class Point(StackExpr):
    pass


@dataclass(frozen=True)
class AffineSpace(StackExpr):
    n: int

    def __post_init__(self):
        _need(self.n, 0, "A(n)")


@dataclass(frozen=True)
class MultiplicativeGroup(StackExpr):
    pass


@dataclass(frozen=True)
class ProjectiveSpace(StackExpr):
    n: int

    def __post_init__(self):
        _need(self.n, 0, "P(n)")


@dataclass(frozen=True)
class GeneralLinear(StackExpr):
    n: int

    def __post_init__(self):
        _need(self.n, 1, "GL(n)")


@dataclass(frozen=True)
class Torus(StackExpr):
    n: int

    def __post_init__(self):
        _need(self.n, 1, "T(n)")


@dataclass(frozen=True)
class ClassifyingGL(StackExpr):
    n: int

    def __post_init__(self):
        _need(self.n, 1, "B GL(n)")


@dataclass(frozen=True)
class ClassifyingGm(StackExpr):
    pass


@dataclass(frozen=True)
class EilenbergMacLaneGa(StackExpr):
    n: int

    def __post_init__(self):
        _need(self.n, 1, "K(Ga,n)")


@dataclass(frozen=True)
class GenRef(StackExpr):
    name: str


@dataclass(frozen=True)
class DisjointUnion(StackExpr):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 2:
            raise ArityError("a disjoint union needs at least two operands")


@dataclass(frozen=True)
class Product(StackExpr):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 2:
            raise ArityError("a product needs at least two factors")


@dataclass(frozen=True)
class Complement(StackExpr):
    ambient: StackExpr
    closed: StackExpr


@dataclass(frozen=True)
class QuotientByGL(StackExpr):
    total: StackExpr
    r: int

    def __post_init__(self):
        _need(self.r, 1, "[E / GL(r)]")


@dataclass(frozen=True)
class Fibration(StackExpr):
    base: StackExpr
    fiber: StackExpr


@dataclass(frozen=True)
class Inverse(StackExpr):
    operand: StackExpr


ATOMS = (Point, AffineSpace, MultiplicativeGroup, ProjectiveSpace, GeneralLinear, Torus,
         ClassifyingGL, ClassifyingGm, EilenbergMacLaneGa, GenRef)


@dataclass(frozen=True)
class GeneratorDecl:
    """A named variety class with whatever invariant data the user knows."""

    name: str
    affine: bool = False
    class_poly: Poly = None
    count_table: dict = field(default_factory=dict)
    hodge: TruncatedSeries = None

    def validate(self):
        if self.class_poly is not None:
            if not self.class_poly.is_univariate():
                raise InvalidDeclaration(f"class of {self.name} must be a polynomial in {LEFSCHETZ}")
            for q, n in self.count_table.items():
                expected = self.class_poly.evaluate(q)
                if expected != n:
                    raise InvalidDeclaration(
                        f"{self.name}: count at q={q} is {n} but the class gives {expected}"
                    )
            if self.hodge is not None:
                h = self.hodge
                ref = series_from_poly(self.class_poly, (h.order + 1) // 2)
                if not h.agrees_with(ref, h.order):
                    raise InvalidDeclaration(
                        f"{self.name}: Hodge data disagrees with the class under {LEFSCHETZ} -> uv"
                    )
        for q in self.count_table:
            if not is_prime_power(q):
                raise InvalidDeclaration(f"{self.name}: count key {q} is not a prime power")
        return self


@dataclass(frozen=True)
class Program:
    decls: dict = field(default_factory=dict)
    bindings: dict = field(default_factory=dict)

    def names(self):
        return set(self.decls) | set(self.bindings)


def children(e):
    match e:
        case DisjointUnion(parts) | Product(parts):
            return parts
        case Complement(a, b) | Fibration(a, b):
            return (a, b)
        case QuotientByGL(total, _):
            return (total,)
        case Inverse(operand):
            return (operand,)
    return ()


def walk(e):
    """Pre-order traversal of every subexpression."""
    yield e
    for c in children(e):
        yield from walk(c)


# fiber shapes licensed for Zariski-locally-trivial fibrations

def is_affine(expr, decls):
    if isinstance(expr, (Point, AffineSpace, MultiplicativeGroup, GeneralLinear, Torus)):
        return True
    if isinstance(expr, GenRef):
        decl = decls.get(expr.name)
        return bool(decl and decl.affine)
    if isinstance(expr, Product):
        return all(is_affine(p, decls) for p in expr.parts)
    return False


def is_licensed_fiber(expr, decls):
    return isinstance(expr, EilenbergMacLaneGa) or is_affine(expr, decls)


def check_fiber(expr, decls):
    if not is_licensed_fiber(expr, decls):
        raise FiberShapeError(
            f"fiber {pretty(expr)} is neither an affine scheme nor K(Ga,n)"
        )


# pretty printing

def pretty(e):
    match e:
        case Point():
            return "pt"
        case AffineSpace(n):
            return f"A({n})"
        case MultiplicativeGroup():
            return "Gm"
        case ProjectiveSpace(n):
            return f"P({n})"
        case GeneralLinear(n):
            return f"GL({n})"
        case Torus(n):
            return f"T({n})"
        case ClassifyingGL(n):
            return f"B GL({n})"
        case ClassifyingGm():
            return "B Gm"
        case EilenbergMacLaneGa(n):
            return f"K(Ga,{n})"
        case GenRef(name):
            return name
        case DisjointUnion(parts):
            out = [_paren(parts[0], (DisjointUnion,))]
            out += [_paren(p, (DisjointUnion, Complement)) for p in parts[1:]]
            return " + ".join(out)
        case Complement(ambient, closed):
            amb = pretty(ambient)
            return f"{amb} - {_paren(closed, (DisjointUnion, Complement))}"
        case Product(parts):
            return " * ".join(_paren(p, (DisjointUnion, Complement, Product)) for p in parts)
        case QuotientByGL(total, r):
            return f"[{pretty(total)} / GL({r})]"
        case Fibration(base, fiber):
            return f"Fib({pretty(base)}, {pretty(fiber)})"
        case Inverse(operand):
            return f"inv({pretty(operand)})"
    raise TypeError(f"not a stack expression: {e!r}")


def _paren(e, kinds):
    s = pretty(e)
    return f"({s})" if isinstance(e, kinds) else s


# parsing

RESERVED = {
    "pt", "A", "Gm", "P", "GL", "T", "B", "K", "Ga", "Fib", "inv", "let", "gen",
    "affine", LEFSCHETZ,
}


class _Parser:
    def __init__(self, text, prelude, source):
        self.cur = Cursor(tokenize(text, source), source)
        self.source = source
        self.decls = dict(prelude.decls) if prelude else {}
        self.bindings = dict(prelude.bindings) if prelude else {}
        self.pending = self._scan_binding_names()

    def _scan_binding_names(self):
        toks = self.cur.tokens
        return {
            toks[k + 1].text
            for k in range(len(toks) - 1)
            if toks[k].kind == "ident" and toks[k].text == "let" and toks[k + 1].kind == "ident"
        }

    def run(self):
        cur = self.cur
        while not cur.at_eof():
            if cur.at("gen", "ident"):
                self.decl()
            elif cur.at("let", "ident"):
                self.binding()
            else:
                cur.fail(f"expected 'gen' or 'let', found {cur.describe(cur.tok)}")
        return Program(self.decls, self.bindings)

    def new_name(self, reserved=RESERVED):
        t = self.cur.expect_kind("ident", "a name")
        if t.text in reserved:
            self.cur.fail(f"{t.text!r} is a reserved word", t)
        if t.text in self.decls or t.text in self.bindings:
            self.cur.fail(f"name {t.text!r} is already defined", t, DuplicateName)
        return t

    def binding(self):
        cur = self.cur
        cur.advance()
        # Binding names never reach an AST, so only the statement keywords
        # are off limits; inside expressions a keyword keeps its meaning.
        name = self.new_name({"let", "gen"})
        cur.expect("=")
        e = self.expr()
        cur.expect(";")
        self.bindings[name.text] = e
        self.pending.discard(name.text)

    def decl(self):
        cur = self.cur
        cur.advance()
        name = self.new_name()
        affine = bool(cur.accept("affine"))
        cur.expect("{")
        fields = {}
        while not cur.accept("}"):
            key = cur.expect_kind("ident", "'class', 'count' or 'hodge'")
            if key.text not in ("class", "count", "hodge"):
                cur.fail(f"unknown generator field {key.text!r}", key)
            if key.text in fields:
                cur.fail(f"field {key.text!r} given twice", key)
            cur.expect(":")
            if key.text == "class":
                coeffs = parse_poly(cur, [LEFSCHETZ])
                fields["class_poly"] = Poly.from_coeffs({e[0]: c for e, c in coeffs.items()})
            elif key.text == "count":
                fields["count_table"] = self.count_table()
            else:
                fields["hodge"] = self.series_literal()
            cur.accept(";")
        cur.expect(";")
        decl = GeneratorDecl(name.text, affine, **fields)
        try:
            decl.validate()
        except InvalidDeclaration as exc:
            cur.fail(exc.message, name, InvalidDeclaration)
        self.decls[name.text] = decl

    def count_table(self):
        cur = self.cur
        cur.expect("{")
        table = {}
        while not cur.at("}"):
            q = cur.expect_int()
            cur.expect("->")
            table[q] = cur.expect_int(signed=True)
            if not cur.accept(","):
                break
        cur.expect("}")
        return table

    def series_literal(self):
        cur = self.cur
        cur.expect("{")
        coeffs = {}
        while cur.at("("):
            cur.advance()
            p = cur.expect_int(signed=True)
            cur.expect(",")
            q = cur.expect_int(signed=True)
            cur.expect(")")
            cur.expect("->")
            coeffs[(p, q)] = coeffs.get((p, q), 0) + cur.expect_int(signed=True)
            if not cur.accept(","):
                break
        cur.expect(";")
        cur.expect("order")
        order = cur.expect_int(signed=True)
        cur.expect("}")
        return TruncatedSeries(coeffs, order)

    # expressions

    def expr(self):
        items = [self.term()]
        while self.cur.at("+") or self.cur.at("-"):
            op = self.cur.advance().text
            t = self.term()
            if op == "+":
                items.append(t)
            else:
                left = items[0] if len(items) == 1 else DisjointUnion(items)
                items = [Complement(left, t)]
        return items[0] if len(items) == 1 else DisjointUnion(items)

    def term(self):
        items = [self.factor()]
        while self.cur.accept("*"):
            items.append(self.factor())
        return items[0] if len(items) == 1 else Product(items)

    def sized(self, cls, tok):
        cur = self.cur
        cur.expect("(")
        n = cur.expect_int(signed=True)
        cur.expect(")")
        try:
            return cls(n)
        except ArityError as exc:
            cur.fail(exc.message, tok, ArityError)

    def factor(self):
        cur = self.cur
        t = cur.tok
        if cur.accept("("):
            e = self.expr()
            cur.expect(")")
            return e
        if cur.accept("["):
            total = self.expr()
            cur.expect("/")
            gl = cur.expect("GL")
            cur.expect("(")
            r = cur.expect_int(signed=True)
            cur.expect(")")
            cur.expect("]")
            try:
                return QuotientByGL(total, r)
            except ArityError as exc:
                cur.fail(exc.message, gl, ArityError)
        if t.kind != "ident":
            cur.fail(f"expected a stack expression, found {cur.describe(t)}")
        cur.advance()
        match t.text:
            case "pt":
                return Point()
            case "Gm":
                return MultiplicativeGroup()
            case "A":
                return self.sized(AffineSpace, t)
            case "P":
                return self.sized(ProjectiveSpace, t)
            case "GL":
                return self.sized(GeneralLinear, t)
            case "T":
                return self.sized(Torus, t)
            case "B":
                if cur.accept("Gm"):
                    return ClassifyingGm()
                inner = cur.expect("GL")
                return self.sized(ClassifyingGL, inner)
            case "K":
                cur.expect("(")
                cur.expect("Ga")
                cur.expect(",")
                n = cur.expect_int(signed=True)
                cur.expect(")")
                try:
                    return EilenbergMacLaneGa(n)
                except ArityError as exc:
                    cur.fail(exc.message, t, ArityError)
            case "Fib":
                cur.expect("(")
                base = self.expr()
                cur.expect(",")
                fib_tok = cur.tok
                fiber = self.expr()
                cur.expect(")")
                if not is_licensed_fiber(fiber, self.decls):
                    cur.fail(
                        f"fiber {pretty(fiber)} is neither an affine scheme nor K(Ga,n)",
                        fib_tok, FiberShapeError,
                    )
                return Fibration(base, fiber)
            case "inv":
                cur.expect("(")
                e = self.expr()
                cur.expect(")")
                return Inverse(e)
        return self.reference(t)

    def reference(self, t):
        name = t.text
        if name in RESERVED:
            self.cur.fail(f"unexpected reserved word {name!r}", t)
        if name in self.decls:
            return GenRef(name)
        if name in self.bindings:
            return self.bindings[name]
        if name in self.pending:
            self.cur.fail(f"binding {name!r} is used before it is complete", t, CyclicBinding)
        self.cur.fail(f"unknown name {name!r}", t, UnknownName)


def parse(text, prelude=None, source=None):
    """Parse program text; ``prelude`` supplies names from earlier files."""
    return _Parser(text, prelude, source).run()


def parse_expr(text, decls=None):
    """Parse a single expression against an optional declaration table."""
    p = _Parser(text, Program(dict(decls or {}), {}), None)
    e = p.expr()
    if not p.cur.at_eof():
        p.cur.fail(f"unexpected {p.cur.describe(p.cur.tok)} after expression")
    return e


def generator_values(decls, q):
    """Point counts at q for every generator with a table entry."""
    return {name: Fraction(d.count_table[q]) for name, d in decls.items() if q in d.count_table}


__all__ = [
    "StackExpr", "Point", "AffineSpace", "MultiplicativeGroup", "ProjectiveSpace",
    "GeneralLinear", "Torus", "ClassifyingGL", "ClassifyingGm", "EilenbergMacLaneGa",
    "GenRef", "DisjointUnion", "Product", "Complement", "QuotientByGL", "Fibration",
    "Inverse", "GeneratorDecl", "Program", "parse", "parse_expr", "pretty",
    "check_fiber", "is_licensed_fiber", "walk",
]
