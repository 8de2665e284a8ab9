"""Brute-force counting over small prime fields.

Everything here enumerates points or matrices directly; nothing depends on
the class formulas it is used to check.  Enumeration is vectorized in chunks
so the default guard of 10^8 evaluated points stays in the seconds range.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
import os

import numpy as np

from .errors import TooLarge, Unsupported
from .lexer import Cursor, tokenize
from .numtheory import is_prime, prime_power
from .polytext import format_poly, parse_poly

DEFAULT_GUARD = 10**8
MAX_PRIME = 101
_CHUNK = 1 << 20


def enum_guard():
    """Enumeration budget; ``MSC_ENUM_GUARD`` overrides the default."""
    raw = os.environ.get("MSC_ENUM_GUARD")
    return int(raw) if raw else DEFAULT_GUARD


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            pk = prime_power(self.p)
            if pk:
                raise Unsupported(f"q = {self.p} is a prime power; the oracle handles prime fields only")
            raise ValueError(f"{self.p} is not prime")
        if self.p > MAX_PRIME:
            raise Unsupported(f"p = {self.p} exceeds the oracle bound {MAX_PRIME}")


@dataclass(frozen=True)
class VarietyPresentation:
    """Affine variety ``{x in A^nvars : f(x) = 0 for f in equations}``.

    Each equation maps an exponent tuple of length ``nvars`` to an integer.
    """

    nvars: int
    equations: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        eqs = tuple(dict(e) for e in self.equations)
        for eq in eqs:
            for mono in eq:
                if len(mono) != self.nvars or any(k < 0 for k in mono):
                    raise ValueError(f"monomial {mono} does not fit {self.nvars} variables")
        object.__setattr__(self, "equations", eqs)

    def variables(self):
        return [f"x{i}" for i in range(self.nvars)]

    def __str__(self):
        body = " ; ".join(format_poly(e, self.variables()) for e in self.equations)
        return f"variety {self.name or '_'} vars {self.nvars} {{ {body} }}"


def _field(f):
    return f if isinstance(f, FieldSpec) else FieldSpec(f)


def _coords(start, stop, p, n):
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for _ in range(n):
        idx, r = np.divmod(idx, p)
        cols.append(r)
    return cols


def _eval_mod(eq, cols, p, size):
    acc = np.zeros(size, dtype=np.int64)
    for mono, c in eq.items():
        term = np.full(size, c % p, dtype=np.int64)
        for x, k in zip(cols, mono):
            if k:
                term = term * (x if k == 1 else _powmod(x, k, p)) % p
        acc = (acc + term) % p
    return acc


def _powmod(x, k, p):
    table = np.array([pow(v, k, p) for v in range(p)], dtype=np.int64)
    return table[x]


def enumerate_points(v, f):
    """Number of common zeros of ``v.equations`` in F_p^nvars."""
    p = _field(f).p
    total = p**v.nvars
    if total > enum_guard():
        raise TooLarge(f"{p}^{v.nvars} points exceeds the enumeration guard {enum_guard()}")
    if not v.equations:
        return total
    count = 0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        cols = _coords(start, stop, p, v.nvars)
        ok = np.ones(stop - start, dtype=bool)
        for eq in v.equations:
            ok &= _eval_mod(eq, cols, p, stop - start) == 0
        count += int(ok.sum())
    return count


def _perm_sign(perm):
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def gl_order(n, f):
    """Invertible n x n matrices over F_p, by testing every determinant."""
    p = _field(f).p
    if n < 1 or n > 3 or p > 7:
        raise TooLarge("gl_order enumerates only n <= 3 and p <= 7")
    total = p ** (n * n)
    if total > enum_guard():
        raise TooLarge(f"{total} matrices exceeds the enumeration guard")
    terms = [(perm, _perm_sign(perm)) for perm in permutations(range(n))]
    count = 0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        entries = _coords(start, stop, p, n * n)
        det = np.zeros(stop - start, dtype=np.int64)
        for perm, sign in terms:
            prod = np.ones(stop - start, dtype=np.int64)
            for row, col in enumerate(perm):
                prod = prod * entries[row * n + col] % p
            det = (det + sign * prod) % p
        count += int(np.count_nonzero(det))
    return count


def groupoid_count(v, r, f, group="GL"):
    """Homotopy cardinality of [X / GL_r](F_p) = |X(F_p)| / |GL_r(F_p)|.

    Valid because GL_r is connected: by Lang's theorem every GL_r-torsor over
    a finite field is trivial, so each orbit contributes 1/|stabilizer| and
    the orbit-stabilizer sum collapses to the quotient of the two counts.
    """
    if group != "GL":
        raise Unsupported(
            f"group {group!r}: only connected GL_r quotients are counted "
            "(finite or non-constant groups need twisted sectors)"
        )
    if r < 1:
        raise Unsupported("quotient by GL_r needs r >= 1")
    fs = _field(f)
    return Fraction(enumerate_points(v, fs), gl_order(r, fs))


# presentations of common pieces

def affine_space(n):
    return VarietyPresentation(n, (), name=f"A{n}")


def point():
    return VarietyPresentation(0, (), name="pt")


def gm():
    """G_m as {x*y = 1}."""
    return VarietyPresentation(2, ({(1, 1): 1, (0, 0): -1},), name="Gm")


def gl_variety(n):
    """GL_n as {det(M) * t = 1} in n^2 + 1 variables."""
    m = n * n
    det = {}
    for perm in permutations(range(n)):
        e = [0] * (m + 1)
        for row, col in enumerate(perm):
            e[row * n + col] += 1
        e[m] = 1
        key = tuple(e)
        det[key] = det.get(key, 0) + _perm_sign(perm)
    det[(0,) * (m + 1)] = -1
    return VarietyPresentation(m + 1, (det,), name=f"GL{n}")


def projective_cells(n):
    """The affine cells A^0, ..., A^n whose disjoint union is P^n."""
    return [affine_space(k) for k in range(n + 1)]


# variety files

def parse_varieties(text, source=None):
    """Parse ``variety NAME vars n { poly ; poly ; ... }`` blocks."""
    cur = Cursor(tokenize(text, source), source)
    out = {}
    while not cur.at_eof():
        cur.expect("variety")
        name_tok = cur.expect_kind("ident", "a variety name")
        if name_tok.text in out:
            cur.fail(f"variety {name_tok.text!r} defined twice", name_tok)
        cur.expect("vars")
        nvars = cur.expect_int()
        variables = [f"x{i}" for i in range(nvars)]
        cur.expect("{")
        eqs = []
        while not cur.accept("}"):
            poly = parse_poly(cur, variables)
            if poly:
                eqs.append({tuple(e): c for e, c in poly.items()})
            if not cur.accept(";"):
                cur.expect("}")
                break
        cur.accept(";")
        out[name_tok.text] = VarietyPresentation(nvars, tuple(eqs), name=name_tok.text)
    return out
