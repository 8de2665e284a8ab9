"""Exact arithmetic in Z[L, g1, ..., gk] localized at L and every L^i - 1.

Elements are stored as a numerator polynomial over a denominator drawn from
the restricted alphabet ``{L} U {L^i - 1 : i >= 1}``.  Because ``L^i - 1`` is
reducible the representation is not canonical; equality is decided by
cross-multiplication and reduction only cancels whole allowed factors.
"""

from fractions import Fraction
from functools import lru_cache, reduce

from .errors import DenominatorVanishes, NotAUnit, UnboundGenerator

LEFSCHETZ = "L"


def _merge_gens(a, b):
    """Multiply two generator monomials stored as sorted ``((name, exp), ...)``."""
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for name, e in b:
        out[name] = out.get(name, 0) + e
    return tuple(sorted(out.items()))


class Poly:
    """Sparse polynomial with integer coefficients in L and generator symbols.

    ``terms`` maps a monomial ``(lexp, gens)`` to a nonzero ``int``, where
    ``gens`` is a sorted tuple of ``(name, exponent)`` pairs.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = int(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c):
        return cls({(0, ()): c})

    @classmethod
    def lefschetz(cls, power=1):
        return cls({(power, ()): 1})

    @classmethod
    def gen(cls, name):
        if name == LEFSCHETZ:
            raise ValueError(f"{LEFSCHETZ!r} is reserved for the Lefschetz class")
        return cls({(0, ((name, 1),)): 1})

    @classmethod
    def cyclo(cls, i):
        """The polynomial L^i - 1."""
        if i < 1:
            raise ValueError("L^i - 1 needs i >= 1")
        return cls({(i, ()): 1, (0, ()): -1})

    @classmethod
    def from_coeffs(cls, coeffs):
        """Univariate polynomial in L from ``{exponent: coefficient}``."""
        return cls({(e, ()): c for e, c in coeffs.items()})

    # structure

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(mono == (0, ()) for mono in self.terms)

    def constant(self):
        return self.terms.get((0, ()), 0)

    def degree_L(self):
        return max((m[0] for m in self.terms), default=0)

    def symbols(self):
        return {name for _, gens in self.terms for name, _ in gens}

    def is_univariate(self):
        return all(not gens for _, gens in self.terms)

    def coefficients_L(self):
        """``{exponent: coefficient}`` for a polynomial in L only."""
        if not self.is_univariate():
            raise ValueError("polynomial involves generator symbols")
        return {m[0]: c for m, c in self.terms.items()}

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        out = {}
        for (la, ga), ca in self.terms.items():
            for (lb, gb), cb in other.terms.items():
                mono = (la + lb, _merge_gens(ga, gb))
                s = out.get(mono, 0) + ca * cb
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift_L(self, k):
        """Multiply by L^k (k may be negative if every term allows it)."""
        return Poly._raw({(l + k, g): c for (l, g), c in self.terms.items()})

    def divexact_L(self):
        """Return self / L, or None if L does not divide self."""
        if any(l == 0 for l, _ in self.terms):
            return None
        return self.shift_L(-1)

    def divexact_cyclo(self, i):
        """Return self / (L^i - 1), or None when the division is not exact."""
        return self.divexact_monic(Poly.cyclo(i))

    def divexact_monic(self, divisor):
        """Return self / divisor for a monic polynomial in L, or None.

        The divisor is monic in L, so each generator-monomial slice is divided
        independently as a univariate polynomial.
        """
        g = divisor.coefficients_L()
        k = max(g)
        if g[k] != 1:
            raise ValueError("divisor must be monic in L")
        lower = [(e, c) for e, c in g.items() if e != k]
        slices = {}
        for (l, gens), c in self.terms.items():
            slices.setdefault(gens, {})[l] = c
        out = {}
        for gens, coeffs in slices.items():
            f = dict(coeffs)
            for d in range(max(f), k - 1, -1):
                c = f.pop(d, 0)
                if not c:
                    continue
                out[(d - k, gens)] = c
                for e, ce in lower:
                    j = d - k + e
                    v = f.get(j, 0) - c * ce
                    if v:
                        f[j] = v
                    else:
                        f.pop(j, None)
            if f:
                return None
        return Poly._raw(out)

    def evaluate(self, q, env=None):
        """Exact value at L = q and generators from ``env``."""
        q = Fraction(q)
        env = env or {}
        total = Fraction(0)
        for (l, gens), c in self.terms.items():
            term = Fraction(c) * q**l
            for name, e in gens:
                if name not in env:
                    raise UnboundGenerator(f"no value for generator {name!r}")
                term *= Fraction(env[name]) ** e
            total += term
        return total

    # comparison

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-t[0][0], t[0][1]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (l, gens), c in self.sorted_terms():
            factors = []
            if l:
                factors.append(LEFSCHETZ if l == 1 else f"{LEFSCHETZ}^{l}")
            factors.extend(n if e == 1 else f"{n}^{e}" for n, e in gens)
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


class RingElement:
    """A fraction ``numer / (L^lpow * prod (L^i - 1)^e_i)``.

    Values are immutable. ``==`` is equality in the localization
    (cross-multiplication), so elements are deliberately unhashable.
    """

    __slots__ = ("numer", "lpow", "cyclo")

    def __init__(self, numer, lpow=0, cyclo=None, reduce=True):
        if not isinstance(numer, Poly):
            numer = Poly.const(numer)
        if lpow < 0:
            raise ValueError("denominator exponent of L must be >= 0")
        cyc = {}
        for i, e in dict(cyclo or {}).items():
            if i < 1:
                raise ValueError("cyclotomic-type factor L^i - 1 needs i >= 1")
            if e < 0:
                raise ValueError("denominator exponents must be >= 0")
            if e:
                cyc[i] = e
        if reduce:
            numer, lpow, cyc = _reduce(numer, lpow, cyc)
        self.numer = numer
        self.lpow = lpow
        self.cyclo = tuple(sorted(cyc.items()))

    def __setattr__(self, name, value):
        if hasattr(self, "cyclo"):
            raise AttributeError("RingElement is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def zero(cls):
        return cls(Poly())

    @classmethod
    def one(cls):
        return cls(Poly.const(1))

    @classmethod
    def lefschetz(cls, power=1):
        if power >= 0:
            return cls(Poly.lefschetz(power))
        return cls(Poly.const(1), lpow=-power)

    @classmethod
    def gen(cls, name):
        return cls(Poly.gen(name))

    @classmethod
    def cyclo_inverse(cls, i, e=1):
        """The element (L^i - 1)^(-e)."""
        return cls(Poly.const(1), cyclo={i: e})

    # views

    def denom_poly(self):
        d = Poly.lefschetz(self.lpow)
        for i, e in self.cyclo:
            d = d * Poly.cyclo(i) ** e
        return d

    def has_denominator(self):
        return bool(self.lpow or self.cyclo)

    def is_zero(self):
        return self.numer.is_zero()

    def symbols(self):
        return self.numer.symbols()

    # arithmetic

    def __add__(self, other):
        return rc_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(-self.numer, self.lpow, dict(self.cyclo), reduce=False)

    def __sub__(self, other):
        return rc_add(self, -_coerce(other))

    def __rsub__(self, other):
        return rc_add(_coerce(other), -self)

    def __mul__(self, other):
        return rc_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return rc_mul(self, rc_invert(_coerce(other)))

    def __pow__(self, n):
        if n < 0:
            return rc_invert(self) ** -n
        result = RingElement.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = RingElement(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return rc_eq(self, other)

    __hash__ = None

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"RingElement({self})"


def _coerce(x):
    if isinstance(x, RingElement):
        return x
    if isinstance(x, (int, Poly)):
        return RingElement(x)
    raise TypeError(f"cannot use {type(x).__name__} as a ring element")


def _reduce(numer, lpow, cyc):
    """Cancel whole denominator factors that divide the numerator exactly."""
    if numer.is_zero():
        return numer, 0, {}
    cyc = dict(cyc)
    changed = True
    while changed:
        changed = False
        while lpow:
            q = numer.divexact_L()
            if q is None:
                break
            numer, lpow, changed = q, lpow - 1, True
        for i in sorted(cyc, reverse=True):
            while cyc[i]:
                q = numer.divexact_cyclo(i)
                if q is None:
                    break
                numer = q
                cyc[i] -= 1
                changed = True
            if not cyc[i]:
                del cyc[i]
    return numer, lpow, cyc


def rc_add(a, b):
    lpow = max(a.lpow, b.lpow)
    da, db = dict(a.cyclo), dict(b.cyclo)
    cyc = {i: max(da.get(i, 0), db.get(i, 0)) for i in set(da) | set(db)}

    def lift(x, dx):
        n = x.numer.shift_L(lpow - x.lpow)
        for i, e in cyc.items():
            extra = e - dx.get(i, 0)
            if extra:
                n = n * Poly.cyclo(i) ** extra
        return n

    return RingElement(lift(a, da) + lift(b, db), lpow, cyc)


def rc_mul(a, b):
    cyc = dict(a.cyclo)
    for i, e in b.cyclo:
        cyc[i] = cyc.get(i, 0) + e
    return RingElement(a.numer * b.numer, a.lpow + b.lpow, cyc)


def rc_eq(a, b):
    return a.numer * b.denom_poly() == b.numer * a.denom_poly()


@lru_cache(maxsize=None)
def cyclotomic(d):
    """The d-th cyclotomic polynomial, from L^d - 1 = prod_{e | d} Phi_e."""
    p = Poly.cyclo(d)
    for e in range(1, d):
        if d % e == 0:
            p = p.divexact_monic(cyclotomic(e))
    return p


@lru_cache(maxsize=None)
def _totient(d):
    return cyclotomic(d).degree_L()


def rc_invert(a):
    """Inverse of a unit of the localization.

    The units are exactly +-L^b * prod Phi_d^m_d with Phi_d cyclotomic, since
    every L^i - 1 is the product of the Phi_d with d | i.  The numerator is
    stripped of L and of each Phi_d by exact division; ``a`` is a unit iff
    the residue is +-1.  Each Phi_d is then inverted as
    (prod_{e | d, e < d} Phi_e) / (L^d - 1).
    """
    n = a.numer
    if n.is_zero():
        raise NotAUnit("zero is not invertible")
    if n.symbols():
        raise NotAUnit(f"generator symbols are never invertible: {n}")
    lpow = 0
    while True:
        q = n.divexact_L()
        if q is None:
            break
        n, lpow = q, lpow + 1
    mult = {}
    d = 1
    while n.degree_L() > 0:
        if _totient(d) <= n.degree_L():
            q = n.divexact_monic(cyclotomic(d))
            if q is not None:
                n = q
                mult[d] = mult.get(d, 0) + 1
                continue
        elif 2 * n.degree_L() ** 2 < d:
            # phi(d) >= sqrt(d / 2): no cyclotomic factor of this degree remains
            break
        d += 1
    if not (n.is_constant() and n.constant() in (1, -1)):
        raise NotAUnit(f"{a.numer} is not a signed product of L and cyclotomic factors of L^i - 1")
    numer = a.denom_poly() * n.constant()
    for d, m in mult.items():
        cofactor = Poly.cyclo(d).divexact_monic(cyclotomic(d))
        numer = numer * cofactor**m
    return RingElement(numer, lpow, mult)


def rc_specialize(a, q, env=None):
    """Exact rational value at L = q with generator values from ``env``."""
    q = Fraction(q)
    if a.lpow and q == 0:
        raise DenominatorVanishes("L = 0 makes the denominator vanish")
    for i, _ in a.cyclo:
        if q**i == 1:
            raise DenominatorVanishes(f"L^{i} - 1 vanishes at L = {q}")
    den = q**a.lpow
    for i, e in a.cyclo:
        den *= (q**i - 1) ** e
    return a.numer.evaluate(q, env) / den


def format_element(a):
    """Canonical text ``numer / [L^a * (L^i-1)^e * ...]``."""
    num = str(a.numer)
    if not a.has_denominator():
        return num
    if len(a.numer.terms) > 1:
        num = f"({num})"
    factors = []
    if a.lpow:
        factors.append(f"{LEFSCHETZ}^{a.lpow}")
    factors.extend(f"({LEFSCHETZ}^{i}-1)^{e}" for i, e in a.cyclo)
    return f"{num} / [{' * '.join(factors)}]"


def rc_sum(elements):
    return reduce(rc_add, elements, RingElement.zero())


def rc_prod(elements):
    return reduce(rc_mul, elements, RingElement.one())


def gl_class(n):
    """[GL_n] = L^(n(n-1)/2) * prod_{i=1..n} (L^i - 1)."""
    p = Poly.lefschetz(n * (n - 1) // 2)
    for i in range(1, n + 1):
        p = p * Poly.cyclo(i)
    return RingElement(p)


def bgl_class(n):
    """[B GL_n] = [GL_n]^(-1), built directly in denominator form."""
    return RingElement(Poly.const(1), n * (n - 1) // 2, {i: 1 for i in range(1, n + 1)})


__all__ = [
    "LEFSCHETZ", "Poly", "RingElement", "rc_add", "rc_mul", "rc_eq", "rc_invert",
    "rc_specialize", "rc_sum", "rc_prod", "format_element", "gl_class", "bgl_class",
    "cyclotomic",
]
