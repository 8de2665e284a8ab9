"""Truncated Laurent series in Z[[u,v]][u^-1, v^-1].

A :class:`TruncatedSeries` knows two things about the series it stands for:
``order``, the total degree ``p + q`` up to which every coefficient is exact,
and ``min_total``, a lower bound on the total degree of the whole (untruncated)
support.  Keeping them apart is what lets products report only coefficients
that are provably exact.
"""

from .errors import InsufficientOrder, UnboundGenerator
from .ring import LEFSCHETZ, RingElement


class TruncatedSeries:
    __slots__ = ("coeffs", "order", "min_total")

    def __init__(self, coeffs=None, order=0, min_total=None):
        order = int(order)
        clean = {}
        for (p, q), c in (coeffs or {}).items():
            if c and p + q <= order:
                clean[(int(p), int(q))] = int(c)
        if min_total is None:
            min_total = min((p + q for p, q in clean), default=order + 1)
        elif any(p + q < min_total for p, q in clean):
            raise ValueError("support extends below min_total")
        self.coeffs = clean
        self.order = order
        self.min_total = int(min_total)

    @classmethod
    def zero(cls, order):
        return cls({}, order)

    @classmethod
    def monomial(cls, p, q, c=1, order=None):
        """``c * u^p * v^q``; exact up to ``order`` (default: its own degree)."""
        if order is None:
            order = p + q
        return cls({(p, q): c}, order, min_total=p + q)

    @classmethod
    def uv_power(cls, k, order):
        return cls.monomial(k, k, 1, order)

    @classmethod
    def geometric_inverse(cls, i, order):
        """Expansion of ``1 / ((uv)^i - 1)`` as ``-sum_k (uv)^(i k)``."""
        coeffs = {}
        k = 0
        while 2 * i * k <= order:
            coeffs[(i * k, i * k)] = -1
            k += 1
        return cls(coeffs, order, min_total=0)

    def truncate(self, order):
        if order > self.order:
            raise InsufficientOrder(f"series is exact only up to total degree {self.order}")
        return TruncatedSeries(self.coeffs, order, min(self.min_total, order + 1))

    def __getitem__(self, pq):
        return self.coeffs.get(pq, 0)

    def terms(self):
        """Sorted ``(p, q, coefficient)`` triples."""
        return sorted((p, q, c) for (p, q), c in self.coeffs.items())

    def is_diagonal(self):
        return all(p == q for p, q in self.coeffs)

    def __add__(self, other):
        return s_add(self, other)

    def __neg__(self):
        return TruncatedSeries({k: -c for k, c in self.coeffs.items()}, self.order, self.min_total)

    def __sub__(self, other):
        return s_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries({k: c * other for k, c in self.coeffs.items()}, self.order, self.min_total)
        return s_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def agrees_with(self, other, upto=None):
        """Coefficient equality on total degrees ``<= upto`` (default: common order)."""
        if upto is None:
            upto = min(self.order, other.order)
        keys = {k for k in self.coeffs.keys() | other.coeffs.keys() if sum(k) <= upto}
        return all(self[k] == other[k] for k in keys)

    def __str__(self):
        if not self.coeffs:
            return f"0 + O({self.order + 1})"
        parts = []
        for p, q, c in self.terms():
            mono = "*".join(
                x if e == 1 else f"{x}^{e}" for x, e in (("u", p), ("v", q)) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") + f" + O({self.order + 1})"

    def __repr__(self):
        return f"TruncatedSeries({self})"


def s_add(a, b):
    order = min(a.order, b.order)
    out = {k: c for k, c in a.coeffs.items() if sum(k) <= order}
    for k, c in b.coeffs.items():
        if sum(k) <= order:
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return TruncatedSeries(out, order, min(a.min_total, b.min_total, order + 1))


def s_mul(a, b):
    # A term of a of degree > a.order meets b's support at degree >= b.min_total.
    order = min(a.order + b.min_total, b.order + a.min_total)
    out = {}
    for (pa, qa), ca in a.coeffs.items():
        da = pa + qa
        if da + b.min_total > order:
            continue
        for (pb, qb), cb in b.coeffs.items():
            if da + pb + qb > order:
                continue
            k = (pa + pb, qa + qb)
            s = out.get(k, 0) + ca * cb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return TruncatedSeries(out, order, min(a.min_total + b.min_total, order + 1))


def s_expand(elem, N, genv=None):
    """Hodge-style expansion of a ring element with L -> uv.

    ``N`` bounds the power of L (equivalently of uv), so the result is exact
    for every total degree ``p + q <= 2N``.  ``genv`` maps each generator
    symbol in ``elem`` to a series.
    """
    if N < 0:
        raise ValueError("expansion order must be >= 0")
    genv = genv or {}
    target = 2 * N
    for name in elem.symbols():
        if name not in genv:
            raise UnboundGenerator(f"no Hodge series for generator {name!r}")

    # Head-room for negative-degree generator data and the final L^-a shift.
    slack = 0
    for (_, gens) in elem.numer.terms:
        slack = max(slack, sum(e * max(0, -genv[g].min_total) for g, e in gens))
    work = target + 2 * elem.lpow + slack

    numer = TruncatedSeries.zero(work)
    for (l, gens), c in elem.numer.terms.items():
        term = TruncatedSeries.monomial(l, l, c, work + 2 * l + slack)
        for g, e in gens:
            for _ in range(e):
                term = s_mul(term, genv[g])
        numer = s_add(numer, term)
        if numer.order < target + 2 * elem.lpow:
            raise InsufficientOrder(
                f"generator series too short to expand {LEFSCHETZ}-degree {N} exactly"
            )

    result = numer
    for i, e in elem.cyclo:
        inv = TruncatedSeries.geometric_inverse(i, work)
        for _ in range(e):
            result = s_mul(result, inv)
    if elem.lpow:
        shift = TruncatedSeries.monomial(-elem.lpow, -elem.lpow, 1, work + 4 * elem.lpow + slack)
        result = s_mul(result, shift)
    if result.order < target:
        raise InsufficientOrder(
            f"expansion is exact only to total degree {result.order}, need {target}"
        )
    return result.truncate(target)


def series_from_poly(poly, N):
    """Generator-free polynomial in L, mapped exactly with L -> uv."""
    return s_expand(RingElement(poly, reduce=False), N)
