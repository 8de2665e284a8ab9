"""Integer polynomials written as text, e.g. ``x0*x3 - x1*x2`` or ``L^2 + L + 1``.

Polynomials are plain dicts mapping an exponent tuple (one slot per variable)
to a nonzero integer coefficient.
"""


def _add(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + sign * c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pow(a, n, nvars):
    out = {(0,) * nvars: 1}
    for _ in range(n):
        out = _mul(out, a)
    return out


def parse_poly(cur, variables):
    """Parse a polynomial at the cursor; stops before the first foreign token.

    ``variables`` is the ordered list of admissible variable names.
    """
    nvars = len(variables)
    index = {v: k for k, v in enumerate(variables)}
    zero_exp = (0,) * nvars

    def atom():
        t = cur.tok
        if t.kind == "int":
            cur.advance()
            return {zero_exp: t.value} if t.value else {}
        if t.kind == "ident":
            if t.text not in index:
                cur.fail(f"unknown variable {t.text!r} (expected one of {', '.join(variables) or 'none'})")
            cur.advance()
            e = [0] * nvars
            e[index[t.text]] = 1
            return {tuple(e): 1}
        if cur.accept("("):
            inner = poly()
            cur.expect(")")
            return inner
        cur.fail(f"expected a polynomial term, found {cur.describe(t)}")

    def factor():
        base = atom()
        if cur.accept("^"):
            base = _pow(base, cur.expect_int(), nvars)
        return base

    def term():
        acc = factor()
        while cur.accept("*"):
            acc = _mul(acc, factor())
        return acc

    def poly():
        sign = -1 if cur.accept("-") else 1
        if sign == 1:
            cur.accept("+")
        acc = _add({}, term(), sign)
        while cur.at("+") or cur.at("-"):
            s = 1 if cur.advance().text == "+" else -1
            acc = _add(acc, term(), s)
        return acc

    return poly()


def format_poly(poly, variables):
    if not poly:
        return "0"
    parts = []
    for e, c in sorted(poly.items(), key=lambda t: tuple(-x for x in t[0])):
        factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k]
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out

