"""Command-line front end.

    msc eval   FILES... [--name N]
    msc count  FILES... --name N --q 2,3,4 [--check-trace]
    msc hodge  FILES... --name N --order K
    msc oracle FILES... --name N [--r R] --p 2,3,5

FILES are ``.stk`` programs (read in order, later files may use earlier
names) and, for ``oracle``, ``.var`` variety files.  Every command accepts
``--json`` and ``--out FILE``.  The exit status is 0 iff every requested
computation succeeded and every requested check passed.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import MscError
from .invariants import count_env, hodge, mu_compositional, point_count
from .lang import Complement, Program, QuotientByGL, parse, pretty, walk
from .normalize import normalize
from .numtheory import is_prime, is_prime_power
from .oracle import enumerate_points, groupoid_count, parse_varieties
from .ring import format_element

SCHEMA_VERSION = "v1"

COMPLEMENT_NOTE = (
    "note: complements are evaluated as class differences; "
    "the closed piece is not checked to embed in the ambient stack"
)


class CliError(Exception):
    pass


# JSON encoding

def encode_rational(x):
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def decode_rational(d):
    return Fraction(int(d["num"]), int(d["den"]))


def encode_series(s):
    return {"order": s.order, "terms": [[p, q, c] for p, q, c in s.terms()]}


def encode_element(elem):
    return {
        "text": format_element(elem),
        "numerator": str(elem.numer),
        "lefschetz_power": elem.lpow,
        "cyclo": [[i, e] for i, e in elem.cyclo],
    }


def _fmt(x):
    return str(Fraction(x))


# loading

def _read(path):
    p = Path(path)
    if not p.is_file():
        raise CliError(f"file not found: {path}")
    return p.read_text(encoding="utf-8")


def load_inputs(paths):
    program = Program()
    varieties = {}
    for path in paths:
        text = _read(path)
        if str(path).endswith(".var"):
            for name, v in parse_varieties(text, source=path).items():
                if name in varieties:
                    raise CliError(f"variety {name!r} defined in more than one file")
                varieties[name] = v
        else:
            program = parse(text, prelude=program, source=path)
    return program, varieties


def _binding(program, name):
    if name not in program.bindings:
        raise CliError(f"no binding named {name!r}")
    return program.bindings[name]


def _has_complement(e):
    return any(isinstance(x, Complement) for x in walk(e))


def _int_list(text):
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers: {text!r}")


# commands

def cmd_eval(args, program, _varieties):
    names = [args.name] if args.name else list(program.bindings)
    if args.name:
        _binding(program, args.name)
    results = []
    for name in names:
        e = program.bindings[name]
        results.append({"name": name, "expr": pretty(e), "class": normalize(e, program.decls)})
    notes = [COMPLEMENT_NOTE] if any(_has_complement(program.bindings[n]) for n in names) else []
    if args.json:
        doc = {
            "command": "eval",
            "results": [
                {"name": r["name"], "expr": r["expr"], "class": encode_element(r["class"])}
                for r in results
            ],
            "notes": notes,
        }
        return doc, True, notes
    if args.name:
        lines = [format_element(results[0]["class"])]
    else:
        lines = [f"{r['name']} = {format_element(r['class'])}" for r in results]
    return lines, True, notes


def cmd_count(args, program, _varieties):
    e = _binding(program, args.name)
    elem = normalize(e, program.decls)
    rows = []
    ok = True
    for q in args.q:
        row = {"q": q}
        try:
            if not is_prime_power(q):
                raise CliError(f"q = {q} is not a prime power >= 2")
            row["value"] = point_count(elem, q, count_env(elem, q, program.decls))
            if args.check_trace:
                row["compositional"] = mu_compositional(e, q, program.decls)
                row["agree"] = row["value"] == row["compositional"]
                ok &= row["agree"]
        except (MscError, CliError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
        rows.append(row)
    if args.json:
        out = []
        for r in rows:
            d = {"q": r["q"]}
            if "error" in r:
                d["error"] = r["error"]
            else:
                d["value"] = encode_rational(r["value"])
                if "compositional" in r:
                    d["compositional"] = encode_rational(r["compositional"])
                    d["agree"] = r["agree"]
            out.append(d)
        return {"command": "count", "name": args.name, "rows": out}, ok, []
    lines = []
    for r in rows:
        if "error" in r:
            lines.append(f"{r['q']}\terror: {r['error']}")
        elif "compositional" in r:
            flag = "ok" if r["agree"] else "MISMATCH"
            lines.append(f"{r['q']}\t{_fmt(r['value'])}\t{_fmt(r['compositional'])}\t{flag}")
        else:
            lines.append(f"{r['q']}\t{_fmt(r['value'])}")
    return lines, ok, []


def cmd_hodge(args, program, _varieties):
    if args.order < 0:
        raise CliError("--order must be >= 0")
    e = _binding(program, args.name)
    s = hodge(e, args.order, env=program.decls)
    if args.json:
        return {"command": "hodge", "name": args.name, "series": encode_series(s)}, True, []
    return [f"({p},{q},{c})" for p, q, c in s.terms()], True, []


def cmd_oracle(args, program, varieties):
    e = _binding(program, args.name)
    vname = args.variety or args.name
    if vname not in varieties:
        raise CliError(f"no variety named {vname!r} in the .var files")
    v = varieties[vname]
    target = QuotientByGL(e, args.r) if args.r else e
    elem = normalize(target, program.decls)
    rows = []
    ok = True
    for p in args.p:
        row = {"p": p}
        if not is_prime(p):
            if is_prime_power(p):
                row["status"] = "skipped"
                row["reason"] = "prime power; the oracle counts over prime fields only"
            else:
                row["status"] = "error"
                row["reason"] = f"{p} is not a prime"
                ok = False
            rows.append(row)
            continue
        try:
            oracle = groupoid_count(v, args.r, p) if args.r else Fraction(enumerate_points(v, p))
            symbolic = point_count(elem, p, count_env(elem, p, program.decls))
            row.update(oracle=oracle, symbolic=symbolic, status="pass" if oracle == symbolic else "fail")
        except MscError as exc:
            row.update(status="error", reason=f"{type(exc).__name__}: {exc}")
        ok &= row["status"] in ("pass", "skipped")
        rows.append(row)
    if args.json:
        out = []
        for r in rows:
            d = {k: val for k, val in r.items() if k not in ("oracle", "symbolic")}
            for k in ("oracle", "symbolic"):
                if k in r:
                    d[k] = encode_rational(r[k])
            out.append(d)
        return {"command": "oracle", "name": args.name, "variety": vname, "r": args.r, "rows": out}, ok, []
    lines = []
    for r in rows:
        if "oracle" in r:
            lines.append(f"{r['p']}\t{_fmt(r['oracle'])}\t{_fmt(r['symbolic'])}\t{r['status']}")
        else:
            lines.append(f"{r['p']}\t{r['status']}: {r['reason']}")
    return lines, ok, []


COMMANDS = {"eval": cmd_eval, "count": cmd_count, "hodge": cmd_hodge, "oracle": cmd_oracle}


def build_parser():
    parser = argparse.ArgumentParser(prog="msc", description="Classes of special stacks in the localized Grothendieck ring.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="+", help=".stk programs (and .var variety files for oracle)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="print normalized classes")
    p.add_argument("--name")

    p = sub.add_parser("count", parents=[common], help="point counts over F_q")
    p.add_argument("--name", required=True)
    p.add_argument("--q", type=_int_list, required=True, help="comma-separated prime powers")
    p.add_argument("--check-trace", action="store_true", help="also compute the compositional count")

    p = sub.add_parser("hodge", parents=[common], help="Hodge series up to (uv)^order")
    p.add_argument("--name", required=True)
    p.add_argument("--order", type=int, required=True)

    p = sub.add_parser("oracle", parents=[common], help="brute-force comparison over prime fields")
    p.add_argument("--name", required=True)
    p.add_argument("--variety", help="variety name (defaults to --name)")
    p.add_argument("--r", type=int, default=0, help="quotient by GL(r); 0 compares plain point counts")
    p.add_argument("--p", type=_int_list, required=True, help="comma-separated primes")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        program, varieties = load_inputs(args.files)
        result = COMMANDS[args.command](args, program, varieties)
    except (MscError, CliError) as exc:
        print(f"msc: error: {exc}", file=sys.stderr)
        return 1
    payload, ok, notes = result
    if args.json:
        payload = {"v": SCHEMA_VERSION, **payload, "ok": ok}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "".join(line + "\n" for line in payload)
    for note in notes:
        print(note, file=sys.stderr)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
