"""Command-line front end: single evaluations, table re-runs and the small experiments.

Exit codes: 0 success, 1 a table row or check failed, 2 bad input or a
point outside a method's domain, 3 a numerical procedure did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

import mpmath

from . import mb, tables
from .basis import euler_gamma_integral
from .errors import DivergentTail, DomainError, NonConvergence, SingularityOnBreakpoint
from .evaluator import (EvalBreakdown, Method, digamma, evaluate, hurst_gamma_accelerated,
                        ln_gamma_reference, stokes_step_experiment)
from .precision import DEFAULT_DIGITS, HPComplex, PrecisionPolicy, absolute_digits, matching_digits
from .sectors import PolarArg

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_DOMAIN = 2
EXIT_NONCONVERGENCE = 3

DIGITS_ENV = "EXACT_STIRLING_DIGITS"


def default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DIGITS
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None
    if value < 5:
        raise DomainError(f"{DIGITS_ENV} must be at least 5")
    return value


# ---------------------------------------------------------------------------
# parsing helpers


def parse_theta(text: str) -> Fraction:
    """'num/den' (or a plain integer) in units of pi."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"theta must look like num/den, got {text!r}") from None


def parse_modz(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"modz must be a decimal or a fraction, got {text!r}") from None
    if value <= 0:
        raise DomainError("modz must be positive")
    return value


def parse_limit(text: str | None) -> int | None:
    if text is None or text.strip().lower() in ("none", "inf", "infinite", "0"):
        return None
    try:
        return int(text)
    except ValueError:
        raise DomainError(f"limit must be an integer or 'none', got {text!r}") from None


def parse_list(text: str) -> list[str]:
    return [t for t in (p.strip() for p in text.split(",")) if t]


def parse_complex_arg(text: str) -> str:
    """Accept 2+i, 2+1i, 3/2 and the like; returned in a form mpmath understands."""
    t = text.strip().replace(" ", "")
    if "/" in t and "i" not in t and "j" not in t:
        f = Fraction(t)
        return repr(f.numerator / 1) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    t = t.replace("j", "i")
    if t.endswith("i"):
        body = t[:-1]
        if body == "" or body[-1] in "+-":
            t = body + "1i"
    return t


def complex_json(v: HPComplex, digits: int) -> dict:
    re, im = v.format(digits)
    return {"re": re, "im": im}


def complex_from_json(d: dict) -> HPComplex:
    return HPComplex.from_strings(d["re"], d["im"])


# ---------------------------------------------------------------------------
# rendering


def breakdown_to_dict(r: EvalBreakdown, arg: PolarArg, digits: int,
                      reference: HPComplex | None = None) -> dict:
    out_digits = digits
    terms = {}
    forms = []
    if r.method is Method.MB:
        for f in r.terms:
            forms.append({
                "M": f.M, "line_case": f.line_case.value, "c": str(f.c),
                "terms": {"F": complex_json(f.F, out_digits), "TS": complex_json(f.TS, out_digits),
                          "remainder": complex_json(f.mb_integral, out_digits),
                          "SD": complex_json(f.s_mb, out_digits)},
                "total": complex_json(f.total, out_digits),
            })
        terms = forms[0]["terms"]
    elif r.terms is not None:
        t = r.terms
        terms = {"F": complex_json(t.F, out_digits), "TS": complex_json(t.TS, out_digits),
                 "remainder": complex_json(t.remainder, out_digits),
                 "SD": complex_json(t.SD, out_digits)}
    totals = [complex_json(v, out_digits) for v in (r.raw_totals or (r.total,))]
    doc = {
        "method": r.method.value,
        "modz": str(arg.modulus),
        "theta": {"num": arg.theta_num, "den": arg.theta_den},
        "power": arg.power,
        "N": r.N,
        "limit": r.limit,
        "digits": digits,
        "terms": terms,
        "totals": totals,
        "total": complex_json(r.total, out_digits),
        "line_valued": r.line_valued,
        "tail_bound": mpmath.nstr(r.tail_bound, 6),
        "reference": None if reference is None else complex_json(reference, out_digits),
    }
    if forms:
        doc["forms"] = forms
    if reference is not None:
        doc["matching_digits"] = _digits_json(_agreement(r.total, reference, digits))
    for key in ("route", "jump_multiple"):
        if key in r.extras:
            doc[key] = r.extras[key]
    return doc


def _agreement(value: HPComplex, reference: HPComplex, digits: int) -> float:
    """Relative digits, or absolute ones when the reference is itself zero to working precision."""
    with mpmath.workdps(digits + 20):
        if abs(reference) < mpmath.mpf(10) ** (-digits):
            return absolute_digits(value, reference)
    return matching_digits(value, reference)


def _digits_json(d: float):
    return "inf" if d == float("inf") else round(d, 2)


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out[prefix] = "" if value is None else value


def render(docs: list[dict], fmt: str, text_lines: list[str] | None = None) -> str:
    if fmt == "json":
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2)
    if fmt == "csv":
        flat = []
        for d in docs:
            row: dict = {}
            _flatten("", d, row)
            flat.append(row)
        columns = []
        for row in flat:
            for k in row:
                if k not in columns:
                    columns.append(k)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in flat:
            writer.writerow(row)
        return buf.getvalue().rstrip("\n")
    if text_lines is not None:
        return "\n".join(text_lines)
    return "\n".join(_text_of(d) for d in docs)


def _cx(d) -> str:
    if d is None:
        return "-"
    im = d["im"]
    sign = "-" if im.startswith("-") else "+"
    return f"{d['re']} {sign} {im.lstrip('-')}i"


def _text_of(doc: dict) -> str:
    lines = [f"method {doc['method']}  z = {doc['modz']} exp(i {doc['theta']['num']}/"
             f"{doc['theta']['den']} pi)^{doc['power']}  N = {doc['N']}  limit = {doc['limit']}"]
    forms = doc.get("forms") or [{"M": None, "terms": doc["terms"], "total": doc["total"]}]
    for f in forms:
        if f["M"] is not None:
            lines.append(f"  domain M = {f['M']} ({f['line_case']})")
        for k in ("F", "TS", "remainder", "SD"):
            if k in f["terms"]:
                lines.append(f"    {k:10s} {_cx(f['terms'][k])}")
        if f["M"] is not None:
            lines.append(f"    {'total':10s} {_cx(f['total'])}")
    lines.append(f"  total      {_cx(doc['total'])}")
    lines.append(f"  tail bound {doc['tail_bound']}")
    if doc.get("reference") is not None:
        lines.append(f"  reference  {_cx(doc['reference'])}  ({doc['matching_digits']} digits)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands


def _policy(args) -> PrecisionPolicy:
    return PrecisionPolicy(args.digits, 20, series_limit=parse_limit(args.limit))


def _arg(args) -> PolarArg:
    return PolarArg(parse_modz(args.modz), parse_theta(args.theta), args.power)


def cmd_eval(args) -> int:
    arg = _arg(args)
    policy = _policy(args)
    r = evaluate(arg, args.N, Method.parse(args.method), policy)
    ref = None
    if not args.no_reference and r.method is not Method.REFERENCE:
        ref = ln_gamma_reference(arg, PrecisionPolicy(args.digits, 20))
    doc = breakdown_to_dict(r, arg, args.digits, ref)
    print(render([doc], args.format))
    return EXIT_OK


def cmd_table(args) -> int:
    limit = ... if args.limit is None else parse_limit(args.limit)
    modz = None if args.modz is None else parse_modz(args.modz)
    rows = tables.run_table(args.table_id, digits=args.digits, limit=limit, modz=modz,
                            jobs=args.jobs)
    docs = []
    lines = []
    for r in rows:
        docs.append({"table": r.table, "row": r.index, "label": r.label, "source": r.source,
                     "expected": complex_json(r.expected, 40),
                     "computed": None if r.computed is None else complex_json(r.computed, 40),
                     "digits": _digits_json(r.digits), "required": r.required,
                     "status": r.status, "note": r.note})
        lines.append(tables.render_row(r))
    agreement = _agreement_lines(rows, args.table_id)
    lines.extend(agreement)
    failed = sum(r.status == "FAIL" for r in rows)
    skipped = sum(r.status == "SKIP" for r in rows)
    checked = len(rows) - skipped
    lines.append(f"{checked - failed} of {checked} rows within tolerance"
                 + (f", {failed} failed" if failed else "")
                 + (f" ({skipped} unusable printed rows skipped)" if skipped else ""))
    print(render(docs, args.format, lines if args.format == "text" else None))
    return EXIT_FAILED_CHECK if failed else EXIT_OK


def _agreement_lines(rows, table_id: str) -> list[str]:
    """Multi-method rows (Borel against each MB domain) also report their mutual agreement."""
    out = []
    labels = []
    for r in rows:
        if r.label not in labels:
            labels.append(r.label)
    for label in labels:
        group = [r for r in rows if r.label == label]
        if len(group) > 1:
            d = tables.agreement_digits(rows, label)
            out.append(f"agreement [{label}] across {', '.join(r.source for r in group)}: "
                       f"{'all' if d == float('inf') else f'{d:.1f}'} digits")
    return out


def cmd_mellin_check(args) -> int:
    policy = PrecisionPolicy(args.digits, 20)
    docs, lines = [], []
    worst = float("inf")
    for s in args.s:
        text = parse_complex_arg(s)
        lhs, rhs = mb.mellin_pair_check(text, policy)
        d = matching_digits(lhs, rhs)
        worst = min(worst, d)
        docs.append({"s": s, "lhs": complex_json(lhs, args.digits),
                     "rhs": complex_json(rhs, args.digits), "digits": _digits_json(d)})
        lines.append(f"s = {s}: lhs {_cx(docs[-1]['lhs'])}  rhs {_cx(docs[-1]['rhs'])}  "
                     f"({_digits_json(d)} digits)")
    print(render(docs, args.format, lines if args.format == "text" else None))
    return EXIT_OK if worst >= args.digits - 5 else EXIT_FAILED_CHECK


def cmd_digamma(args) -> int:
    arg = _arg(args)
    policy = _policy(args)
    r = digamma(arg, args.N, policy, compare=args.compare)
    doc = {"method": "Borel", "modz": str(arg.modulus),
           "theta": {"num": arg.theta_num, "den": arg.theta_den}, "power": arg.power,
           "N": args.N, "limit": r.limit, "digits": args.digits,
           "terms": {"F": complex_json(r.terms.F, args.digits),
                     "TS": complex_json(r.terms.TS, args.digits),
                     "remainder": complex_json(r.terms.remainder, args.digits),
                     "SD": complex_json(r.terms.SD, args.digits)},
           "totals": [complex_json(r.total, args.digits)],
           "total": complex_json(r.total, args.digits),
           "tail_bound": mpmath.nstr(r.tail_bound, 6), "reference": None}
    if args.compare:
        fd = r.extras["finite_difference"]
        doc["reference"] = complex_json(fd, args.digits)
        doc["matching_digits"] = _digits_json(matching_digits(r.total, fd))
    print(render([doc], args.format))
    return EXIT_OK


def cmd_stokes_step(args) -> int:
    policy = PrecisionPolicy(args.digits, 20, series_limit=parse_limit(args.limit))
    deltas = [Fraction(d) for d in parse_list(args.deltas)]
    records = stokes_step_experiment(parse_modz(args.modz), deltas, args.N, policy,
                                     required_digits=args.required)
    docs, lines = [], []
    for rec in records:
        docs.append({"delta": str(rec.delta), "theta": {"num": rec.theta.numerator,
                                                        "den": rec.theta.denominator},
                     "sector_M": rec.sector_M,
                     "sector_total": complex_json(rec.sector_total, args.digits),
                     "reference": complex_json(rec.reference, args.digits),
                     "digits": _digits_json(rec.digits),
                     "erf_multiplier": mpmath.nstr(rec.erf_multiplier, 12),
                     "erf_total": complex_json(rec.erf_total, args.digits),
                     "erf_digits": _digits_json(rec.erf_digits),
                     "status": "PASS" if rec.passed else "FAIL"})
        lines.append(f"{docs[-1]['status']} delta = {rec.delta}: step form {_digits_json(rec.digits)} "
                     f"digits; erf multiplier {mpmath.nstr(rec.erf_multiplier, 6)} gives "
                     f"{_digits_json(rec.erf_digits)} digits")
    print(render(docs, args.format, lines if args.format == "text" else None))
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAILED_CHECK


def cmd_euler_gamma(args) -> int:
    policy = PrecisionPolicy(args.digits, 20)
    integral = euler_gamma_integral(policy)
    series = hurst_gamma_accelerated(args.K, policy)
    with mpmath.workdps(args.digits + 20):
        known = HPComplex(+mpmath.euler, 0, args.digits + 20)
    doc = {"integral": complex_json(integral, args.digits)["re"],
           "hurst": complex_json(series, args.digits)["re"],
           "integral_vs_hurst_digits": _digits_json(matching_digits(integral, series)),
           "integral_vs_known_digits": _digits_json(matching_digits(integral, known))}
    lines = [f"{k}: {v}" for k, v in doc.items()]
    print(render([doc], args.format, lines if args.format == "text" else None))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, digits: int, point: bool = True) -> None:
    if point:
        p.add_argument("--modz", default="3", help="|z| as a decimal or fraction")
        p.add_argument("--theta", default="0/1", help="arg z as num/den in units of pi")
        p.add_argument("--power", type=int, default=1, help="evaluate ln Gamma(z**power)")
        p.add_argument("--N", type=int, default=5, help="truncation parameter")
    p.add_argument("--digits", type=int, default=digits, help="target decimal digits")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")


def build_parser(digits: int | None = None) -> argparse.ArgumentParser:
    digits = default_digits() if digits is None else digits
    parser = argparse.ArgumentParser(prog="exact-stirling",
                                     description="Exactified Stirling series for ln Gamma.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate ln Gamma(z^p) by one method")
    _common(p, digits)
    p.add_argument("--method", default="borel", help="borel, mb, incgamma or reference")
    p.add_argument("--limit", default="none", help="n-sum cutoff, or 'none' for the full sum")
    p.add_argument("--no-reference", action="store_true", help="skip the reference comparison")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="re-run a stored table and compare digit by digit")
    p.add_argument("table_id", choices=tables.TABLE_IDS)
    p.add_argument("--limit", default=None, help="override the table's n-sum cutoff")
    p.add_argument("--modz", default=None, help="run the grid at another |z| (reference-checked)")
    p.add_argument("--digits", type=int, default=None, help="override the table's digits")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPUs)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("mellin-check", help="check the Mellin pair at given s")
    p.add_argument("--s", action="append", required=True, help="repeatable; e.g. 1, 3/2, 2+i")
    _common(p, digits, point=False)
    p.set_defaults(func=cmd_mellin_check)

    p = sub.add_parser("digamma", help="psi(z) from the Borel-summed series")
    _common(p, digits)
    p.add_argument("--limit", default="none")
    p.add_argument("--compare", action="store_true", help="add a reference finite difference")
    p.set_defaults(func=cmd_digamma)

    p = sub.add_parser("stokes-step", help="step versus erf multiplier across theta = pi/2")
    _common(p, digits, point=False)
    p.add_argument("--modz", default="3")
    p.add_argument("--deltas", default="1/100,-1/100,1/1000,-1/1000,1/10000,-1/10000,1/20000,-1/20000")
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--limit", default="none")
    p.add_argument("--required", type=float, default=22.0, help="digits needed for PASS")
    p.set_defaults(func=cmd_stokes_step)

    p = sub.add_parser("euler-gamma", help="Euler's constant two independent ways")
    _common(p, digits, point=False)
    p.add_argument("--K", type=int, default=40, help="exact terms of the series")
    p.set_defaults(func=cmd_euler_gamma)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except (DomainError, DivergentTail) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NonConvergence, SingularityOnBreakpoint) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
