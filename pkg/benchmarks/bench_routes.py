"""Wall-clock comparison of the evaluation routes.

    python benchmarks/bench_routes.py [--digits 30] [--repeat 1]

Prints one line per case: route, arguments, seconds, digits against the reference.
"""

import argparse
import time
from fractions import Fraction

import mpmath

from exact_stirling import borel
from exact_stirling.borel import Route
from exact_stirling.evaluator import Method, _with_cancellation, evaluate, ln_gamma_reference
from exact_stirling.precision import PrecisionPolicy, matching_digits
from exact_stirling.sectors import PolarArg

CASES = [
    # (label, z, N, how, limit)
    ("incgamma, limit 1e4", PolarArg(3), 10, Route.INCGAMMA, 10_000),
    ("quadrature, limit 1e4", PolarArg(3), 10, Route.QUADRATURE, 10_000),
    ("quadrature, no cutoff", PolarArg(3), 10, Route.QUADRATURE, None),
    ("quadrature, sector M=1", PolarArg(3, Fraction(2, 3)), 7, Route.QUADRATURE, None),
    ("line form", PolarArg(3, Fraction(1, 2)), 9, None, None),
    ("MB, two domains", PolarArg(Fraction(5, 2), Fraction(-1, 7), 3), 4, "mb", None),
    ("reference only", PolarArg(Fraction(1, 10), Fraction(1, 3)), 1, "reference", None),
]


def run_case(z, N, how, limit, digits):
    policy = PrecisionPolicy(digits, 20, series_limit=limit)
    if how == "mb":
        return evaluate(z, N, Method.MB, policy).total
    if how == "reference":
        return ln_gamma_reference(z, policy)
    work = _with_cancellation(policy, z, N)
    return borel.ln_gamma_borel(z, N, work, route=how or Route.AUTO).total


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()
    print(f"mpmath backend: {mpmath.libmp.BACKEND}, target digits {args.digits}")
    for label, z, N, how, limit in CASES:
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            value = run_case(z, N, how, limit, args.digits)
            best = min(best, time.perf_counter() - t0)
        ref = ln_gamma_reference(z, PrecisionPolicy(args.digits + 10, 20))
        d = f"{matching_digits(value, ref):.1f}"
        print(f"{label:26s} {z.label():32s} N={N:<3d} {best:8.2f} s  digits {d}")


if __name__ == "__main__":
    main()
