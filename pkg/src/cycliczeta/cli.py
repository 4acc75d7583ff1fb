"""Command-line front end.

Exit codes: 0 success, 2 invalid input (curve hypotheses), 3 internal
assertion failure (precision, integrality, consistency).
"""

import argparse
import json
import os
import sys

from .curve import curve_new
from .errors import ComputationError, ValidationError
from .oracle import count_points
from .zeta import compute, point_counts_from_L


def _poly_string(coeffs, var="x"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(f"{c}")
        else:
            mon = var if i == 1 else f"{var}^{i}"
            terms.append(mon if c == 1 else f"{c}*{mon}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cycliczeta",
        description="Zeta function of the cyclic cover y^r = F(x) over F_p.")
    ap.add_argument("--p", type=int, required=True, help="prime p")
    ap.add_argument("--r", type=int, required=True, help="cover degree r")
    ap.add_argument("--poly", required=True,
                    help="coefficients of F, ascending, comma-separated")
    ap.add_argument("--N", type=int, default=None,
                    help="override the working precision")
    ap.add_argument("--strategy", choices=("auto", "bsgs", "naive"),
                    default="auto")
    ap.add_argument("--interpolation", choices=("on", "off"), default="on")
    ap.add_argument("--output", choices=("plain", "json"), default="plain")
    ap.add_argument("--verify", type=int, default=0, metavar="I_MAX",
                    help="check point counts against the enumeration oracle "
                         "over F_{p^i} for i = 1..I_MAX")
    ap.add_argument("--timing", action="store_true",
                    help="print per-phase wall-clock times")
    ap.add_argument("--threads", type=int,
                    default=int(os.environ.get("ZETA_THREADS", "1")))
    return ap


def run(args) -> dict:
    coeffs = [int(c) for c in args.poly.split(",")]
    curve = curve_new(args.p, args.r, coeffs, N_override=args.N)
    result = compute(curve, strategy=args.strategy,
                     interpolation=args.interpolation == "on",
                     threads=max(1, args.threads))
    counts = {}
    if args.verify > 0:
        counts = point_counts_from_L(result.lpoly, curve.p, args.verify)
        for i, predicted in counts.items():
            actual = count_points(curve, i)
            if actual != predicted:
                raise ComputationError(
                    f"oracle mismatch over F_p^{i}: "
                    f"L predicts {predicted}, enumeration finds {actual}")
    return {
        "p": curve.p,
        "r": curve.r,
        "F": coeffs,
        "N": curve.N,
        "L": result.lpoly.coeffs,
        "frobenius_polynomial": result.lpoly.reciprocal(),
        "U": result.lpoly.U,
        "counts": {str(i): c for i, c in counts.items()},
        "timings_ms": {k: round(v, 3) for k, v in result.timings_ms.items()},
        "strategy": result.strategy,
    }


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.output == "json":
        print(json.dumps(report))
        return 0
    print(f"p = {report['p']}")
    print(f"r = {report['r']}")
    print(f"F = {_poly_string(report['F'])}")
    print(f"N = {report['N']}")
    print(f"L(t) = {_poly_string(report['L'], 't')}")
    print(f"L coefficients = {report['L']}")
    print(f"frobenius polynomial = {_poly_string(report['frobenius_polynomial'])}")
    print(f"frobenius polynomial coefficients = {report['frobenius_polynomial']}")
    print(f"U(t) = {_poly_string(report['U'], 't')}")
    for i, c in sorted(report["counts"].items(), key=lambda kv: int(kv[0])):
        print(f"#C(F_p^{i}) = {c} (verified against enumeration)")
    print(f"strategy = {report['strategy']}")
    if args.timing:
        for phase, ms in report["timings_ms"].items():
            print(f"time[{phase}] = {ms} ms", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
