"""Command line interface: build, verify, twister, plot, info.

Exit codes: 0 success, 1 verification failure, 2 input or schema error,
3 precision failure.
"""

import argparse
import csv
import io as _io
import json
import sys
from math import factorial

from mpmath import mp

from .domain import build_signed_domain
from .exceptions import InvalidFieldSpec, PrecisionExhausted, SchemaError, ShintaniError
from .io import (FieldSpec, domain_to_json, dumps, load_domain, load_spec, report_to_json,
                 twister_to_json)
from .numfield import embed
from .twisters import construct_twister, validate_twister
from .verify import run_property_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


class _Failure(Exception):
    def __init__(self, code, stage, message):
        super().__init__(message)
        self.code, self.stage = code, stage


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _staged(stage, fn, *args, **kwargs):
    """Run one pipeline stage, mapping package errors onto exit codes."""
    try:
        return fn(*args, **kwargs)
    except PrecisionExhausted as exc:
        raise _Failure(EXIT_PRECISION, stage, str(exc)) from exc
    except (InvalidFieldSpec, SchemaError) as exc:
        raise _Failure(EXIT_INPUT, stage, str(exc)) from exc
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _Failure(EXIT_INPUT, stage, f"{type(exc).__name__}: {exc}") from exc
    except ShintaniError as exc:
        raise _Failure(EXIT_INPUT, stage, str(exc)) from exc


def _load_spec(args):
    spec = _staged("parse", load_spec, args.spec)
    bits = getattr(args, "precision_bits", None) or spec.precision_bits
    return spec, _staged("field", spec.resolve, bits)


def cmd_build(args):
    spec, (K, units, N, tw) = _load_spec(args)
    if K.r1 < 1:
        raise _Failure(EXIT_INPUT, "field", "field must have a real place")
    domain = _staged("build", build_signed_domain, K, units, N, tw, args.margin)
    _emit(dumps(domain_to_json(domain, spec)), args.out)
    return EXIT_OK


def cmd_verify(args):
    domain = _staged("load", load_domain, args.domain)
    if args.precision_bits:
        domain.field.precision_bits = args.precision_bits
    meta = getattr(domain, "build_info", {})
    try:
        bound = None if args.bound in (None, "auto") else int(args.bound)
    except ValueError:
        raise _Failure(EXIT_INPUT, "parse", "--bound must be 'auto' or an integer") from None
    seed = args.seed if args.seed is not None else meta.get("seed", 0)
    samples = args.samples if args.samples is not None else meta.get("sample_count", 1000)
    tol = args.tolerance if args.tolerance is not None else meta.get("tolerance")
    report = _staged("verify", run_property_suite, domain, samples=samples,
                     seed=seed, lambda_samples=args.lambda_samples, tol=tol,
                     bound=bound, relabelings=args.relabelings,
                     invariance_pairs=args.invariance_pairs)
    _emit(dumps(report_to_json(report)), args.out)
    for name in report.failed_properties():
        print(f"FAILED {name}: {report.properties[name].detail}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_twister(args):
    spec, (K, units, N, tw) = _load_spec(args)
    if tw is None:
        tw = _staged("twister", construct_twister, K, N, args.margin)
    report = _staged("twister", validate_twister, K, tw)
    rows = []
    for entry in report.entries:
        rows.append({
            "class": list(entry.cls),
            "coords": [str(c) for c in tw.table[entry.cls].coords],
            "totally_positive": entry.totally_positive,
            "slack_decimal": [mp.nstr(w.slack, 12) for w in entry.windows],
            "ok": entry.ok,
        })
    _emit(dumps({"N": list(N), "valid": report.ok, "twister": twister_to_json(tw),
                 "checks": rows}), args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_plot(args):
    domain = _staged("load", load_domain, args.domain)
    K = domain.field
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if args.real_slice:
        if K.n > 3:
            raise _Failure(EXIT_INPUT, "plot", "the real-slice projection needs n <= 3")
        writer.writerow(["cone", "generator", *[f"x{i}" for i in range(K.n)], "mu"])
        for c in domain.cones:
            for g, w in enumerate(c.generators):
                coords = []
                for place in range(1, K.num_places + 1):
                    v = embed(K, w, place).value
                    coords += [v] if place <= K.r1 else [v.real, v.imag]
                writer.writerow([c.alpha, g, *[mp.nstr(v, 17) for v in coords], c.mu])
    else:
        place = args.place
        if place is None or not 1 <= place <= K.num_places:
            raise _Failure(EXIT_INPUT, "plot", f"--place must lie in 1..{K.num_places}")
        writer.writerow(["cone", "generator", "re", "im", "mu", "sector"])
        j = place - K.r1 - 1
        for c in domain.cones:
            sector = mp.nstr(c.sector[j], 17) if j >= 0 and c.sector else ""
            for g, w in enumerate(c.generators):
                v = mp.mpc(embed(K, w, place).value)
                writer.writerow([c.alpha, g, mp.nstr(v.real, 17), mp.nstr(v.imag, 17),
                                 c.mu, sector])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_info(args):
    path = args.file
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise _Failure(EXIT_INPUT, "parse", f"{path}: not valid JSON ({exc})") from exc
    if isinstance(data, dict) and "schema_version" in data:
        domain = _staged("load", load_domain, path)
        K = domain.field
        info = {"kind": "domain", "cones": len(domain.cones),
                "active_cones": len(domain.active_cones),
                "mu_counts": {str(s): sum(c.mu == s for c in domain.cones) for s in (-1, 0, 1)},
                "degree_constant": domain.degree_constant}
    else:
        spec = _staged("parse", FieldSpec.from_dict, data)
        K = _staged("field", spec.field)
        info = {"kind": "spec"}
    r = K.r1 + K.r2 - 1
    N = info.get("N") or (list(domain.N) if info["kind"] == "domain" else spec.N)
    expected = factorial(K.n - 1)
    for x in N:
        expected *= x
    info.update({"min_poly": list(K.min_poly), "degree": K.n, "signature": [K.r1, K.r2],
                 "unit_rank": r, "N": list(N), "lattice_periods": [1] * r + list(N),
                 "expected_cones": expected, "totally_complex": K.r1 == 0})
    _emit(dumps(info), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shintani", description="Signed fundamental domains for totally positive units.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--precision-bits", type=int, default=None,
                       help="working precision in bits (default: from the input file)")

    p = sub.add_parser("build", help="build a signed domain from a field spec")
    p.add_argument("spec")
    p.add_argument("--margin", type=float, default=0.25,
                   help="relative window slack required of constructed twisters")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run the property suite on a domain file")
    p.add_argument("domain")
    p.add_argument("--samples", type=int, default=None,
                   help="sample count (default: from the build metadata, else 1000)")
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed (default: from the build metadata, else 0)")
    p.add_argument("--bound", default="auto", help="'auto' or a fixed box bound B")
    p.add_argument("--tolerance", default=None, help="relative membership tolerance")
    p.add_argument("--lambda-samples", type=int, default=10_000)
    p.add_argument("--relabelings", type=int, default=100)
    p.add_argument("--invariance-pairs", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("twister", help="construct or validate a twister for a field spec")
    p.add_argument("spec")
    p.add_argument("--margin", type=float, default=0.25)
    common(p)
    p.set_defaults(func=cmd_twister)

    p = sub.add_parser("plot", help="CSV of generator coordinates for plotting")
    p.add_argument("domain")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--place", type=int, help="embedding index (1-based)")
    group.add_argument("--real-slice", action="store_true",
                       help="full real coordinates of every generator (n <= 3)")
    common(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("info", help="summarise a field spec or a domain file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
