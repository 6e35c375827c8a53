"""Command-line driver: curve info, lattice/eds scans, hall verify, lemma
reports, and the table reproduce harness.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

import argparse
import json
import os
import sys

from . import tables
from .arith import DEFAULT_TRIAL_BOUND
from .curve import Curve, SingularCurveError, parse_curve, parse_xy
from .family import lemma_scan
from .heights import bounded_component_bound, curve_height, hall_verify, projective_height
from .scan import (
    PREDICATE_PRIME,
    PREDICATE_PRIME_POWER,
    SIDE_DENOMINATOR,
    SIDE_NUMERATOR,
    ScanConfig,
    eds_scan,
    hits_to_csv,
    result_to_json_dict,
    run_lattice_scan,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_CONFIG = 2


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ELLSCAN_THREADS", "1")))
    except ValueError:
        return 1


def _parse_gens(curve: Curve, text: str):
    gens = []
    for chunk in text.split(";"):
        x, y = parse_xy(chunk)
        gens.append(curve.point(x, y))
    return tuple(gens)


def _log_abs_delta(curve: Curve) -> float:
    from .heights import log_abs_rational

    return log_abs_rational(curve.delta)


def cmd_curve_info(args) -> int:
    curve = parse_curve(args.curve)
    comps = curve.real_components()
    try:
        four_h = bounded_component_bound(curve)
    except ValueError:
        four_h = None
    report = {
        "ainvs": list(curve.ainvs()),
        "delta": int(curve.delta),
        "abs_delta": abs(int(curve.delta)),
        "log_abs_delta": _log_abs_delta(curve),
        "j": f"{curve.j.numerator}/{curve.j.denominator}",
        "h_j": projective_height(curve.j),
        "curve_height": curve_height(curve),
        "four_times_height": four_h,
        "standardized": curve.is_standardized_shape(),
        "real_components": comps.count,
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _write_output(text: str, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_full(result, path):
    """Full decimal expansions of the record coordinates, kept out of logs."""
    payload = {}
    for pred, hit in result.record_hits.items():
        if hit is None:
            continue
        payload[pred] = {
            "indices": list(hit.vec),
            "A": str(hit.a),
            "B": str(hit.b),
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_scan_lattice(args) -> int:
    curve = parse_curve(args.curve)
    gens = _parse_gens(curve, args.gens)
    target = None
    if args.target and args.target != "inf":
        x, y = parse_xy(args.target)
        target = curve.point(x, y)
    predicate = (
        PREDICATE_PRIME_POWER if args.predicate == "prime-power" else PREDICATE_PRIME
    )
    config = ScanConfig(
        curve=curve,
        generators=gens,
        bound=args.bound,
        side=SIDE_DENOMINATOR if args.side == "den" else SIDE_NUMERATOR,
        predicate=predicate,
        target=target,
        trial_bound=args.trial_bound,
        workers=args.threads,
    )
    result = run_lattice_scan(config)
    if args.format == "csv":
        _write_output(hits_to_csv(result, target), args.output)
    else:
        _write_output(
            json.dumps(result_to_json_dict(result, target), indent=2) + "\n",
            args.output,
        )
    if args.dump_full:
        _dump_full(result, args.dump_full)
    return EXIT_OK


def cmd_scan_eds(args) -> int:
    curve = parse_curve(args.curve)
    x, y = parse_xy(args.gen)
    gen = curve.point(x, y)
    predicate = (
        PREDICATE_PRIME_POWER if args.predicate == "prime-power" else PREDICATE_PRIME
    )
    result = eds_scan(curve, gen, args.nmax, predicate=predicate,
                      trial_bound=args.trial_bound)
    if args.format == "csv":
        _write_output(hits_to_csv(result), args.output)
    else:
        _write_output(json.dumps(result_to_json_dict(result), indent=2) + "\n",
                      args.output)
    if args.dump_full:
        _dump_full(result, args.dump_full)
    return EXIT_OK


def cmd_hall_verify(args) -> int:
    try:
        record = hall_verify(args.d, args.x)
    except ValueError as exc:
        print(f"hall verify failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    json.dump(record.to_json_dict(), sys.stdout)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_verify_lemma(args) -> int:
    curve = Curve(0, 0, 0, -args.N, 0)
    gens = _parse_gens(curve, args.gens)
    count = 0
    for report in lemma_scan(args.N, gens, args.bound, trial_bound=args.trial_bound):
        json.dump(report.to_json_dict(), sys.stdout)
        sys.stdout.write("\n")
        count += 1
    print(f"{count} qualifying points", file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = None
    if args.rows:
        rows = {int(r) for r in args.rows.split(",")}
    outcome = tables.reproduce(
        args.table,
        bound=args.bound,
        nmax=args.nmax,
        workers=args.threads,
        trial_bound=args.trial_bound,
        rows=rows,
        progress=print,
    )
    print(outcome.summary())
    return EXIT_OK if outcome.ok else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellscan",
        description="Exact elliptic-curve arithmetic, length scans, and table reproduction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_curve = sub.add_parser("curve", help="curve-level reports")
    curve_sub = p_curve.add_subparsers(dest="subcommand", required=True)
    p_info = curve_sub.add_parser("info", help="invariants of one curve")
    p_info.add_argument("--curve", required=True, help='Tate vector "[a1,a2,a3,a4,a6]"')
    p_info.set_defaults(func=cmd_curve_info)

    p_scan = sub.add_parser("scan", help="lattice and single-point index scans")
    scan_sub = p_scan.add_subparsers(dest="subcommand", required=True)

    p_lat = scan_sub.add_parser("lattice", help="scan m1 P1 + ... + mr Pr combinations")
    p_lat.add_argument("--curve", required=True)
    p_lat.add_argument("--gens", required=True, help='generators "x1,y1;x2,y2[;x3,y3]"')
    p_lat.add_argument("--bound", type=int, required=True, help="index box half-width")
    p_lat.add_argument("--side", choices=("den", "num"), default="den")
    p_lat.add_argument("--predicate", choices=("prime", "prime-power"), default="prime")
    p_lat.add_argument("--target", default="inf", help='"inf" or a finite point "x,y"')
    p_lat.add_argument("--format", choices=("csv", "json"), default="json")
    p_lat.add_argument("--threads", type=int, default=_default_threads())
    p_lat.add_argument("--trial-bound", type=int, default=DEFAULT_TRIAL_BOUND)
    p_lat.add_argument("--output", default=None, help="write to file instead of stdout")
    p_lat.add_argument("--dump-full", default=None,
                       help="side file for full decimal record coordinates")
    p_lat.set_defaults(func=cmd_scan_lattice)

    p_eds = scan_sub.add_parser("eds", help="scan n*P along one generator")
    p_eds.add_argument("--curve", required=True)
    p_eds.add_argument("--gen", required=True, help='generator "x,y"')
    p_eds.add_argument("--nmax", type=int, required=True)
    p_eds.add_argument("--predicate", choices=("prime", "prime-power"), default="prime")
    p_eds.add_argument("--format", choices=("csv", "json"), default="json")
    p_eds.add_argument("--trial-bound", type=int, default=DEFAULT_TRIAL_BOUND)
    p_eds.add_argument("--output", default=None)
    p_eds.add_argument("--dump-full", default=None)
    p_eds.set_defaults(func=cmd_scan_eds)

    p_hall = sub.add_parser("hall", help="perfect-square witness checks")
    hall_sub = p_hall.add_subparsers(dest="subcommand", required=True)
    p_hv = hall_sub.add_parser("verify", help="verify y^2 = x^3 +- d has a solution")
    p_hv.add_argument("--d", type=int, required=True)
    p_hv.add_argument("--x", type=int, required=True)
    p_hv.set_defaults(func=cmd_hall_verify)

    p_verify = sub.add_parser("verify", help="family-specific empirical checks")
    verify_sub = p_verify.add_subparsers(dest="subcommand", required=True)
    p_lemma = verify_sub.add_parser(
        "lemma", help="divisibility/size reports for length-1 points on y^2=x^3-Nx"
    )
    p_lemma.add_argument("--N", type=int, required=True)
    p_lemma.add_argument("--gens", required=True)
    p_lemma.add_argument("--bound", type=int, required=True)
    p_lemma.add_argument("--trial-bound", type=int, default=DEFAULT_TRIAL_BOUND)
    p_lemma.set_defaults(func=cmd_verify_lemma)

    p_rep = sub.add_parser("reproduce", help="re-run one verification table")
    p_rep.add_argument("table", choices=tables.TABLE_IDS)
    p_rep.add_argument("--bound", type=int, default=None, help="index bound override")
    p_rep.add_argument("--nmax", type=int, default=None, help="eds index override")
    p_rep.add_argument("--threads", type=int, default=_default_threads())
    p_rep.add_argument("--trial-bound", type=int, default=None)
    p_rep.add_argument("--rows", default=None, help="only these 1-based rows, e.g. 1,3")
    p_rep.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SingularCurveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
