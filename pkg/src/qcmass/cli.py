"""Command-line front end.

Every subcommand is a thin adapter over one library call; output is
deterministic (canonical rationals, sorted JSON keys).  Exit codes: 0 on
success, 2 when an input grid fails its declared axioms, 1 on usage or IO
problems.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import io as qio
from .decomposition import min_two_copula_decomposition, series_convergence, synthesize
from .errors import InvalidArgument, QcmassError
from .example_suite import nondecomposability_witness, paper_example
from .grid import GridDistribution, Interval, frac, validate_copula, validate_quasi_copula, volume
from .measure import jordan, marginal_cdf, tv_norm
from .smoothing import SmoothingPlan, smooth_extend, smooth_for_N
from .strips import alpha_coefficient, strip_cover


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _default_depth() -> int:
    raw = os.environ.get("QCMASS_DEPTH")
    if raw is None:
        return 12
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"QCMASS_DEPTH must be an integer, got {raw!r}")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return qio.load_json(fh.read())
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e}")
    except ValueError as e:
        raise _UsageError(f"{path}: not valid JSON: {e}")


def _load_grid(path: str) -> GridDistribution:
    from .errors import DimensionMismatch

    try:
        return qio.grid_from_dict(_read_json(path))
    except (InvalidArgument, DimensionMismatch) as e:
        # structural problems are usage errors; axiom failures stay exit 2
        raise _UsageError(f"{path}: {e}")


def _emit(args, payload, csv_text=None):
    if getattr(args, "format", "json") == "csv":
        if csv_text is None:
            raise _UsageError("this subcommand has no CSV form")
        text = csv_text
    else:
        text = qio.dump_json(payload)
    if getattr(args, "out", None):
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as e:
            raise _UsageError(f"cannot write {args.out}: {e}")
    else:
        sys.stdout.write(text)


def _report_dict(report) -> dict:
    d = {"passed": report.passed, "checks": dict(report.checks)}
    if getattr(report, "negative_cells", None):
        d["negative_cells"] = [list(c) for c in report.negative_cells]
    if report.messages:
        d["messages"] = list(report.messages)
    return d


def _cmd_validate(args):
    raw = _read_json(args.infile)
    try:
        xb = [frac(s) for s in raw["x_breaks"]]
        yb = [frac(s) for s in raw["y_breaks"]]
        mass = [[frac(s) for s in col] for col in raw["mass"]]
        tag = raw.get("tag", "signed")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise _UsageError(f"{args.infile}: malformed grid: {e}")
    from .errors import DimensionMismatch
    from .grid import make_grid

    try:
        G = make_grid(xb, yb, mass, "signed")
    except (InvalidArgument, DimensionMismatch) as e:
        raise _UsageError(f"{args.infile}: {e}")
    qc = validate_quasi_copula(G)
    cp = validate_copula(G)
    payload = {
        "tag": tag,
        "quasi-copula": _report_dict(qc),
        "copula": _report_dict(cp),
    }
    _emit(args, payload)
    own = {"signed": True, "quasi-copula": qc.passed, "copula": cp.passed}.get(tag)
    if own is None:
        raise _UsageError(f"unknown tag {tag!r}")
    return 0 if own else 2


def _parse_rect(spec: str):
    parts = spec.split(":")
    if len(parts) != 4:
        raise _UsageError("--rect expects x_lo:x_hi:y_lo:y_hi")
    try:
        vals = [frac(p) for p in parts]
    except (ValueError, ZeroDivisionError, InvalidArgument) as e:
        raise _UsageError(f"bad rectangle: {e}")
    return Interval(vals[0], vals[1]), Interval(vals[2], vals[3])


def _cmd_volume(args):
    G = _load_grid(args.infile)
    xs, ys = _parse_rect(args.rect)
    v = volume(G, xs, ys)
    _emit(args, {"volume": qio.fraction_str(v), "volume_approx": qio.approx(v)})
    return 0


def _cmd_measure(args):
    G = _load_grid(args.infile)
    jp = jordan(G)
    payload = {
        "tv_norm": qio.fraction_str(tv_norm(G)),
        "tv_norm_approx": qio.approx(tv_norm(G)),
        "plus_total": qio.fraction_str(jp.total_plus),
        "minus_total": qio.fraction_str(jp.total_minus),
    }
    csv_text = None
    if args.marginal:
        F = marginal_cdf(G, args.axis, args.part)
        payload["marginal"] = qio.plcdf_to_dict(F)
        payload["marginal_axis"] = args.axis
        csv_text = qio.plcdf_to_csv(F)
    _emit(args, payload, csv_text)
    return 0


def _cmd_alpha(args):
    G = _load_grid(args.infile)
    rep = alpha_coefficient(G, args.depth)
    payload = {
        "alpha": qio.fraction_str(rep.alpha),
        "alpha_approx": qio.approx(rep.alpha),
        "grid_aligned": qio.fraction_str(rep.grid_aligned),
        "exact": rep.exact,
        "per_depth": {str(n): qio.fraction_str(v) for n, v in rep.per_depth.items()},
    }
    _emit(args, payload)
    return 0


def _cmd_strips(args):
    G = _load_grid(args.infile)
    F = strip_cover(G, args.N, args.depth, args.axis)
    _emit(args, qio.family_to_dict(F))
    return 0


def _cmd_smooth(args):
    G = _load_grid(args.infile)
    if args.plan:
        K, L = qio.plan_from_dict(_read_json(args.plan))
        out = smooth_extend(SmoothingPlan(G, tuple(K), tuple(L)))
    elif args.N is not None:
        out, _, _ = smooth_for_N(G, args.N, args.depth)
    else:
        raise _UsageError("smooth needs either --N or --plan")
    _emit(args, qio.grid_to_dict(out), qio.grid_to_csv(out))
    return 0


def _cmd_decompose(args):
    G = _load_grid(args.infile)
    d = min_two_copula_decomposition(G)
    payload = {
        "alpha": qio.fraction_str(d.alpha),
        "alpha_approx": qio.approx(d.alpha),
        "beta": qio.fraction_str(d.beta),
        "minimal": d.minimal,
        "A": qio.grid_to_dict(d.A),
        "B": qio.grid_to_dict(d.B),
    }
    _emit(args, payload)
    return 0


def _parse_n_list(spec: str):
    try:
        ns = [int(p) for p in spec.split(",") if p]
    except ValueError:
        raise _UsageError("--N expects a comma-separated list of integers")
    if not ns:
        raise _UsageError("--N list is empty")
    return ns


def _cmd_series(args):
    G = _load_grid(args.infile)
    series = synthesize(G, _parse_n_list(args.N), args.depth)
    if args.out and os.path.isdir(args.out):
        # manifest plus one grid file per distinct copula
        distinct = {}
        for t in series.terms:
            key = (t.copula.x_breaks, t.copula.y_breaks, t.copula.mass)
            if key not in distinct:
                distinct[key] = f"copula_{len(distinct)}.json"
        for key, name in distinct.items():
            g = GridDistribution(*key, "copula")
            with open(os.path.join(args.out, name), "w") as fh:
                fh.write(qio.dump_json(qio.grid_to_dict(g)))
        manifest = {
            "terms": [
                {
                    "gamma": qio.fraction_str(t.gamma),
                    "copula_file": distinct[
                        (t.copula.x_breaks, t.copula.y_breaks, t.copula.mass)
                    ],
                    "provenance": t.provenance,
                }
                for t in series.terms
            ]
        }
        with open(os.path.join(args.out, "manifest.json"), "w") as fh:
            fh.write(qio.dump_json(manifest))
        return 0
    payload = {
        "terms": [
            {
                "gamma": qio.fraction_str(t.gamma),
                "provenance": t.provenance,
                "copula": qio.grid_to_dict(t.copula),
            }
            for t in series.terms
        ]
    }
    if args.convergence:
        rep = series_convergence(series)
        import csv as _csv
        import io as _io

        buf = _io.StringIO()
        w = _csv.writer(buf, lineterminator="\n")
        w.writerow(["prefix", "tv_distance", "sup_distance"])
        for r in rep.rows:
            w.writerow(
                [
                    r["prefix"],
                    qio.fraction_str(r["tv_distance"]),
                    qio.fraction_str(r["sup_distance"]),
                ]
            )
        payload["convergence"] = [
            {
                "prefix": r["prefix"],
                "tv_distance": qio.fraction_str(r["tv_distance"]),
                "sup_distance": qio.fraction_str(r["sup_distance"]),
            }
            for r in rep.rows
        ]
        _emit(args, payload, buf.getvalue())
        return 0
    _emit(args, payload)
    return 0


def _cmd_example(args):
    rep = paper_example(args.T)
    payload = {
        "T": rep.T,
        "records": [
            {
                "n": r["n"],
                "tv_term": qio.fraction_str(r["tv_term"]),
                "formula_value": qio.fraction_str(r["formula_value"]),
                "match": r["match"],
            }
            for r in rep.records
        ],
        "partial_sums": [qio.fraction_str(s) for s in rep.partial_sums],
        "tail_estimate": qio.fraction_str(rep.tail_estimate),
        "total_approx": qio.approx(rep.total_estimate),
        "alpha_growth": [
            {"T": t, "alpha": qio.fraction_str(a)} for t, a in rep.alpha_growth
        ],
    }
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "tv_term"])
    for r in rep.records:
        w.writerow([r["n"], qio.fraction_str(r["tv_term"])])
    _emit(args, payload, buf.getvalue())
    return 0


def _cmd_witness(args):
    rows = nondecomposability_witness(args.T)
    payload = {
        "alpha_growth": [{"T": t, "alpha": qio.fraction_str(a)} for t, a in rows]
    }
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["T", "alpha"])
    for t, a in rows:
        w.writerow([t, qio.fraction_str(a)])
    _emit(args, payload, buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcmass", description="exact grid quasi-copula toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, infile=True):
        if infile:
            sp.add_argument("--in", dest="infile", required=True, help="input grid JSON")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = sub.add_parser("validate", help="check the grid axioms")
    common(sp)
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("volume", help="signed mass of a rectangle")
    common(sp)
    sp.add_argument("--rect", required=True, help="x_lo:x_hi:y_lo:y_hi as fractions")
    sp.set_defaults(func=_cmd_volume)

    sp = sub.add_parser("measure", help="total variation and marginals")
    common(sp)
    sp.add_argument("--marginal", action="store_true", help="include a marginal CDF")
    sp.add_argument("--axis", choices=["x", "y"], default="x")
    sp.add_argument("--part", choices=["abs-normalized", "plus", "minus"], default="abs-normalized")
    sp.set_defaults(func=_cmd_measure)

    sp = sub.add_parser("alpha", help="dyadic concentration coefficient")
    common(sp)
    sp.add_argument("--depth", type=int, default=_default_depth())
    sp.set_defaults(func=_cmd_alpha)

    sp = sub.add_parser("strips", help="bad-strip cover for one threshold")
    common(sp)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--depth", type=int, default=_default_depth())
    sp.add_argument("--axis", choices=["x", "y"], default="x")
    sp.set_defaults(func=_cmd_strips)

    sp = sub.add_parser("smooth", help="band removal and linear re-extension")
    common(sp)
    sp.add_argument("--N", type=int, help="threshold (builds the covers itself)")
    sp.add_argument("--plan", help="explicit band plan JSON instead of --N")
    sp.add_argument("--depth", type=int, default=_default_depth())
    sp.set_defaults(func=_cmd_smooth)

    sp = sub.add_parser("decompose", help="minimal two-copula decomposition")
    common(sp)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("series", help="convergent copula series for a grid")
    common(sp)
    sp.add_argument("--N", required=True, help="comma-separated thresholds, e.g. 1,2,4")
    sp.add_argument("--depth", type=int, default=_default_depth())
    sp.add_argument("--convergence", action="store_true", help="include prefix distances")
    sp.set_defaults(func=_cmd_series)

    sp = sub.add_parser("example", help="ordinal-sum series report")
    common(sp, infile=False)
    sp.add_argument("--T", type=int, default=8)
    sp.set_defaults(func=_cmd_example)

    sp = sub.add_parser("witness", help="alpha growth of the truncations")
    common(sp, infile=False)
    sp.add_argument("--T", type=int, default=6)
    sp.set_defaults(func=_cmd_witness)

    return p


def run(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except _UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    try:
        return args.func(args)
    except _UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except QcmassError as e:
        sys.stderr.write(f"validation error: {e}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
