"""Serialization of grids, families, plans and reports.

All exact numbers travel as canonical "p/q" strings (plain "p" for integers);
floats are accepted nowhere.  Scalar reports additionally carry a decimal
rendering marked approximate, for human convenience only.
"""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction

from .errors import InvalidArgument
from .grid import GridDistribution, Interval, frac, make_grid
from .measure import PiecewiseLinearCdf
from .strips import DyadicInterval, StripFamily


def fraction_str(x: Fraction) -> str:
    return str(frac(x))


def approx(x) -> str:
    """Decimal rendering with 15 significant digits; not exact."""
    return format(float(x), ".15g")


def grid_to_dict(G: GridDistribution) -> dict:
    return {
        "x_breaks": [fraction_str(b) for b in G.x_breaks],
        "y_breaks": [fraction_str(b) for b in G.y_breaks],
        "mass": [[fraction_str(v) for v in col] for col in G.mass],
        "tag": G.tag,
    }


def grid_from_dict(d: dict) -> GridDistribution:
    try:
        xb = [frac(s) for s in d["x_breaks"]]
        yb = [frac(s) for s in d["y_breaks"]]
        mass = [[frac(s) for s in col] for col in d["mass"]]
        tag = d.get("tag", "signed")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidArgument(f"malformed grid object: {e}") from e
    return make_grid(xb, yb, mass, tag)


def grid_to_csv(G: GridDistribution) -> str:
    """One line per cell: i, j, x_lo, x_hi, y_lo, y_hi, mass."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "x_lo", "x_hi", "y_lo", "y_hi", "mass"])
    for i in range(G.ncols):
        for j in range(G.nrows):
            w.writerow(
                [
                    i,
                    j,
                    fraction_str(G.x_breaks[i]),
                    fraction_str(G.x_breaks[i + 1]),
                    fraction_str(G.y_breaks[j]),
                    fraction_str(G.y_breaks[j + 1]),
                    fraction_str(G.mass[i][j]),
                ]
            )
    return buf.getvalue()


def interval_pair(iv: Interval):
    return [fraction_str(iv.lo), fraction_str(iv.hi)]


def intervals_from_list(items, label="interval"):
    out = []
    for it in items:
        if not isinstance(it, (list, tuple)) or len(it) != 2:
            raise InvalidArgument(f"each {label} must be a [lo, hi] pair")
        out.append(Interval(frac(it[0]), frac(it[1])))
    return out


def family_to_dict(F: StripFamily) -> dict:
    return {
        "N": F.N,
        "axis": F.axis,
        "levels": [
            {
                "n": n,
                "intervals": [interval_pair(m.interval) for m in F.per_level[n]],
            }
            for n in sorted(F.per_level)
        ],
        "union": [interval_pair(iv) for iv in F.union],
        "max_depth": F.max_depth,
        "complete": F.complete,
    }


def plan_to_dict(k_intervals, l_intervals) -> dict:
    return {
        "K": [interval_pair(iv) for iv in k_intervals],
        "L": [interval_pair(iv) for iv in l_intervals],
    }


def plan_from_dict(d: dict):
    try:
        K = intervals_from_list(d.get("K", []), "K")
        L = intervals_from_list(d.get("L", []), "L")
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidArgument(f"malformed plan object: {e}") from e
    return K, L


def plcdf_to_dict(F: PiecewiseLinearCdf) -> dict:
    return {
        "breakpoints": [fraction_str(b) for b in F.breakpoints],
        "values": [fraction_str(v) for v in F.values],
        "slopes": [fraction_str(s) for s in F.slopes],
    }


def plcdf_to_csv(F: PiecewiseLinearCdf) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["breakpoint", "value"])
    for b, v in zip(F.breakpoints, F.values):
        w.writerow([fraction_str(b), fraction_str(v)])
    return buf.getvalue()


def dump_json(obj) -> str:
    """Canonical JSON: sorted keys, stable separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_json(text: str):
    return json.loads(text)
