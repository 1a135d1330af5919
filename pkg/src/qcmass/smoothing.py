"""Band removal and linear re-extension of grid quasi-copulas.

Given disjoint open column bands K and row bands L, the source quasi-copula
is restricted to the complement grid lines and re-extended as linearly as
possible across the removed bands.  Two independent routes compute the
result: the pointwise bilinear extension formula, and a direct redistribution
of the removed mass (uniform along the band in the linear direction).  They
must induce the same grid measure, which `verify_inducing` checks exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EndpointMismatch, GridMismatch, InvalidArgument, NotQuasiCopula
from .grid import (
    TAG_COPULA,
    TAG_QUASI,
    TAG_SIGNED,
    ZERO,
    CdfSurface,
    GridDistribution,
    Interval,
    common_refinement,
    make_grid,
    validate_quasi_copula,
)


def _check_bands(intervals, label: str):
    """Sorted disjoint open intervals; endpoints may touch but not overlap."""
    out = []
    for iv in intervals:
        if not isinstance(iv, Interval):
            iv = Interval(iv[0], iv[1])
        out.append(iv)
    for a, b in zip(out, out[1:]):
        if b.lo < a.hi:
            raise EndpointMismatch(
                f"{label} intervals must be sorted and disjoint: {a} vs {b}"
            )
    return tuple(out)


@dataclass(frozen=True)
class SmoothingPlan:
    """A source quasi-copula plus the column/row bands to remove."""

    source: GridDistribution
    k_intervals: tuple
    l_intervals: tuple

    def __post_init__(self):
        if self.source.tag not in (TAG_QUASI, TAG_COPULA):
            if not validate_quasi_copula(self.source).passed:
                raise NotQuasiCopula("smoothing source must be a quasi-copula grid")
        object.__setattr__(self, "k_intervals", _check_bands(self.k_intervals, "K"))
        object.__setattr__(self, "l_intervals", _check_bands(self.l_intervals, "L"))

    @property
    def target_x(self) -> tuple:
        pts = set(self.source.x_breaks)
        for iv in self.k_intervals:
            pts.update((iv.lo, iv.hi))
        return tuple(sorted(pts))

    @property
    def target_y(self) -> tuple:
        pts = set(self.source.y_breaks)
        for iv in self.l_intervals:
            pts.update((iv.lo, iv.hi))
        return tuple(sorted(pts))


def _band_of(t: Fraction, intervals):
    for iv in intervals:
        if iv.contains(t):
            return iv
    return None


def extension_value(plan: SmoothingPlan, x, y) -> Fraction:
    """Pointwise bilinear extension across the removed bands.

    Outside the bands the value is the source value; inside, it is the
    bilinear interpolation between the nearest retained coordinates.
    """
    surf = CdfSurface(plan.source)
    kx = _band_of(x, plan.k_intervals)
    ly = _band_of(y, plan.l_intervals)
    x1, x2 = (kx.lo, kx.hi) if kx else (x, x)
    y1, y2 = (ly.lo, ly.hi) if ly else (y, y)
    a = (x - x1) / (x2 - x1) if x1 < x2 else Fraction(1)
    b = (y - y1) / (y2 - y1) if y1 < y2 else Fraction(1)
    return (
        (1 - a) * (1 - b) * surf.at(x1, y1)
        + (1 - a) * b * surf.at(x1, y2)
        + a * (1 - b) * surf.at(x2, y1)
        + a * b * surf.at(x2, y2)
    )


def smooth_extend(plan: SmoothingPlan) -> GridDistribution:
    """Quasi-copula grid of the extension, from vertex values.

    The extension is bilinear within every cell of the target grid (source
    breaks merged with band endpoints), so second differences of the vertex
    values recover exact cell masses.
    """
    xb, yb = plan.target_x, plan.target_y
    surf = CdfSurface(plan.source)

    def corner(t, intervals):
        iv = _band_of(t, intervals)
        if iv is None:
            return t, t, Fraction(1)
        return iv.lo, iv.hi, (t - iv.lo) / (iv.hi - iv.lo)

    vals = [[None] * len(yb) for _ in range(len(xb))]
    for ix, x in enumerate(xb):
        x1, x2, a = corner(x, plan.k_intervals)
        for iy, y in enumerate(yb):
            y1, y2, b = corner(y, plan.l_intervals)
            vals[ix][iy] = (
                (1 - a) * (1 - b) * surf.at(x1, y1)
                + (1 - a) * b * surf.at(x1, y2)
                + a * (1 - b) * surf.at(x2, y1)
                + a * b * surf.at(x2, y2)
            )
    mass = tuple(
        tuple(
            vals[i + 1][j + 1] - vals[i][j + 1] - vals[i + 1][j] + vals[i][j]
            for j in range(len(yb) - 1)
        )
        for i in range(len(xb) - 1)
    )
    return make_grid(xb, yb, mass, TAG_QUASI)


def smoothed_measure(plan: SmoothingPlan) -> GridDistribution:
    """The same measure assembled by redistributing the removed mass.

    Column-band mass over retained rows is spread uniformly in x across the
    band; row-band mass over retained columns uniformly in y; mass caught in
    a band crossing is spread product-uniformly over the crossing; everything
    outside the bands is kept as is.
    """
    xb, yb = plan.target_x, plan.target_y
    R = common_refinement(plan.source, xb, yb)
    m, n = R.ncols, R.nrows
    w, h = R.widths, R.heights

    def band_cols(iv):
        return [i for i in range(m) if iv.lo <= R.x_breaks[i] and R.x_breaks[i + 1] <= iv.hi]

    def band_rows(iv):
        return [j for j in range(n) if iv.lo <= R.y_breaks[j] and R.y_breaks[j + 1] <= iv.hi]

    k_cols = [band_cols(iv) for iv in plan.k_intervals]
    l_rows = [band_rows(iv) for iv in plan.l_intervals]
    in_k = set().union(*k_cols) if k_cols else set()
    in_l = set().union(*l_rows) if l_rows else set()

    out = [[ZERO] * n for _ in range(m)]
    # retained region: outside every band in both directions
    for i in range(m):
        if i in in_k:
            continue
        for j in range(n):
            if j not in in_l:
                out[i][j] = R.mass[i][j]
    # column bands: per retained row, spread the band's row mass uniformly in x
    for iv, cols in zip(plan.k_intervals, k_cols):
        for j in range(n):
            if j in in_l:
                continue
            f = sum(R.mass[i][j] for i in cols)
            if f:
                for i in cols:
                    out[i][j] += f * w[i] / iv.length
    # row bands: symmetric
    for iv, rows in zip(plan.l_intervals, l_rows):
        for i in range(m):
            if i in in_k:
                continue
            g = sum(R.mass[i][j] for j in rows)
            if g:
                for j in rows:
                    out[i][j] += g * h[j] / iv.length
    # band crossings: total mass spread product-uniformly
    for kiv, cols in zip(plan.k_intervals, k_cols):
        for liv, rows in zip(plan.l_intervals, l_rows):
            t = sum(R.mass[i][j] for i in cols for j in rows)
            if t:
                for i in cols:
                    for j in rows:
                        out[i][j] += t * (w[i] / kiv.length) * (h[j] / liv.length)
    return GridDistribution(R.x_breaks, R.y_breaks, tuple(map(tuple, out)), TAG_SIGNED)


def verify_inducing(q_ext: GridDistribution, mu: GridDistribution) -> bool:
    """True iff the two grids carry identical cell masses (hence equal CDFs)."""
    if not q_ext.same_grid(mu):
        raise GridMismatch("grids differ; refine to a common grid first")
    return q_ext.mass == mu.mass


def region_abs_mass(Q: GridDistribution, k_intervals, l_intervals) -> Fraction:
    """Absolute mass of Q on (K x I) union (I x L)."""
    k_intervals = _check_bands(k_intervals, "K")
    l_intervals = _check_bands(l_intervals, "L")
    xb = sorted(set(Q.x_breaks) | {p for iv in k_intervals for p in (iv.lo, iv.hi)})
    yb = sorted(set(Q.y_breaks) | {p for iv in l_intervals for p in (iv.lo, iv.hi)})
    R = common_refinement(Q, xb, yb)
    total = ZERO
    for i in range(R.ncols):
        col_in = any(
            iv.lo <= R.x_breaks[i] and R.x_breaks[i + 1] <= iv.hi for iv in k_intervals
        )
        for j in range(R.nrows):
            row_in = any(
                iv.lo <= R.y_breaks[j] and R.y_breaks[j + 1] <= iv.hi
                for iv in l_intervals
            )
            if col_in or row_in:
                total += abs(R.mass[i][j])
    return total


def smooth_for_N(Q: GridDistribution, N: int, depth: int = 12):
    """Remove the threshold-N bad-strip covers on both axes and re-extend.

    Returns the extension together with the column and row families used.
    """
    from .strips import strip_cover

    if N < 1:
        raise InvalidArgument("N must be a positive integer")
    fam_k = strip_cover(Q, N, depth, axis="x")
    fam_l = strip_cover(Q, N, depth, axis="y")
    plan = SmoothingPlan(Q, fam_k.union, fam_l.union)
    return smooth_extend(plan), fam_k, fam_l
