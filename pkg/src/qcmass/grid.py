"""Exact grid-represented distributions on the unit square.

A :class:`GridDistribution` assigns one signed rational mass to every cell of
a rectangular partition of [0,1]^2, spread uniformly over the cell.  Its
cumulative surface is therefore piecewise bilinear and every quantity in this
package (volumes, strip masses, norms, coefficients) is an exact
``fractions.Fraction``.  Floating point never enters a computation; it only
appears when reports are rendered.

Mass is indexed ``mass[i][j]`` where ``i`` is the column (x direction) and
``j`` the row (y direction), with ``j`` increasing upward.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    InvalidArgument,
    InvalidBlock,
    LipschitzViolation,
    MarginalViolation,
    NegativeMass,
    OutOfDomain,
    PartitionGap,
)

ZERO = Fraction(0)
ONE = Fraction(1)

TAG_SIGNED = "signed"
TAG_QUASI = "quasi-copula"
TAG_COPULA = "copula"
_TAGS = (TAG_SIGNED, TAG_QUASI, TAG_COPULA)


def frac(value) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to Fraction.

    Floats are rejected: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InvalidArgument(f"float {value!r} rejected; pass an exact rational")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Interval:
    """Open subinterval (lo, hi) of [0,1] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", frac(self.lo))
        object.__setattr__(self, "hi", frac(self.hi))
        if not (ZERO <= self.lo < self.hi <= ONE):
            raise InvalidArgument(f"bad interval ({self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def covers(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class GridDistribution:
    """Signed measure with piecewise-uniform density on a rectangular grid."""

    x_breaks: tuple
    y_breaks: tuple
    mass: tuple  # mass[i][j], column i, row j
    tag: str = TAG_SIGNED

    @property
    def ncols(self) -> int:
        return len(self.x_breaks) - 1

    @property
    def nrows(self) -> int:
        return len(self.y_breaks) - 1

    @property
    def widths(self) -> tuple:
        xb = self.x_breaks
        return tuple(xb[i + 1] - xb[i] for i in range(self.ncols))

    @property
    def heights(self) -> tuple:
        yb = self.y_breaks
        return tuple(yb[j + 1] - yb[j] for j in range(self.nrows))

    def total_mass(self) -> Fraction:
        return sum(sum(col) for col in self.mass)

    def column_sums(self) -> tuple:
        return tuple(sum(col) for col in self.mass)

    def row_sums(self) -> tuple:
        return tuple(sum(col[j] for col in self.mass) for j in range(self.nrows))

    def same_grid(self, other: "GridDistribution") -> bool:
        return self.x_breaks == other.x_breaks and self.y_breaks == other.y_breaks

    def with_tag(self, tag: str) -> "GridDistribution":
        """Re-tag, re-running the validation the new tag requires."""
        return make_grid(self.x_breaks, self.y_breaks, self.mass, tag)


class CdfSurface:
    """Piecewise-bilinear cumulative surface of a grid distribution.

    At grid vertex (x_breaks[i], y_breaks[j]) the value is the total mass of
    all cells southwest of the vertex; within a cell the surface is bilinear.
    """

    def __init__(self, grid: GridDistribution):
        self.grid = grid
        m, n = grid.ncols, grid.nrows
        cum = [[ZERO] * (n + 1) for _ in range(m + 1)]
        for i in range(m):
            col = grid.mass[i]
            running = ZERO
            for j in range(n):
                running += col[j]
                cum[i + 1][j + 1] = cum[i][j + 1] + running
        self._cum = cum

    def vertex(self, i: int, j: int) -> Fraction:
        return self._cum[i][j]

    def at(self, x, y) -> Fraction:
        x, y = frac(x), frac(y)
        if not (ZERO <= x <= ONE and ZERO <= y <= ONE):
            raise OutOfDomain(f"({x}, {y}) outside the unit square")
        g = self.grid
        i = min(bisect_right(g.x_breaks, x) - 1, g.ncols - 1)
        j = min(bisect_right(g.y_breaks, y) - 1, g.nrows - 1)
        u = (x - g.x_breaks[i]) / (g.x_breaks[i + 1] - g.x_breaks[i])
        v = (y - g.y_breaks[j]) / (g.y_breaks[j + 1] - g.y_breaks[j])
        c = self._cum
        return (
            (1 - u) * (1 - v) * c[i][j]
            + u * (1 - v) * c[i + 1][j]
            + (1 - u) * v * c[i][j + 1]
            + u * v * c[i + 1][j + 1]
        )


def cdf_at(surface, x, y) -> Fraction:
    """Exact cumulative value at (x, y); accepts a surface or a grid."""
    if isinstance(surface, GridDistribution):
        surface = CdfSurface(surface)
    return surface.at(x, y)


def volume(G: GridDistribution, x_span: Interval, y_span: Interval) -> Fraction:
    """Signed volume of the rectangle x_span x y_span under G's surface."""
    s = CdfSurface(G)
    return (
        s.at(x_span.hi, y_span.hi)
        - s.at(x_span.lo, y_span.hi)
        - s.at(x_span.hi, y_span.lo)
        + s.at(x_span.lo, y_span.lo)
    )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the grid axiom checks; carries failures, never raises."""

    checks: dict
    negative_cells: tuple = ()
    messages: tuple = ()

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _check_breaks(breaks, label: str) -> tuple:
    bs = tuple(frac(b) for b in breaks)
    if len(bs) < 2 or bs[0] != ZERO or bs[-1] != ONE:
        raise InvalidArgument(f"{label} must run from 0 to 1")
    if any(bs[k] >= bs[k + 1] for k in range(len(bs) - 1)):
        raise InvalidArgument(f"{label} must be strictly increasing")
    return bs


def make_grid(x_breaks, y_breaks, mass, tag: str = TAG_SIGNED) -> GridDistribution:
    """Validating constructor; the tag decides which axioms are enforced."""
    if tag not in _TAGS:
        raise InvalidArgument(f"unknown tag {tag!r}")
    xb = _check_breaks(x_breaks, "x_breaks")
    yb = _check_breaks(y_breaks, "y_breaks")
    cols = tuple(tuple(frac(v) for v in col) for col in mass)
    if len(cols) != len(xb) - 1 or any(len(col) != len(yb) - 1 for col in cols):
        raise DimensionMismatch(
            f"mass must be {len(xb) - 1} x {len(yb) - 1} (columns x rows)"
        )
    g = GridDistribution(xb, yb, cols, tag)
    if tag == TAG_SIGNED:
        return g
    report = validate_copula(g) if tag == TAG_COPULA else validate_quasi_copula(g)
    if report.passed:
        return g
    c = report.checks
    if not (c["total_mass"] and c["uniform_marginals"]):
        raise MarginalViolation("; ".join(report.messages))
    if tag == TAG_COPULA and not c["nonnegative_mass"]:
        raise NegativeMass(
            f"{len(report.negative_cells)} cells carry negative mass: "
            f"{list(report.negative_cells)[:8]}"
        )
    raise LipschitzViolation("; ".join(report.messages))


def validate_quasi_copula(G: GridDistribution) -> ValidationReport:
    """Check the quasi-copula axioms, reduced to vertex-lattice conditions.

    For a piecewise-bilinear surface, monotonicity and the 1-Lipschitz bound
    over arbitrary point pairs are equivalent to single-step conditions on the
    vertex cumulative matrix: C nondecreasing along each axis, and each step
    bounded by the corresponding break spacing.  Groundedness holds by
    construction of the cumulative.
    """
    s = CdfSurface(G)
    m, n = G.ncols, G.nrows
    xb, yb = G.x_breaks, G.y_breaks
    messages = []

    total_ok = s.vertex(m, n) == ONE
    if not total_ok:
        messages.append(f"total mass {s.vertex(m, n)} != 1")

    marg_ok = all(s.vertex(i, n) == xb[i] for i in range(m + 1)) and all(
        s.vertex(m, j) == yb[j] for j in range(n + 1)
    )
    if not marg_ok:
        messages.append("uniform marginals fail (non-stochastic cell masses)")

    mono_x = mono_y = lip_x = lip_y = True
    for j in range(n + 1):
        for i in range(m):
            step = s.vertex(i + 1, j) - s.vertex(i, j)
            if step < ZERO:
                mono_x = False
            if step > xb[i + 1] - xb[i]:
                lip_x = False
    for i in range(m + 1):
        for j in range(n):
            step = s.vertex(i, j + 1) - s.vertex(i, j)
            if step < ZERO:
                mono_y = False
            if step > yb[j + 1] - yb[j]:
                lip_y = False
    if not (mono_x and mono_y):
        messages.append("monotonicity fails at some vertex prefix")
    if not (lip_x and lip_y):
        messages.append("a strip carries more mass than its width/height")

    checks = {
        "total_mass": total_ok,
        "uniform_marginals": marg_ok,
        "monotone_in_x": mono_x,
        "monotone_in_y": mono_y,
        "lipschitz_in_x": lip_x,
        "lipschitz_in_y": lip_y,
    }
    return ValidationReport(checks=checks, messages=tuple(messages))


def validate_copula(G: GridDistribution) -> ValidationReport:
    """Quasi-copula checks plus cellwise nonnegativity (2-increasingness)."""
    base = validate_quasi_copula(G)
    neg = tuple(
        (i, j)
        for i in range(G.ncols)
        for j in range(G.nrows)
        if G.mass[i][j] < ZERO
    )
    checks = dict(base.checks)
    checks["nonnegative_mass"] = not neg
    messages = base.messages
    if neg:
        messages = messages + (f"{len(neg)} cells with negative mass",)
    return ValidationReport(checks=checks, negative_cells=neg, messages=messages)


def product_copula(x_breaks, y_breaks) -> GridDistribution:
    """Independence copula: each cell carries width * height."""
    xb = _check_breaks(x_breaks, "x_breaks")
    yb = _check_breaks(y_breaks, "y_breaks")
    mass = tuple(
        tuple((xb[i + 1] - xb[i]) * (yb[j + 1] - yb[j]) for j in range(len(yb) - 1))
        for i in range(len(xb) - 1)
    )
    return GridDistribution(xb, yb, mass, TAG_COPULA)


def diamond_checkerboard(n: int) -> GridDistribution:
    """Checkerboard quasi-copula on a (2n+1)x(2n+1) uniform grid.

    Cells within L1 distance n of the center carry mass +-1/(2n+1) in an
    alternating pattern with the four diamond tips positive: exactly (n+1)^2
    positive and n^2 negative cells.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument("n must be a positive integer")
    m = 2 * n + 1
    breaks = tuple(Fraction(k, m) for k in range(m + 1))
    unit = Fraction(1, m)
    mass = []
    for i in range(m):
        col = []
        for j in range(m):
            d = abs(i - n) + abs(j - n)
            if d > n:
                col.append(ZERO)
            elif (n - d) % 2 == 0:
                col.append(unit)
            else:
                col.append(-unit)
        mass.append(tuple(col))
    return make_grid(breaks, breaks, tuple(mass), TAG_QUASI)


def ordinal_sum(blocks: Sequence) -> GridDistribution:
    """Block-diagonal assembly of rescaled quasi-copula grids.

    ``blocks`` is a sequence of (Interval, GridDistribution) pairs whose
    intervals tile [0,1] in order.  Block k's grid is rescaled into J_k x J_k
    and its mass scaled by the interval length.
    """
    if not blocks:
        raise PartitionGap("no blocks given")
    prev_hi = ZERO
    for iv, g in blocks:
        if iv.lo != prev_hi:
            raise PartitionGap(f"gap or overlap at {iv.lo}")
        prev_hi = iv.hi
        if not isinstance(g, GridDistribution) or g.tag not in (TAG_QUASI, TAG_COPULA):
            raise InvalidBlock("blocks must be quasi-copula or copula grids")
    if prev_hi != ONE:
        raise PartitionGap("intervals do not reach 1")

    xb, yb = [ZERO], [ZERO]
    x_off, y_off = [], []
    for iv, g in blocks:
        x_off.append(len(xb) - 1)
        y_off.append(len(yb) - 1)
        xb.extend(iv.lo + iv.length * b for b in g.x_breaks[1:])
        yb.extend(iv.lo + iv.length * b for b in g.y_breaks[1:])
    mass = [[ZERO] * (len(yb) - 1) for _ in range(len(xb) - 1)]
    for (iv, g), xo, yo in zip(blocks, x_off, y_off):
        scale = iv.length
        for i in range(g.ncols):
            for j in range(g.nrows):
                mass[xo + i][yo + j] = scale * g.mass[i][j]
    tag = TAG_COPULA if all(g.tag == TAG_COPULA for _, g in blocks) else TAG_QUASI
    return make_grid(tuple(xb), tuple(yb), tuple(map(tuple, mass)), tag)


def _refine_axis(breaks, extra):
    merged = sorted(set(breaks) | {frac(b) for b in extra})
    if merged[0] < ZERO or merged[-1] > ONE:
        raise InvalidArgument("extra breakpoints must lie in [0,1]")
    return tuple(merged)


def common_refinement(G: GridDistribution, extra_x=(), extra_y=()) -> GridDistribution:
    """Equivalent distribution on a finer grid; masses split area-proportionally."""
    xb2 = _refine_axis(G.x_breaks, extra_x)
    yb2 = _refine_axis(G.y_breaks, extra_y)
    if xb2 == G.x_breaks and yb2 == G.y_breaks:
        return G
    # parent cell index and length fraction per refined column/row
    def split(old, new, sizes):
        out = []
        p = 0
        for k in range(len(new) - 1):
            while old[p + 1] <= new[k]:
                p += 1
            out.append((p, (new[k + 1] - new[k]) / sizes[p]))
        return out

    colmap = split(G.x_breaks, xb2, G.widths)
    rowmap = split(G.y_breaks, yb2, G.heights)
    mass = tuple(
        tuple(G.mass[pi][pj] * fx * fy for pj, fy in rowmap) for pi, fx in colmap
    )
    return GridDistribution(xb2, yb2, mass, G.tag)


def refine_all(grids: Iterable[GridDistribution]) -> list:
    """Refine every grid to the common break set of the whole collection."""
    grids = list(grids)
    xb = sorted(set().union(*(g.x_breaks for g in grids)))
    yb = sorted(set().union(*(g.y_breaks for g in grids)))
    return [common_refinement(g, xb, yb) for g in grids]
