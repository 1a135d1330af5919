"""Jordan decomposition, total variation, strip masses and marginals.

Because density is piecewise constant, the positive/negative sets of a grid
measure are unions of cells, so every measure-theoretic quantity here is a
finite rational sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgument, ZeroMeasure
from .grid import (
    ONE,
    TAG_SIGNED,
    ZERO,
    GridDistribution,
    Interval,
    frac,
    refine_all,
)


@dataclass(frozen=True)
class JordanPair:
    """Positive and negative parts of a grid measure, cellwise split."""

    plus: GridDistribution
    minus: GridDistribution

    @property
    def total_plus(self) -> Fraction:
        return self.plus.total_mass()

    @property
    def total_minus(self) -> Fraction:
        return self.minus.total_mass()


def jordan(G: GridDistribution) -> JordanPair:
    """Split G into positive and negative parts with disjoint cell supports."""
    plus = tuple(tuple(max(v, ZERO) for v in col) for col in G.mass)
    minus = tuple(tuple(max(-v, ZERO) for v in col) for col in G.mass)
    return JordanPair(
        GridDistribution(G.x_breaks, G.y_breaks, plus, TAG_SIGNED),
        GridDistribution(G.x_breaks, G.y_breaks, minus, TAG_SIGNED),
    )


def tv_norm(G: GridDistribution) -> Fraction:
    return sum(sum(abs(v) for v in col) for col in G.mass)


def linear_combination(pairs) -> GridDistribution:
    """Sum of coeff * grid over (coeff, GridDistribution) pairs, common grid."""
    pairs = [(frac(c), g) for c, g in pairs]
    if not pairs:
        raise InvalidArgument("need at least one (coefficient, grid) pair")
    grids = refine_all(g for _, g in pairs)
    base = grids[0]
    mass = [[ZERO] * base.nrows for _ in range(base.ncols)]
    for (c, _), g in zip(pairs, grids):
        for i in range(base.ncols):
            for j in range(base.nrows):
                mass[i][j] += c * g.mass[i][j]
    return GridDistribution(
        base.x_breaks, base.y_breaks, tuple(map(tuple, mass)), TAG_SIGNED
    )


def measure_distance(G1: GridDistribution, G2: GridDistribution) -> Fraction:
    """TV norm of G1 - G2 on the common refinement of both grids."""
    return tv_norm(linear_combination([(1, G1), (-1, G2)]))


def strip_mass(G: GridDistribution, axis: str, S: Interval, part: str = "signed") -> Fraction:
    """Measure of the strip S x I (axis='x') or I x S (axis='y').

    Cells partially covered by S contribute their requested part weighted by
    the overlap fraction; the cellwise split is exact because density is
    uniform within each cell.
    """
    if axis not in ("x", "y"):
        raise InvalidArgument(f"axis must be 'x' or 'y', got {axis!r}")
    if part not in ("plus", "minus", "signed", "abs"):
        raise InvalidArgument(f"unknown part {part!r}")
    breaks = G.x_breaks if axis == "x" else G.y_breaks
    total = ZERO
    for k in range(len(breaks) - 1):
        lo, hi = breaks[k], breaks[k + 1]
        ov = min(hi, S.hi) - max(lo, S.lo)
        if ov <= ZERO:
            continue
        w = ov / (hi - lo)
        line = G.mass[k] if axis == "x" else [col[k] for col in G.mass]
        for v in line:
            if part == "signed":
                total += w * v
            elif part == "abs":
                total += w * abs(v)
            elif part == "plus":
                total += w * max(v, ZERO)
            else:
                total += w * max(-v, ZERO)
    return total


@dataclass(frozen=True)
class PiecewiseLinearCdf:
    """Nondecreasing piecewise-linear function on [0,1] with rational knots."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) or len(self.breakpoints) < 2:
            raise InvalidArgument("breakpoints and values must align, length >= 2")

    @property
    def slopes(self) -> tuple:
        b, v = self.breakpoints, self.values
        return tuple(
            (v[k + 1] - v[k]) / (b[k + 1] - b[k]) for k in range(len(b) - 1)
        )

    def at(self, t) -> Fraction:
        t = frac(t)
        b, v = self.breakpoints, self.values
        if not (b[0] <= t <= b[-1]):
            raise InvalidArgument(f"{t} outside [{b[0]}, {b[-1]}]")
        for k in range(len(b) - 1):
            if t <= b[k + 1]:
                u = (t - b[k]) / (b[k + 1] - b[k])
                return (1 - u) * v[k] + u * v[k + 1]
        return v[-1]


def marginal_cdf(G: GridDistribution, axis: str, part: str = "abs-normalized") -> PiecewiseLinearCdf:
    """Marginal distribution of the requested part of |mu| along one axis.

    The density is constant over each grid column (row), so the CDF is
    piecewise linear with rational slopes; abs-normalized divides by the
    total variation to get a probability CDF.
    """
    if axis not in ("x", "y"):
        raise InvalidArgument(f"axis must be 'x' or 'y', got {axis!r}")
    if part not in ("abs-normalized", "plus", "minus"):
        raise InvalidArgument(f"unknown part {part!r}")
    breaks = G.x_breaks if axis == "x" else G.y_breaks
    n = len(breaks) - 1

    def band(k):
        line = G.mass[k] if axis == "x" else [col[k] for col in G.mass]
        if part == "plus":
            return sum(max(v, ZERO) for v in line)
        if part == "minus":
            return sum(max(-v, ZERO) for v in line)
        return sum(abs(v) for v in line)

    sums = [band(k) for k in range(n)]
    total = sum(sums)
    if part == "abs-normalized":
        if total == ZERO:
            raise ZeroMeasure("cannot normalize the zero measure")
        sums = [s / total for s in sums]
    values = [ZERO]
    for s in sums:
        values.append(values[-1] + s)
    return PiecewiseLinearCdf(tuple(breaks), tuple(values))
