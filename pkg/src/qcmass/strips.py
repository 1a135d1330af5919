"""Dyadic strip analysis: the alpha coefficient and bad-strip covers.

A dyadic strip at level n is one of the 2^n intervals ((i-1)/2^n, i/2^n).
A strip is "bad" at threshold N when its positive mass per unit width
exceeds N times the total positive mass.  The cover construction walks the
levels, adopting the parent of every newly exposed bad strip; the resulting
per-level families are disjoint and their union has length at most 2/N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgument, NotQuasiCopula
from .grid import (
    ONE,
    TAG_COPULA,
    TAG_QUASI,
    ZERO,
    GridDistribution,
    Interval,
    frac,
    validate_quasi_copula,
)
from .measure import jordan, strip_mass


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The open interval ((index-1)/2^level, index/2^level)."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0 or not (1 <= self.index <= 2**self.level):
            raise InvalidArgument(f"bad dyadic interval ({self.level}, {self.index})")

    @property
    def interval(self) -> Interval:
        d = 2**self.level
        return Interval(Fraction(self.index - 1, d), Fraction(self.index, d))

    @property
    def length(self) -> Fraction:
        return Fraction(1, 2**self.level)

    def parent(self) -> "DyadicInterval":
        if self.level == 0:
            raise InvalidArgument("the root interval has no parent")
        return DyadicInterval(self.level - 1, (self.index + 1) // 2)


def _require_quasi(Q: GridDistribution):
    if Q.tag in (TAG_QUASI, TAG_COPULA):
        return
    if not validate_quasi_copula(Q).passed:
        raise NotQuasiCopula("input grid fails the quasi-copula axioms")


def _axis_breaks(Q: GridDistribution, axis: str):
    if axis == "x":
        return Q.x_breaks
    if axis == "y":
        return Q.y_breaks
    raise InvalidArgument(f"axis must be 'x' or 'y', got {axis!r}")


def _band_sums(G: GridDistribution, axis: str, positive_only: bool):
    """Per-column (axis='x') or per-row sums, optionally of the plus part."""
    f = (lambda v: max(v, ZERO)) if positive_only else (lambda v: v)
    if axis == "x":
        return [sum(f(v) for v in col) for col in G.mass]
    return [sum(f(col[j]) for col in G.mass) for j in range(G.nrows)]


def _dyadic_resolution(breaks):
    """Smallest n with every break a multiple of 2^-n, or None if non-dyadic."""
    n = 0
    for b in breaks:
        d = b.denominator
        if d & (d - 1):
            return None
        n = max(n, d.bit_length() - 1)
    return n


def _plus_cumulative(Q: GridDistribution, axis: str):
    """Cumulative positive band mass along one axis (piecewise linear)."""
    breaks = _axis_breaks(Q, axis)
    sums = _band_sums(Q, axis, positive_only=True)
    values = [ZERO]
    for s in sums:
        values.append(values[-1] + s)
    widths = [breaks[k + 1] - breaks[k] for k in range(len(breaks) - 1)]

    def at(t: Fraction) -> Fraction:
        from bisect import bisect_right

        k = min(bisect_right(breaks, t) - 1, len(widths) - 1)
        return values[k] + sums[k] * (t - breaks[k]) / widths[k]

    return at


@dataclass(frozen=True)
class AlphaReport:
    """Per-level dyadic maxima and the limiting coefficient."""

    per_depth: dict
    grid_aligned: Fraction
    alpha: Fraction
    exact: bool


def _straddling(breaks, level):
    """Level-`level` dyadic intervals containing an interior break, with the
    per-band overlap fractions, plus the count of clean intervals per band."""
    d = 2**level
    w = Fraction(1, d)
    straddle = []
    counts = [0] * (len(breaks) - 1)
    k = 0
    for idx in range(1, d + 1):
        lo, hi = w * (idx - 1), w * idx
        while breaks[k + 1] <= lo:
            k += 1
        if breaks[k + 1] >= hi:
            counts[k] += 1
            continue
        ov = []
        kk = k
        while kk < len(breaks) - 1 and breaks[kk] < hi:
            cut = min(hi, breaks[kk + 1]) - max(lo, breaks[kk])
            if cut > ZERO:
                ov.append((kk, cut / (breaks[kk + 1] - breaks[kk])))
            kk += 1
        straddle.append(ov)
    return counts, straddle


def _level_max(Q: GridDistribution, level: int, axis: str) -> Fraction:
    """Max over level-`level` dyadic strips on `axis` of
    2^level * sum over cross strips of positive rectangle volumes.

    Density is uniform within cells, so the cross-strip sum for a strip lying
    inside one grid band is the band's value scaled by the overlap fraction;
    only strips containing a grid break need individual treatment, giving
    O(cells + breaks^2) per level instead of 4^level rectangles.
    """
    if axis == "x":
        own, cross = Q.x_breaks, Q.y_breaks
        profile = [list(col) for col in Q.mass]  # profile[i][j]
    else:
        own, cross = Q.y_breaks, Q.x_breaks
        profile = [[col[j] for col in Q.mass] for j in range(Q.nrows)]
    own_w = [own[k + 1] - own[k] for k in range(len(own) - 1)]
    cross_w = [cross[k + 1] - cross[k] for k in range(len(cross) - 1)]
    c_counts, c_straddle = _straddling(cross, level)
    unit = Fraction(1, 2**level)

    def positive_sum(vec) -> Fraction:
        # sum over cross dyadic intervals T of (signed mass of strip x T)^+
        total = ZERO
        for j, v in enumerate(vec):
            if v > ZERO and c_counts[j]:
                total += c_counts[j] * (unit / cross_w[j]) * v
        for ov in c_straddle:
            s = sum(f * vec[j] for j, f in ov)
            if s > ZERO:
                total += s
        return total

    best = ZERO
    # strips fully inside one band: identical value per band
    o_counts, o_straddle = _straddling(own, level)
    for i, cnt in enumerate(o_counts):
        if cnt:
            val = positive_sum(profile[i]) / own_w[i]
            if val > best:
                best = val
    for ov in o_straddle:
        vec = [ZERO] * len(cross_w)
        for i, f in ov:
            for j, v in enumerate(profile[i]):
                vec[j] += f * v
        val = positive_sum(vec) / unit
        if val > best:
            best = val
    return best


def alpha_coefficient(Q: GridDistribution, depth: int = 12) -> AlphaReport:
    """Smallest coefficient admitting a two-copula combination.

    For piecewise-uniform density the dyadic supremum equals the grid-aligned
    maximum of positive band mass over band width; per_depth records the
    (nondecreasing) dyadic values up to `depth`, and `exact` marks inputs
    where the sequence provably stabilizes within that depth.
    """
    _require_quasi(Q)
    if depth < 0:
        raise InvalidArgument("depth must be nonnegative")
    aligned = ZERO
    for axis in ("x", "y"):
        breaks = _axis_breaks(Q, axis)
        sums = _band_sums(Q, axis, positive_only=True)
        for k, s in enumerate(sums):
            aligned = max(aligned, s / (breaks[k + 1] - breaks[k]))
    per_depth = {}
    for n in range(depth + 1):
        per_depth[n] = max(_level_max(Q, n, "x"), _level_max(Q, n, "y"))
        if per_depth[n] == aligned:
            # nondecreasing and bounded by the aligned max: constant from here
            for k in range(n + 1, depth + 1):
                per_depth[k] = aligned
            break
    rx = _dyadic_resolution(Q.x_breaks)
    ry = _dyadic_resolution(Q.y_breaks)
    exact = (
        rx is not None
        and ry is not None
        and (max(per_depth.values()) == aligned or max(rx, ry) <= depth)
    )
    return AlphaReport(per_depth=per_depth, grid_aligned=aligned, alpha=aligned, exact=exact)


def bad_intervals(Q: GridDistribution, N: int, level: int, axis: str = "x"):
    """Level-`level` dyadic strips whose positive mass per unit width exceeds
    N times the total positive mass (strictly)."""
    _require_quasi(Q)
    if N < 1 or level < 0:
        raise InvalidArgument("need N >= 1 and level >= 0")
    total_plus = jordan(Q).total_plus
    assert total_plus > ZERO
    cum = _plus_cumulative(Q, axis)
    d = 2**level
    out = []
    for idx in range(1, d + 1):
        iv = DyadicInterval(level, idx)
        s = iv.interval
        if d * (cum(s.hi) - cum(s.lo)) > N * total_plus:
            out.append(iv)
    return out


@dataclass(frozen=True)
class StripFamily:
    """Per-level cover families and their union for one axis and threshold."""

    N: int
    axis: str
    per_level: dict  # level -> tuple of DyadicInterval
    union: tuple  # sorted disjoint Interval members
    max_depth: int
    complete: bool = True

    def members(self):
        for n in sorted(self.per_level):
            yield from self.per_level[n]

    def total_length(self) -> Fraction:
        return sum((iv.length for iv in self.union), ZERO)


def _covered(S: Interval, union) -> bool:
    return any(u.covers(S) for u in union)


def strip_cover(Q: GridDistribution, N: int, depth: int = 12, axis: str = "x") -> StripFamily:
    """Build the level-by-level cover of bad strips.

    Level n adopts the parents of level-(n+1) bad strips that are disjoint
    from everything adopted so far.  On dyadic-aligned grids the construction
    stabilizes once 2^n resolves every grid break (deeper strips lie inside a
    single band and are already covered), so the loop stops there and the
    result is complete; otherwise completeness is probed one level past
    `depth`.
    """
    _require_quasi(Q)
    if N < 1 or depth < 0:
        raise InvalidArgument("need N >= 1 and depth >= 0")
    breaks = _axis_breaks(Q, axis)
    res = _dyadic_resolution(breaks)
    levels = depth if res is None else min(depth, res)
    per_level = {}
    union = []
    for n in range(levels + 1):
        adopted = {}
        for S in bad_intervals(Q, N, n + 1, axis):
            if not _covered(S.interval, union):
                p = S.parent()
                adopted[p] = True
        if adopted:
            members = tuple(sorted(adopted))
            per_level[n] = members
            union.extend(m.interval for m in members)
    union.sort()
    if res is not None and res <= depth:
        complete = True
    else:
        probe = bad_intervals(Q, N, levels + 1, axis)
        complete = all(_covered(S.interval, union) for S in probe)
    return StripFamily(
        N=N,
        axis=axis,
        per_level=per_level,
        union=tuple(union),
        max_depth=levels,
        complete=complete,
    )


@dataclass(frozen=True)
class PropertyReport:
    checks: dict
    messages: tuple = ()

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def cover_properties(F: StripFamily, Q: GridDistribution, next_family: StripFamily | None = None) -> PropertyReport:
    """Check the cover's structural guarantees against its source grid.

    Verifies: every bad strip at each computed level is covered by the
    shallower families; the adopted members are pairwise disjoint; the union
    has total length at most 2/N; and, when the family for N+1 is supplied,
    its union sits inside this one.
    """
    messages = []
    union_so_far = []
    nested = True
    for n in range(F.max_depth + 1):
        bad = bad_intervals(Q, F.N, n, F.axis)
        if not all(_covered(S.interval, union_so_far) for S in bad):
            nested = False
            messages.append(f"bad strip at level {n} escapes the cover")
        union_so_far.extend(m.interval for m in F.per_level.get(n, ()))

    members = list(F.members())
    disjoint = all(
        not members[a].interval.intersects(members[b].interval)
        for a in range(len(members))
        for b in range(a + 1, len(members))
    )
    if not disjoint:
        messages.append("overlapping members across levels")

    small = F.total_length() <= Fraction(2, F.N)
    if not small:
        messages.append(f"union length {F.total_length()} exceeds 2/{F.N}")

    checks = {
        "bad_strips_covered": nested,
        "members_disjoint": disjoint,
        "length_at_most_2_over_N": small,
    }
    if next_family is not None:
        shrinks = all(_covered(u, F.union) for u in next_family.union)
        checks["next_threshold_nested"] = shrinks
        if not shrinks:
            messages.append("cover for the larger threshold is not contained")
    return PropertyReport(checks=checks, messages=tuple(messages))


def family_strip_measure(Q: GridDistribution, F: StripFamily, part: str = "abs") -> Fraction:
    """Measure of (union of members) x I, in the requested part."""
    return sum(
        (strip_mass(Q, F.axis, u, part) for u in F.union), ZERO
    )
