"""Two-copula decompositions and the convergent copula series.

Any grid quasi-copula Q can be written as alpha*A + beta*B with copulas A, B,
alpha = 1 - beta >= 1.  The minimal alpha equals one plus the largest
negative band mass per unit band width; the construction dominates the
negative part with a transportation fill.  A sequence of such decompositions
telescopes into a series of copula multiples whose per-term coefficients
shrink, giving total-variation convergence to the target measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .errors import EmptyInput, InvalidArgument, MissingTarget, NotQuasiCopula
from .grid import (
    TAG_COPULA,
    TAG_QUASI,
    ZERO,
    CdfSurface,
    GridDistribution,
    make_grid,
    product_copula,
    refine_all,
    validate_quasi_copula,
)
from .measure import jordan, linear_combination, measure_distance, tv_norm


@dataclass(frozen=True)
class DecompositionResult:
    """Q = alpha*A + beta*B with copulas A, B and alpha + beta = 1."""

    alpha: Fraction
    beta: Fraction
    A: GridDistribution
    B: GridDistribution
    minimal: bool

    def reconstruct(self) -> GridDistribution:
        return linear_combination([(self.alpha, self.A), (self.beta, self.B)])


def _require_quasi(Q: GridDistribution):
    if Q.tag not in (TAG_QUASI, TAG_COPULA):
        if not validate_quasi_copula(Q).passed:
            raise NotQuasiCopula("input grid fails the quasi-copula axioms")


def min_two_copula_decomposition(Q: GridDistribution) -> DecompositionResult:
    """Decomposition with the least possible alpha.

    The negative part forces every valid B to carry at least the negative
    band mass in each column/row band, so |beta| >= max band ratio of the
    negative part; the northwest-corner fill realizes that bound exactly.
    """
    _require_quasi(Q)
    m, n = Q.ncols, Q.nrows
    w, h = Q.widths, Q.heights
    minus = jordan(Q).minus.mass
    col = [sum(minus[i]) for i in range(m)]
    row = [sum(minus[i][j] for i in range(m)) for j in range(n)]
    b = max(
        max(col[i] / w[i] for i in range(m)),
        max(row[j] / h[j] for j in range(n)),
    )
    if b == ZERO:
        A = Q if Q.tag == TAG_COPULA else Q.with_tag(TAG_COPULA)
        return DecompositionResult(
            alpha=Fraction(1),
            beta=ZERO,
            A=A,
            B=product_copula(Q.x_breaks, Q.y_breaks),
            minimal=True,
        )
    # residual margins to fill so every band of X sums to b * band length
    cslack = [b * w[i] - col[i] for i in range(m)]
    rslack = [b * h[j] - row[j] for j in range(n)]
    fill = [[ZERO] * n for _ in range(m)]
    i = j = 0
    while i < m and j < n:
        t = min(cslack[i], rslack[j])
        fill[i][j] = t
        cslack[i] -= t
        rslack[j] -= t
        if cslack[i] == ZERO:
            i += 1
        else:
            j += 1
    X = [[minus[i][j] + fill[i][j] for j in range(n)] for i in range(m)]
    alpha = 1 + b
    B = make_grid(Q.x_breaks, Q.y_breaks, [[v / b for v in c] for c in X], TAG_COPULA)
    A = make_grid(
        Q.x_breaks,
        Q.y_breaks,
        [[(Q.mass[i][j] + X[i][j]) / alpha for j in range(n)] for i in range(m)],
        TAG_COPULA,
    )
    return DecompositionResult(alpha=alpha, beta=-b, A=A, B=B, minimal=True)


def paper_style_decomposition_Qn(n: int) -> DecompositionResult:
    """The diamond checkerboard as (2n+1)*product - 2n*complement.

    Not minimal; kept because the complement copula is the building block of
    the ordinal-sum example series.
    """
    from .grid import diamond_checkerboard

    Q = diamond_checkerboard(n)
    P = product_copula(Q.x_breaks, Q.y_breaks)
    C = make_grid(
        Q.x_breaks,
        Q.y_breaks,
        [
            [((2 * n + 1) * P.mass[i][j] - Q.mass[i][j]) / (2 * n) for j in range(Q.nrows)]
            for i in range(Q.ncols)
        ],
        TAG_COPULA,
    )
    # sanity: the defining identity must hold cellwise
    assert all(
        Q.mass[i][j] == (2 * n + 1) * P.mass[i][j] - 2 * n * C.mass[i][j]
        for i in range(Q.ncols)
        for j in range(Q.nrows)
    )
    return DecompositionResult(
        alpha=Fraction(2 * n + 1), beta=Fraction(-2 * n), A=P, B=C, minimal=False
    )


def build_DE(prev: DecompositionResult, next: DecompositionResult):
    """Telescoping step: copulas D, E with zeta*mu_D + xi*mu_E = mu_next - mu_prev."""
    zeta = next.alpha - prev.beta
    xi = -(prev.alpha - next.beta)
    A1, B1, A2, B2 = refine_all([prev.A, prev.B, next.A, next.B])

    def combine(c1, g1, c2, g2):
        mass = [
            [
                (c1 * g1.mass[i][j] + c2 * g2.mass[i][j])
                for j in range(g1.nrows)
            ]
            for i in range(g1.ncols)
        ]
        return make_grid(g1.x_breaks, g1.y_breaks, mass, TAG_COPULA)

    D = combine(next.alpha / zeta, A2, -prev.beta / zeta, B1)
    E = combine(prev.alpha / (-xi), A1, -next.beta / (-xi), B2)
    return D, E, zeta, xi


@dataclass(frozen=True)
class SeriesTerm:
    gamma: Fraction
    copula: GridDistribution
    provenance: str


@dataclass(frozen=True)
class BlockInfo:
    """Layout of one block of the flattened series."""

    N: int
    zeta: Fraction
    xi: Fraction
    M: int
    start: int  # index of the block's first term
    count: int  # number of emitted terms
    D: GridDistribution
    E: GridDistribution


@dataclass(frozen=True)
class CopulaSeries:
    terms: tuple
    blocks: tuple
    target: GridDistribution | None = None

    def coefficient_sum(self) -> Fraction:
        return sum((t.gamma for t in self.terms), ZERO)


def flatten_series(decomps, target: GridDistribution | None = None) -> CopulaSeries:
    """Split the telescoping series into many small copula multiples.

    Block N repeats the pair (zeta_N/(N*M_N)) D_N, (xi_N/(N*M_N)) E_N exactly
    N*M_N times with M_N = floor(|xi_N|) + 1, so every coefficient in block N
    is below 1/N in absolute value.  Zero-coefficient terms are dropped.
    """
    decomps = list(decomps)
    if not decomps:
        raise EmptyInput("need at least one decomposition")
    terms = []
    blocks = []
    for idx, d in enumerate(decomps):
        N = idx + 1
        if idx == 0:
            D, E, zeta, xi = d.A, d.B, d.alpha, d.beta
        else:
            D, E, zeta, xi = build_DE(decomps[idx - 1], d)
        M = floor(abs(xi)) + 1
        reps = N * M
        start = len(terms)
        for _ in range(reps):
            terms.append(SeriesTerm(zeta / reps, D, f"block {N} D"))
            if xi != ZERO:
                terms.append(SeriesTerm(xi / reps, E, f"block {N} E"))
        blocks.append(
            BlockInfo(N=N, zeta=zeta, xi=xi, M=M, start=start,
                      count=len(terms) - start, D=D, E=E)
        )
    return CopulaSeries(terms=tuple(terms), blocks=tuple(blocks), target=target)


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple  # one dict per prefix length

    @property
    def passed(self) -> bool:
        return all(r["sup_le_tv"] and r["within_envelope"] for r in self.rows)


def _sup_cdf_distance(G1: GridDistribution, G2: GridDistribution) -> Fraction:
    """Max absolute CDF difference; attained at a common-refinement vertex."""
    R1, R2 = refine_all([G1, G2])
    s1, s2 = CdfSurface(R1), CdfSurface(R2)
    return max(
        abs(s1.vertex(i, j) - s2.vertex(i, j))
        for i in range(R1.ncols + 1)
        for j in range(R1.nrows + 1)
    )


def series_convergence(series: CopulaSeries, upto: int | None = None) -> ConvergenceReport:
    """Per-prefix distances to the target with the telescoping error envelope.

    For a prefix ending inside block m after k complete D/E pairs (and
    possibly a dangling D term, delta = 1), the distance is at most
    delta/m + ||zeta_m mu_D + xi_m mu_E|| + ||target - (sum of full blocks
    through m)||; the sup-CDF distance never exceeds the TV distance.
    """
    if series.target is None:
        raise MissingTarget("series has no target measure to compare against")
    target = series.target
    k = len(series.terms) if upto is None else min(upto, len(series.terms))
    grids = refine_all([target] + [t.copula for t in series.terms[:k]])
    Rt, Rcs = grids[0], grids[1:]
    m, n = Rt.ncols, Rt.nrows

    def as_signed(mass):
        return GridDistribution(Rt.x_breaks, Rt.y_breaks, tuple(map(tuple, mass)), "signed")

    # tail norms need the full-block partial sums over the whole series
    all_grids = refine_all([target] + [t.copula for t in series.terms])
    Rt_all, Rcs_all = all_grids[0], all_grids[1:]
    acc = [[ZERO] * Rt_all.nrows for _ in range(Rt_all.ncols)]
    tail_norm = {}
    pair_norm = {}
    for blk in series.blocks:
        for t, Rc in zip(
            series.terms[blk.start : blk.start + blk.count],
            Rcs_all[blk.start : blk.start + blk.count],
        ):
            for i in range(Rt_all.ncols):
                for j in range(Rt_all.nrows):
                    acc[i][j] += t.gamma * Rc.mass[i][j]
        partial = GridDistribution(
            Rt_all.x_breaks, Rt_all.y_breaks, tuple(map(tuple, acc)), "signed"
        )
        tail_norm[blk.N] = measure_distance(target, partial)
        pair_norm[blk.N] = tv_norm(
            linear_combination([(blk.zeta, blk.D), (blk.xi, blk.E)])
        )

    def block_of(term_index):
        for blk in series.blocks:
            if blk.start <= term_index < blk.start + blk.count:
                return blk
        return series.blocks[-1]

    rows = []
    acc = [[ZERO] * n for _ in range(m)]
    st = CdfSurface(Rt)
    for idx in range(k):
        t, Rc = series.terms[idx], Rcs[idx]
        for i in range(m):
            for j in range(n):
                acc[i][j] += t.gamma * Rc.mass[i][j]
        partial = as_signed(acc)
        tv = measure_distance(Rt, partial)
        sp = CdfSurface(partial)
        sup = max(
            abs(st.vertex(i, j) - sp.vertex(i, j))
            for i in range(m + 1)
            for j in range(n + 1)
        )
        blk = block_of(idx)
        done_in_block = idx - blk.start + 1
        has_e = blk.xi != ZERO
        if has_e:
            delta = done_in_block % 2
        else:
            delta = 0
        slack = Fraction(delta, blk.N) if delta else ZERO
        envelope = slack + pair_norm[blk.N] + tail_norm[blk.N]
        rows.append(
            {
                "prefix": idx + 1,
                "block": blk.N,
                "tv_distance": tv,
                "sup_distance": sup,
                "envelope": envelope,
                "sup_le_tv": sup <= tv,
                "within_envelope": tv <= envelope,
            }
        )
    return ConvergenceReport(rows=tuple(rows))


def synthesize(Q: GridDistribution, N_list, depth: int = 12) -> CopulaSeries:
    """Full pipeline: smooth at each threshold, decompose, telescope, flatten."""
    from .grid import validate_copula
    from .smoothing import smooth_for_N

    _require_quasi(Q)
    N_list = list(N_list)
    if not N_list:
        raise EmptyInput("N_list must be nonempty")
    if any(b <= a for a, b in zip(N_list, N_list[1:])) or N_list[0] < 1:
        raise InvalidArgument("N_list must be strictly increasing positive integers")
    if validate_copula(Q).passed:
        C = Q if Q.tag == TAG_COPULA else Q.with_tag(TAG_COPULA)
        return CopulaSeries(
            terms=(SeriesTerm(Fraction(1), C, "copula input"),),
            blocks=(
                BlockInfo(
                    N=1, zeta=Fraction(1), xi=ZERO, M=1, start=0, count=1,
                    D=C, E=product_copula(Q.x_breaks, Q.y_breaks),
                ),
            ),
            target=Q,
        )
    decomps = []
    for N in N_list:
        QN, _, _ = smooth_for_N(Q, N, depth)
        decomps.append(min_two_copula_decomposition(QN))
    return flatten_series(decomps, target=Q)
