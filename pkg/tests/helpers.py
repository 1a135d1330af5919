"""Shared fixture generators and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from qcmass import (
    GridDistribution,
    Interval,
    make_grid,
    product_copula,
    validate_quasi_copula,
)
from qcmass.grid import TAG_COPULA, TAG_QUASI, ZERO

# zero-sum bump profiles; outer products of two of these keep all margins exact
_PATTERNS = [
    (1, -1),
    (-1, 1),
    (1, -2, 1),
    (-1, 2, -1),
    (1, 0, -1),
    (1, -1, -1, 1),
    (2, -1, -1),
]


def dyadic_breaks(m: int):
    return tuple(Fraction(k, m) for k in range(m + 1))


def random_quasi_copula(rng: random.Random, m: int = 8, bumps: int = 6,
                        want_negative: bool = True) -> GridDistribution:
    """Uniform grid plus random zero-margin checkerboard bumps.

    Each bump adds eps * u (x) v with zero-sum profiles u, v, which preserves
    total mass and both marginals; eps is backed off until the quasi-copula
    axioms hold exactly.
    """
    breaks = dyadic_breaks(m)
    cell = Fraction(1, m * m)
    for _ in range(200):
        mass = [[cell] * m for _ in range(m)]
        placed = 0
        for _ in range(bumps * 4):
            if placed >= bumps:
                break
            u = rng.choice(_PATTERNS)
            v = rng.choice(_PATTERNS)
            if len(u) > m or len(v) > m:
                continue
            i0 = rng.randrange(m - len(u) + 1)
            j0 = rng.randrange(m - len(v) + 1)
            eps = cell * rng.choice([4, 3, 2])
            while eps >= cell / 8:
                cand = [col[:] for col in mass]
                for s, us in enumerate(u):
                    for t, vs in enumerate(v):
                        cand[i0 + s][j0 + t] += eps * us * vs
                G = GridDistribution(breaks, breaks, tuple(map(tuple, cand)), "signed")
                if validate_quasi_copula(G).passed:
                    mass = cand
                    placed += 1
                    break
                eps /= 2
        G = make_grid(breaks, breaks, mass, TAG_QUASI)
        has_negative = any(v < ZERO for col in G.mass for v in col)
        if has_negative or not want_negative:
            return G
    raise AssertionError("generator failed to produce a fixture")


def random_copula(rng: random.Random, m: int = 8) -> GridDistribution:
    """Random transportation fill of the uniform margins (exact copula)."""
    breaks = dyadic_breaks(m)
    w = [Fraction(1, m)] * m
    h = [Fraction(1, m)] * m
    cols = list(range(m))
    rows = list(range(m))
    rng.shuffle(cols)
    rng.shuffle(rows)
    mass = [[ZERO] * m for _ in range(m)]
    ci, rj = 0, 0
    crem = w[:]
    rrem = h[:]
    while ci < m and rj < m:
        i, j = cols[ci], rows[rj]
        t = min(crem[i], rrem[j])
        mass[i][j] += t
        crem[i] -= t
        rrem[j] -= t
        if crem[i] == ZERO:
            ci += 1
        if rrem[j] == ZERO:
            rj += 1
    return make_grid(breaks, breaks, mass, TAG_COPULA)


def random_plan_intervals(rng: random.Random, count: int = 2):
    """Sorted disjoint open dyadic intervals inside [0,1]."""
    chosen = []
    for _ in range(count * 3):
        if len(chosen) >= count:
            break
        level = rng.randint(1, 3)
        idx = rng.randint(1, 2**level)
        lo = Fraction(idx - 1, 2**level)
        hi = Fraction(idx, 2**level)
        if all(hi <= c.lo or c.hi <= lo for c in chosen):
            chosen.append(Interval(lo, hi))
    return tuple(sorted(chosen, key=lambda iv: iv.lo))


def brute_force_cover(Q, N, depth, axis):
    """Direct re-run of the level induction using only public strip queries."""
    from qcmass import bad_intervals

    per_level = {}
    union = []

    def covered(S):
        return any(u.lo <= S.interval.lo and S.interval.hi <= u.hi for u in union)

    for n in range(depth + 1):
        adopted = []
        for S in bad_intervals(Q, N, n + 1, axis):
            if not covered(S):
                p = S.parent()
                if p not in adopted:
                    adopted.append(p)
        if adopted:
            per_level[n] = tuple(sorted(adopted))
            union.extend(m.interval for m in adopted)
    return per_level, tuple(sorted(union, key=lambda iv: iv.lo))


def lp_min_alpha(Q) -> float:
    """Independent LP: minimize b subject to X >= negative part with all
    band sums equal to b times the band length.  Returns 1 + b*."""
    import numpy as np
    from scipy.optimize import linprog

    from qcmass import jordan

    m, n = Q.ncols, Q.nrows
    w = [float(x) for x in Q.widths]
    h = [float(y) for y in Q.heights]
    minus = jordan(Q).minus.mass
    nv = m * n + 1  # X cells then b
    A_eq = []
    b_eq = []
    for i in range(m):
        row = [0.0] * nv
        for j in range(n):
            row[i * n + j] = 1.0
        row[-1] = -w[i]
        A_eq.append(row)
        b_eq.append(0.0)
    for j in range(n):
        row = [0.0] * nv
        for i in range(m):
            row[i * n + j] = 1.0
        row[-1] = -h[j]
        A_eq.append(row)
        b_eq.append(0.0)
    bounds = [(float(minus[i][j]), None) for i in range(m) for j in range(n)]
    bounds.append((0.0, None))
    c = [0.0] * (nv - 1) + [1.0]
    res = linprog(c, A_eq=np.array(A_eq), b_eq=np.array(b_eq), bounds=bounds,
                  method="highs")
    assert res.status == 0, res.message
    return 1.0 + res.x[-1]
