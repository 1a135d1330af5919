import random
from fractions import Fraction as F

import pytest

from qcmass import (
    Interval,
    diamond_checkerboard,
    jordan,
    linear_combination,
    marginal_cdf,
    measure_distance,
    product_copula,
    strip_mass,
    tv_norm,
    volume,
)
from qcmass.errors import ZeroMeasure
from helpers import random_copula, random_quasi_copula


def test_jordan_of_positive_measure():
    P = product_copula([0, F(1, 2), 1], [0, F(1, 3), 1])
    jp = jordan(P)
    assert jp.total_minus == 0
    assert jp.plus.mass == P.mass


def test_jordan_counts_on_diamond():
    Q3 = diamond_checkerboard(3)
    jp = jordan(Q3)
    assert sum(1 for col in jp.plus.mass for v in col if v == F(1, 7)) == 16
    assert sum(1 for col in jp.minus.mass for v in col if v == F(1, 7)) == 9
    assert jp.total_plus == F(16, 7)
    assert jp.total_minus == F(9, 7)


def test_jordan_reconstructs_and_disjoint_support(rng):
    for _ in range(50):
        G = random_quasi_copula(rng, 8, bumps=3)
        jp = jordan(G)
        for i in range(G.ncols):
            for j in range(G.nrows):
                assert jp.plus.mass[i][j] - jp.minus.mass[i][j] == G.mass[i][j]
                assert jp.plus.mass[i][j] * jp.minus.mass[i][j] == 0


def test_tv_norm_values():
    assert tv_norm(product_copula([0, 1], [0, 1])) == 1
    Q3 = diamond_checkerboard(3)
    assert tv_norm(Q3) == F(25, 7)
    assert measure_distance(Q3, Q3) == 0
    jp = jordan(Q3)
    assert tv_norm(Q3) == tv_norm(jp.plus) + tv_norm(jp.minus)


def test_measure_distance_to_product_cellwise_oracle():
    Q3 = diamond_checkerboard(3)
    P = product_copula(Q3.x_breaks, Q3.y_breaks)
    expected = sum(abs(F(1, 49) - Q3.mass[i][j]) for i in range(7) for j in range(7))
    assert measure_distance(P, Q3) == expected == F(192, 49)


def test_measure_distance_triangle_inequality(rng):
    gs = [random_quasi_copula(rng, 8, bumps=3) for _ in range(9)]
    for k in range(0, 9, 3):
        a, b, c = gs[k : k + 3]
        assert measure_distance(a, c) <= measure_distance(a, b) + measure_distance(b, c)


def test_measure_distance_across_grids():
    # auto-refinement: same measure on different grids is at distance zero
    P1 = product_copula([0, F(1, 2), 1], [0, 1])
    P2 = product_copula([0, F(1, 3), F(2, 3), 1], [0, F(1, 5), 1])
    assert measure_distance(P1, P2) == 0


def test_strip_mass_examples():
    Q3 = diamond_checkerboard(3)
    mid = Interval(F(3, 7), F(4, 7))
    assert strip_mass(Q3, "x", mid, "plus") == F(4, 7)
    assert strip_mass(Q3, "x", mid, "minus") == F(3, 7)
    assert strip_mass(Q3, "x", mid, "signed") == F(1, 7)
    assert strip_mass(Q3, "x", mid, "abs") == 1


def test_strip_mass_stochasticity(rng):
    for _ in range(10):
        G = random_quasi_copula(rng, 8, bumps=2)
        for iv in (Interval(F(1, 5), F(2, 3)), Interval(0, F(3, 8))):
            assert strip_mass(G, "x", iv, "signed") == iv.length
            assert strip_mass(G, "y", iv, "signed") == iv.length
            for axis in ("x", "y"):
                assert strip_mass(G, axis, iv, "abs") == strip_mass(
                    G, axis, iv, "plus"
                ) + strip_mass(G, axis, iv, "minus")


def test_rectangle_abs_bound(rng):
    # |mu(A)| <= |mu|(A) on random rectangles
    for _ in range(5):
        G = random_quasi_copula(rng, 8, bumps=3)
        jp = jordan(G)
        absG = linear_combination([(1, jp.plus), (1, jp.minus)])
        for _ in range(20):
            xs = sorted(F(rng.randint(0, 16), 16) for _ in range(2))
            ys = sorted(F(rng.randint(0, 16), 16) for _ in range(2))
            if xs[0] == xs[1] or ys[0] == ys[1]:
                continue
            rx, ry = Interval(*xs), Interval(*ys)
            assert abs(volume(G, rx, ry)) <= volume(absG, rx, ry)


def test_marginal_cdf_product_identity():
    P = product_copula([0, F(1, 4), 1], [0, 1])
    Fx = marginal_cdf(P, "x")
    assert Fx.values[0] == 0 and Fx.values[-1] == 1
    for t in (F(1, 8), F(1, 2), F(9, 10)):
        assert Fx.at(t) == t


def test_marginal_cdf_diamond_slopes():
    Q3 = diamond_checkerboard(3)
    Fx = marginal_cdf(Q3, "x", "abs-normalized")
    col_abs = [F(c, 7) for c in (1, 3, 5, 7, 5, 3, 1)]
    total = F(25, 7)
    assert Fx.breakpoints == Q3.x_breaks
    assert Fx.slopes == tuple(7 * c / total for c in col_abs)


def test_marginal_cdf_parts_and_zero_error():
    Q3 = diamond_checkerboard(3)
    Fp = marginal_cdf(Q3, "x", "plus")
    Fm = marginal_cdf(Q3, "x", "minus")
    assert Fp.values[-1] == F(16, 7)
    assert Fm.values[-1] == F(9, 7)
    P = product_copula([0, 1], [0, 1])
    with pytest.raises(ZeroMeasure):
        marginal_cdf(jordan(P).minus, "x", "abs-normalized")


def test_marginal_cdf_piecewise_linear_nonneg_slopes(rng):
    for _ in range(10):
        G = random_quasi_copula(rng, 8, bumps=3)
        for axis in ("x", "y"):
            Fc = marginal_cdf(G, axis)
            assert Fc.values[0] == 0 and Fc.values[-1] == 1
            assert all(s >= 0 for s in Fc.slopes)


def test_linear_combination_cancels():
    C = random_copula(random.Random(2), 8)
    z = linear_combination([(1, C), (-1, C)])
    assert tv_norm(z) == 0
