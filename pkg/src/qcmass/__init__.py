"""Exact-arithmetic toolkit for grid-represented bivariate quasi-copulas."""

from .decomposition import (
    BlockInfo,
    ConvergenceReport,
    CopulaSeries,
    DecompositionResult,
    SeriesTerm,
    build_DE,
    flatten_series,
    min_two_copula_decomposition,
    paper_style_decomposition_Qn,
    series_convergence,
    synthesize,
)
from .errors import QcmassError
from .example_suite import (
    ExampleReport,
    example_block_product,
    example_comparison_copula,
    example_quasi_copula,
    example_series,
    nondecomposability_witness,
    paper_example,
    partition_intervals,
    tail_sum,
    term_formula,
)
from .grid import (
    CdfSurface,
    GridDistribution,
    Interval,
    ValidationReport,
    cdf_at,
    common_refinement,
    diamond_checkerboard,
    frac,
    make_grid,
    ordinal_sum,
    product_copula,
    refine_all,
    validate_copula,
    validate_quasi_copula,
    volume,
)
from .measure import (
    JordanPair,
    PiecewiseLinearCdf,
    jordan,
    linear_combination,
    marginal_cdf,
    measure_distance,
    strip_mass,
    tv_norm,
)
from .smoothing import (
    SmoothingPlan,
    extension_value,
    region_abs_mass,
    smooth_extend,
    smooth_for_N,
    smoothed_measure,
    verify_inducing,
)
from .strips import (
    AlphaReport,
    DyadicInterval,
    StripFamily,
    alpha_coefficient,
    bad_intervals,
    cover_properties,
    family_strip_measure,
    strip_cover,
)

__version__ = "0.1.0"
