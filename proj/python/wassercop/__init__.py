"""Wasserstein distances between laws on R and on R^d with a shared copula."""

from ._wassercop import (
    CapExceeded,
    Copula,
    Distribution,
    DistanceReport,
    MomentError,
    NumericalError,
    ParseError,
    comonotone_coupling,
    empirical_from_samples,
    eval_M,
    eval_W,
    frechet_hoeffding_check,
    moment,
    run_suite,
    solve_assignment,
    solve_ot,
    suite_names,
    w1_cdf,
    wp_lower_bound_nd,
    wp_quantile,
    wp_shared_nd,
    wp_via_M,
    wpq_bounds,
)

__version__ = "0.1.0"
