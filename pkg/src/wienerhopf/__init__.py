"""Positive definite Wiener-Hopf factorization on the real line.

Sampled functions on uniform grids are split additively (half-line spectral
projection or half-band cardinal series) and multiplicatively (continuous
logarithm, split, exponentiate). The Lévy layer applies this to killed
characteristic functions to obtain the laws of running extrema, with a
Monte-Carlo simulator as an independent check.
"""

from . import kernels
from .additive import (
    AdditiveSplit,
    Side,
    cardinal_error_bound,
    cardinal_minus,
    cardinal_plus,
    extend_plus,
    halfline_energy,
    split_additive,
    split_additive_cardinal,
    split_additive_spectral,
)
from .errors import (
    GridTooCoarseError,
    MassError,
    NotPositiveDefiniteError,
    NumericalFailure,
    ResidualError,
    WienerHopfError,
    ZeroCrossingError,
)
from .extrema import ExtremaDistributions, WhFactors, analytic_bm_factors, build_g, extrema_distributions, wh_factors
from .grid import (
    Grid,
    SampledFunction,
    SpectralFunction,
    cardinal_interpolate,
    dawson_reference,
    dawson_via_cardinal,
    forward_ft,
    inverse_ft,
    roundtrip_error,
    truncation_error_bound,
)
from .levy import (
    CompoundPoisson,
    DoubleExponentialJumps,
    GaussianJumps,
    KillingTime,
    LevyModel,
    beta_power_check,
    char_fn_exp_time,
    char_fn_geom_time,
    l1_l2_bounds_check,
    psi_eval,
    winding_index,
)
from .montecarlo import EmpiricalDistribution, SimConfig, ks_distance, simulate_extrema, simulate_paths
from .multiplicative import (
    FactorizationResult,
    LogBranch,
    continuous_log,
    error_propagation_bound,
    factorize_multiplicative,
    perturb_epsilon,
)
from .posdef import PdReport, Verdict, bochner_matrix, min_bochner_eigenvalue, pd_report

__version__ = "0.1.0"
