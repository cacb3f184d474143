"""primephase: prime-counting approximations and envelope/phase statistics."""

from .ingest import PiTable, PiTableError, extended_samples, load_pi_table
from .phase import (
    ETA1,
    ETA2,
    EnvelopeParams,
    PhaseSample,
    X_MIN_ASYMPTOTIC,
    cos_delta,
    cos_delta_bar,
    cos_delta_derivative,
    envelope_by_name,
    eta,
    first_crossing_estimate,
    li_pi_bounds_asymptotic,
    li_pi_bounds_exact,
    make_sample,
)
from .primes import Category, SieveSegment, classify, pi_at, pi_stream, sieve_range
from .specfun import (
    DEFAULT_R_TERMS,
    Constants,
    SeriesConfig,
    constants,
    li,
    li_pv_oracle,
    mobius,
    riemann_r,
    riemann_r_mobius,
    riemann_r_partial,
    riemann_r_prime,
    soldner,
    zeta,
    zeta_functional_check,
)
from .stats import (
    GaussianOverlay,
    Histogram,
    MomentAccumulator,
    accumulate,
    density,
    gaussian_overlay,
    histogram,
    merge,
    table_row,
)

__version__ = "0.1.0"

__all__ = [
    "Category",
    "Constants",
    "DEFAULT_R_TERMS",
    "ETA1",
    "ETA2",
    "EnvelopeParams",
    "GaussianOverlay",
    "Histogram",
    "MomentAccumulator",
    "PhaseSample",
    "PiTable",
    "PiTableError",
    "SeriesConfig",
    "SieveSegment",
    "X_MIN_ASYMPTOTIC",
    "accumulate",
    "classify",
    "constants",
    "cos_delta",
    "cos_delta_bar",
    "cos_delta_derivative",
    "density",
    "envelope_by_name",
    "eta",
    "extended_samples",
    "first_crossing_estimate",
    "gaussian_overlay",
    "histogram",
    "li",
    "li_pi_bounds_asymptotic",
    "li_pi_bounds_exact",
    "li_pv_oracle",
    "load_pi_table",
    "make_sample",
    "merge",
    "mobius",
    "pi_at",
    "pi_stream",
    "riemann_r",
    "riemann_r_mobius",
    "riemann_r_partial",
    "riemann_r_prime",
    "sieve_range",
    "soldner",
    "table_row",
    "zeta",
    "zeta_functional_check",
]
