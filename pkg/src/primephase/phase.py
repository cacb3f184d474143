"""Envelopes around sqrt(pi)-sqrt(R), the phase cos(delta), and derived bounds.

The two stock envelopes are

    eta1(x) = 0.2595 / ln ln(x + 15.9)
    eta2(x) = 0.315647 / [ln(x + 4.07206)]^0.430202

both positive and strictly decreasing.  cos(delta) = (sqrt(pi)-sqrt(R))/eta
is deliberately not clamped to [-1, 1]: staying inside is a claim to be
tested, and out-of-range values are counted downstream.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .primes import Category
from .specfun import DEFAULT_CONFIG, DEFAULT_R_TERMS, SeriesConfig

# Below this the large-x approximations behind the asymptotic bounds are not
# trusted; the exact bounds cover everything smaller.
X_MIN_ASYMPTOTIC = 1.0e8

CROSSING_BRACKET = (4.0, 2000.0)


@dataclass(frozen=True)
class EnvelopeParams:
    """Constants of one envelope form.

    kind "eta1" uses a / ln ln(x + b) (p ignored); kind "eta2" uses
    a / [ln(x + b)]^p.
    """

    kind: str
    a: float
    b: float
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("eta1", "eta2"):
            raise ValueError(f"unknown envelope kind {self.kind!r}")


ETA1 = EnvelopeParams(kind="eta1", a=0.2595, b=15.9)
ETA2 = EnvelopeParams(kind="eta2", a=0.315647, b=4.07206, p=0.430202)


def envelope_by_name(name: str) -> EnvelopeParams:
    if name == "eta1":
        return ETA1
    if name == "eta2":
        return ETA2
    raise ValueError(f"unknown envelope {name!r} (expected eta1 or eta2)")


def eta(params: EnvelopeParams, x):
    """Envelope value at x >= 2.  Scalar or ndarray."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 2.0):
        raise ValueError("eta requires x >= 2")
    if params.kind == "eta1":
        out = params.a / np.log(np.log(arr + params.b))
    else:
        out = params.a / np.log(arr + params.b) ** params.p
    return float(out) if arr.ndim == 0 else out


def eta_of_log(params: EnvelopeParams, big_l: float) -> float:
    """Envelope at x = e^L without forming x, usable far beyond 1e308."""
    shift = params.b * math.exp(-big_l) if big_l < 700.0 else 0.0
    log_x_plus_b = big_l + math.log1p(shift)
    if params.kind == "eta1":
        return params.a / math.log(log_x_plus_b)
    return params.a / log_x_plus_b ** params.p


def cos_delta(pi_x, r_x, eta_val):
    """(sqrt(pi) - sqrt(R)) / eta.  Not clamped."""
    if np.any(np.asarray(eta_val) <= 0.0):
        raise ValueError("eta must be positive")
    return (np.sqrt(pi_x) - np.sqrt(r_x)) / eta_val


def cos_delta_bar(pi_x, r_x, eta_val):
    """(pi - R - eta^2) / (2 sqrt(R) eta), the amplitude-phase variant."""
    if np.any(np.asarray(eta_val) <= 0.0):
        raise ValueError("eta must be positive")
    return (pi_x - r_x - eta_val * eta_val) / (2.0 * np.sqrt(r_x) * eta_val)


def li_pi_bounds_exact(x: float, params: EnvelopeParams,
                       config: SeriesConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Exact envelope bounds on li - pi:

        li - (sqrt(R)+eta)^2  <=  li - pi  <=  li - (sqrt(R)-eta)^2
    """
    if x < 2.0:
        raise ValueError("bounds require x >= 2")
    li_x = specfun.li(float(x), config)
    sqrt_r = math.sqrt(specfun.riemann_r(float(x), config))
    e = eta(params, float(x))
    return li_x - (sqrt_r + e) ** 2, li_x - (sqrt_r - e) ** 2


def li_pi_bounds_asymptotic(x: float, params: EnvelopeParams) -> tuple[float, float]:
    """Large-x bounds sqrt(x)/ln x -+ 2 eta sqrt(x/ln x) on li - pi.

    Only valid for x >= X_MIN_ASYMPTOTIC; the exact bounds cover smaller x.
    """
    if x < X_MIN_ASYMPTOTIC:
        raise ValueError(
            f"asymptotic bounds are valid for x >= {X_MIN_ASYMPTOTIC:.0e}, got {x}")
    u = math.log(x)
    center = math.sqrt(x) / u
    half = 2.0 * eta(params, float(x)) * math.sqrt(x / u)
    return center - half, center + half


def cos_delta_derivative(x: float, pi_x: int, params: EnvelopeParams,
                         config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """d cos(delta)/dx with pi frozen (between primes).

    For eta = a/lnln(x+b):
        (1/a) [ (sqrt(pi)-sqrt(R)) / ((x+b) ln(x+b))  -  lnln(x+b) R' / (2 sqrt(R)) ]
    and for eta = a/[ln(x+b)]^p:
        ([ln(x+b)]^p / a) [ p (sqrt(pi)-sqrt(R)) / ((x+b) ln(x+b)) - R' / (2 sqrt(R)) ]

    Dominated by the negative R' term, so it is negative between primes.
    """
    if x <= 2.0:
        raise ValueError("derivative requires x > 2")
    sqrt_r = math.sqrt(specfun.riemann_r(float(x), config))
    diff = math.sqrt(pi_x) - sqrt_r
    r_prime = specfun.riemann_r_prime(float(x), config)
    log_xb = math.log(x + params.b)
    if params.kind == "eta1":
        return (diff / ((x + params.b) * log_xb)
                - math.log(log_xb) * r_prime / (2.0 * sqrt_r)) / params.a
    return (log_xb ** params.p / params.a) * (
        params.p * diff / ((x + params.b) * log_xb) - r_prime / (2.0 * sqrt_r))


def first_crossing_estimate(params) -> float:
    """L = ln x where the envelope meets 1/(2 sqrt(ln x)).

    Beyond this point the envelope no longer forces li > pi, so it estimates
    where the first sign change of li - pi could occur.  Works in L because
    x itself overflows doubles near the eta2 root (x ~ 1e316).  `params` is
    an EnvelopeParams or a callable L -> eta(e^L).  Raises ValueError when
    the bracket holds no root or the margin is degenerate (eta identically
    at the threshold).
    """
    if callable(params):
        eta_log = params
    else:
        eta_log = lambda big_l: eta_of_log(params, big_l)  # noqa: E731

    def margin(big_l: float) -> float:
        return eta_log(big_l) - 0.5 / math.sqrt(big_l)

    lo, hi = CROSSING_BRACKET
    m_lo, m_hi = margin(lo), margin(hi)
    if abs(m_lo) < 1e-12 and abs(m_hi) < 1e-12:
        raise ValueError("degenerate bracket: envelope sits on the crossing threshold")
    if m_lo * m_hi > 0.0:
        raise ValueError(
            f"no crossing in ln-x bracket [{lo}, {hi}] "
            f"(margins {m_lo:.3e}, {m_hi:.3e})")
    return specfun.bracketed_root(margin, lo, hi, xtol=1e-10)


@dataclass(frozen=True)
class PhaseSample:
    """Everything the analysis derives for one integer x."""

    x: int
    pi_x: int
    li_x: float
    r_x: float
    eta: float
    cos_delta: float
    cos_delta_bar: float
    category: Category


def make_sample(x: int, pi_x: int, is_prime: bool, params: EnvelopeParams,
                r_terms: int | None = DEFAULT_R_TERMS,
                config: SeriesConfig = DEFAULT_CONFIG) -> PhaseSample:
    """Build a PhaseSample from (x, pi(x), primality).

    r_terms selects the R evaluation: an integer gives the fixed-depth
    partial Mobius sum (table convention), None the accurate Gram series.
    """
    from .primes import classify  # local import avoids a cycle at module load

    xf = float(x)
    if xf > 1e300:
        raise ValueError(f"x={x} exceeds the double-precision range of li/R")
    li_x = specfun.li(xf, config)
    if r_terms is None:
        r_x = specfun.riemann_r(xf, config)
    else:
        r_x = specfun.riemann_r_partial(xf, r_terms, config)
    eta_val = eta(params, xf)
    pi_f = float(pi_x)  # x may exceed int64; do the flop math in doubles
    return PhaseSample(
        x=x,
        pi_x=pi_x,
        li_x=li_x,
        r_x=r_x,
        eta=eta_val,
        cos_delta=float(cos_delta(pi_f, r_x, eta_val)),
        cos_delta_bar=float(cos_delta_bar(pi_f, r_x, eta_val)),
        category=classify(x, is_prime),
    )
