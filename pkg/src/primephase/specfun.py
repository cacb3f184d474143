"""Special functions: li(x), zeta(s), the Mobius function, and Riemann's R(x).

R(x) is evaluated three ways:

* ``riemann_r``        -- the Gram series, all-positive terms, the accurate
                          production evaluation;
* ``riemann_r_mobius`` -- the Mobius/li form with its slowly-convergent tail
                          folded in analytically, kept as a cross-check;
* ``riemann_r_partial``-- a fixed-depth partial sum of the Mobius/li series
                          with no tail compensation.  Depth 14 is the
                          evaluation convention behind the envelope constants
                          and the reference tables this package regenerates.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

EULER_GAMMA = 0.5772156649015329

# Depth at which the partial Mobius sum reproduces the tabulated analysis:
# sqrt(pi(2)) - sqrt(R(2)) = -0.244906 there, the value the eta1 amplitude
# was calibrated against.  The accurate Gram-series R(2) gives -0.241374.
DEFAULT_R_TERMS = 14


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation control shared by every series evaluation."""

    rel_tol: float = 1e-15
    max_terms: int = 10000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-6:
            raise ValueError(f"rel_tol must be in (0, 1e-6), got {self.rel_tol}")
        if self.max_terms < 100:
            raise ValueError(f"max_terms must be >= 100, got {self.max_terms}")


DEFAULT_CONFIG = SeriesConfig()


def mobius(n: int) -> int:
    """Mobius mu(n): 1 at n=1, 0 if a squared prime divides n, else (-1)^k."""
    if n < 1:
        raise ValueError(f"mobius requires n >= 1, got {n}")
    if n == 1:
        return 1
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1 if d == 2 else 2
    if n > 1:
        result = -result
    return result


def _li_from_log(u, config: SeriesConfig):
    """li(e^u) for u > 0 via gamma + ln(u) + sum u^k/(k*k!).

    All terms are positive, so there is no cancellation; roughly 3*u terms
    are needed.  The k-th power is carried as u^k/k! to avoid overflow for
    u up to ~700 (x up to ~1e300).
    """
    u = np.asarray(u, dtype=np.float64)
    shape = u.shape
    u = np.atleast_1d(u)
    total = np.zeros_like(u)
    power_over_fact = np.ones_like(u)
    # per-lane freeze: each element stops at its own term count, so a value
    # is bit-identical whether evaluated alone or inside any batch
    active = np.ones(u.shape, dtype=bool)
    for k in range(1, config.max_terms + 1):
        power_over_fact = power_over_fact * u / k
        term = power_over_fact / k
        total = np.where(active, total + term, total)
        active &= term > config.rel_tol * total
        if not active.any():
            break
    else:
        raise ArithmeticError("li series did not converge within max_terms")
    return (EULER_GAMMA + np.log(u) + total).reshape(shape)


def li(x, config: SeriesConfig = DEFAULT_CONFIG):
    """Logarithmic integral li(x) for x > 1 (principal-value branch).

    Accepts a scalar or an ndarray.  Values on (0, 1) are out of scope and
    x <= 1 raises ValueError.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr <= 1.0):
        raise ValueError("li(x) is implemented for x > 1 only")
    out = _li_from_log(np.log(arr), config)
    return float(out) if arr.ndim == 0 else out


def _pv_window(u: float) -> float:
    """1/ln(1+u) + 1/ln(1-u): the symmetric pairing across the t=1 singularity."""
    if abs(u) < 1e-4:
        return 1.0 + u * u / 12.0
    return 1.0 / math.log1p(u) + 1.0 / math.log1p(-u)


def li_pv_oracle(x: float, rel_budget: float = 5e-9) -> float:
    """li(x) as the principal-value integral of dt/ln t, by adaptive quadrature.

    The singularity at t=1 is handled with a symmetric window: pairing t=1+u
    with t=1-u makes the integrand finite, which is exactly the symmetric-eps
    limit.  Independent of the series route in `li`; raises ArithmeticError
    when the quadrature error estimate exceeds `rel_budget`.
    """
    if x <= 1.0:
        raise ValueError("li_pv_oracle requires x > 1")
    eps = min(0.5, (x - 1.0) / 2.0)

    total, err = quad(lambda t: 1.0 / math.log(t), 0.0, 1.0 - eps,
                      epsabs=1e-13, epsrel=1e-11, limit=300)
    part, e = quad(_pv_window, 0.0, eps, epsabs=1e-13, epsrel=1e-11, limit=300)
    total += part
    err += e

    # remaining smooth piece as integral of e^v / v, chunked per ~2 e-folds
    v = math.log1p(eps)
    v_end = math.log(x)
    while v < v_end:
        v_next = min(v + 2.0, v_end)
        part, e = quad(lambda w: math.exp(w) / w, v, v_next,
                       epsabs=1e-13, epsrel=1e-11, limit=300)
        total += part
        err += e
        v = v_next

    if err > rel_budget * max(1.0, abs(total)):
        raise ArithmeticError(
            f"PV quadrature for li({x}) did not reach tolerance (err={err:.2e})")
    return total


def zeta(s: float, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Riemann zeta at real s != 1 via the globally convergent double sum

        zeta(s) = 1/(1-2^(1-s)) * sum_n 2^-(n+1) * sum_k (-1)^k C(n,k) (k+1)^-s

    Valid for negative s as well (analytic continuation); accuracy degrades
    for s far below the tested range (s >= -10 or so) because the inner
    alternating sums cancel.
    """
    s = float(s)
    if s == 1.0:
        raise ValueError("zeta has a pole at s = 1")
    total = 0.0
    quiet = 0
    for n in range(config.max_terms):
        inner = 0.0
        binom = 1.0
        sign = 1.0
        for k in range(n + 1):
            inner += sign * binom * (k + 1.0) ** (-s)
            binom = binom * (n - k) / (k + 1.0)
            sign = -sign
        term = inner * 2.0 ** (-(n + 1.0))
        total += term
        if abs(term) <= config.rel_tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    return total / (1.0 - 2.0 ** (1.0 - s))


@lru_cache(maxsize=None)
def _zeta_int(k: int) -> float:
    """Cached zeta(k) at integer k >= 2 for the Gram series."""
    return zeta(float(k))


def zeta_functional_check(s: float) -> float:
    """Relative residual of zeta(1-s) = 2 (2 pi)^-s cos(s pi/2) Gamma(s) zeta(s).

    Requires s > 1 so both sides are directly evaluable; Gamma comes from the
    standard library.  Used as a consistency test; expected below 1e-8.
    """
    if s <= 1.0:
        raise ValueError("functional-equation check requires s > 1")
    lhs = zeta(1.0 - s)
    rhs = (2.0 * (2.0 * math.pi) ** (-s) * math.cos(math.pi * s / 2.0)
           * math.gamma(s) * zeta(s))
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def riemann_r(x, config: SeriesConfig = DEFAULT_CONFIG):
    """R(x) by the Gram series 1 + sum_k (ln x)^k / (k * k! * zeta(k+1)).

    All terms positive; double precision holds to ~1e-15 relative for
    x <= 1e300.  Scalar or ndarray, x >= 2.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 2.0):
        raise ValueError("riemann_r requires x >= 2")
    u = np.atleast_1d(np.log(arr))
    total = np.ones_like(u)
    power_over_fact = np.ones_like(u)
    active = np.ones(u.shape, dtype=bool)  # per-lane freeze, as in _li_from_log
    for k in range(1, config.max_terms + 1):
        power_over_fact = power_over_fact * u / k
        term = power_over_fact / (k * _zeta_int(k + 1))
        total = np.where(active, total + term, total)
        active &= term > config.rel_tol * total
        if not active.any():
            break
    else:
        raise ArithmeticError("Gram series did not converge within max_terms")
    total = total.reshape(arr.shape)
    return float(total) if arr.ndim == 0 else total


def riemann_r_partial(x, terms: int = DEFAULT_R_TERMS,
                      config: SeriesConfig = DEFAULT_CONFIG):
    """Partial sum of the Mobius form: sum_{n<=terms} mu(n)/n li(x^(1/n)).

    No tail compensation, so this carries the truncation deficit of whatever
    depth is chosen; see DEFAULT_R_TERMS for why 14 is the default.
    Scalar or ndarray, x >= 2.
    """
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 2.0):
        raise ValueError("riemann_r_partial requires x >= 2")
    u = np.log(arr)
    total = np.zeros_like(u)
    for n in range(1, terms + 1):
        mu = mobius(n)
        if mu:
            total = total + (mu / n) * _li_from_log(u / n, config)
    return float(total) if arr.ndim == 0 else total


def _mobius_head(x: float) -> int:
    """Truncation depth for the Mobius form: largest n with x^(1/n) >= 2."""
    return max(1, int(math.log2(x)))


def riemann_r_mobius(x: float, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """R(x) by the Mobius/li route, agreeing with riemann_r to ~1e-15 relative.

    Terms with x^(1/n) >= 2 are summed through li directly; the infinite
    remainder (x^(1/n) below 2, where the raw series converges too slowly to
    be usable) is aggregated analytically through the identity
    li(t) = gamma + ln ln t + sum (ln t)^k/(k k!) and the exact constants
    sum_n mu(n)/n = 0, sum_n mu(n) ln n / n = -1, sum_n mu(n)/n^j = 1/zeta(j).
    """
    x = float(x)
    if x < 2.0:
        raise ValueError("riemann_r_mobius requires x >= 2")
    u = math.log(x)
    head_n = _mobius_head(x)

    head = 0.0
    m1 = 0.0          # sum mu(n)/n over the head
    m2 = 0.0          # sum mu(n) ln(n)/n over the head
    mu_over_n = []    # mu(n)/n, reused for the power sums
    for n in range(1, head_n + 1):
        mu = mobius(n)
        mu_over_n.append(mu / n)
        if mu:
            head += (mu / n) * float(_li_from_log(np.float64(u / n), config))
            m1 += mu / n
            m2 += mu * math.log(n) / n
    tail = 1.0 + m2 - (EULER_GAMMA + math.log(u)) * m1

    # sum_k (ln x)^k/(k k!) * sum_{n>head} mu(n)/n^(k+1)
    powers = list(mu_over_n)  # mu(n)/n^(k+1), updated in place
    power_over_fact = 1.0
    for k in range(1, config.max_terms + 1):
        power_over_fact = power_over_fact * u / k
        for i in range(head_n):
            powers[i] /= (i + 1)
        mk = sum(powers)
        tail += power_over_fact / k * (1.0 / _zeta_int(k + 1) - mk)
        if power_over_fact / k <= config.rel_tol * max(abs(head + tail), 1.0):
            break
    return head + tail


def riemann_r_prime(x: float, config: SeriesConfig = DEFAULT_CONFIG) -> float:
    """dR/dx = (1/ln x) sum_n mu(n) / (n x^((n-1)/n)).

    Same head/tail split as riemann_r_mobius (the raw tail here decays only
    harmonically); matches a central finite difference of riemann_r to well
    below 1e-6 relative.
    """
    x = float(x)
    if x <= 2.0:
        raise ValueError("riemann_r_prime requires x > 2")
    u = math.log(x)
    head_n = _mobius_head(x)

    head = 0.0
    mu_over_n = []
    for n in range(1, head_n + 1):
        mu = mobius(n)
        mu_over_n.append(mu / n)
        if mu:
            head += (mu / n) * math.exp(u / n)   # mu(n) x^(1/n) / n

    # tail: sum_j u^j/j! * sum_{n>head} mu(n)/n^(j+1), with 1/zeta(1) == 0
    m1 = sum(mu_over_n)
    tail = -m1
    powers = list(mu_over_n)
    power_over_fact = 1.0
    for j in range(1, config.max_terms + 1):
        power_over_fact = power_over_fact * u / j
        for i in range(head_n):
            powers[i] /= (i + 1)
        mj = sum(powers)
        tail += power_over_fact * (1.0 / _zeta_int(j + 1) - mj)
        if power_over_fact <= config.rel_tol * max(abs(head + tail), 1.0):
            break
    return (head + tail) / (x * u)


def bracketed_root(f, lo: float, hi: float, *, xtol: float = 1e-12,
                   max_iter: int = 200) -> float:
    """Root of f on [lo, hi] by the Illinois variant of regula falsi.

    Requires a sign change; raises ValueError otherwise.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"root not bracketed on [{lo}, {hi}]")
    a, b, fa, fb = lo, hi, flo, fhi
    side = 0
    for _ in range(max_iter):
        mid = b - fb * (b - a) / (fb - fa)
        if not min(a, b) < mid < max(a, b):
            mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0 or abs(b - a) <= xtol:
            return mid
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
            if side == -1:
                fb *= 0.5
            side = -1
        else:
            b, fb = mid, fm
            if side == 1:
                fa *= 0.5
            side = 1
    return 0.5 * (a + b)


@lru_cache(maxsize=1)
def soldner() -> float:
    """The positive root of li on (1, 2), approximately 1.4513692348."""
    return bracketed_root(lambda t: li(t), 1.01, 1.999, xtol=1e-14)


@dataclass(frozen=True)
class Constants:
    """Series constants; soldner_mu is recomputed rather than hardcoded."""

    euler_gamma: float = EULER_GAMMA
    soldner_mu: float = 1.4513692348833811


def constants() -> Constants:
    return Constants(soldner_mu=soldner())
