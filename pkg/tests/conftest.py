"""Shared fixtures: one heavy sweep per R evaluation, reused across tests."""

import time

import numpy as np
import pytest

from primephase import phase, pipeline, stats
from primephase.primes import Category

TABLE_CHECKPOINTS = (10**2, 10**3, 10**4, 10**5, 10**6)
HIST_CHECKPOINTS = (10**3, 10**4, 10**5, 10**6)

TABLE_SPECS = [
    ("sqrt_diff", phase.ETA1),
    ("pi_minus_r", phase.ETA1),
    ("cos_delta", phase.ETA1),
    ("cos_delta_bar", phase.ETA1),
    ("cos_delta", phase.ETA2),
]


@pytest.fixture(scope="session")
def table_stats():
    """Tabulation-convention statistics over [2, 1e6], with wall time."""
    t0 = time.perf_counter()
    collected = stats.collect_moments(
        TABLE_CHECKPOINTS, TABLE_SPECS, list(Category), r_terms=14)
    return collected, time.perf_counter() - t0


@pytest.fixture(scope="session")
def table_hists():
    """Tabulation-convention cos(delta) histograms at the four sample sizes."""
    return stats.collect_histograms(HIST_CHECKPOINTS, phase.ETA1, r_terms=14)


@pytest.fixture(scope="session")
def envelope_extremes():
    """Envelope containment sweep over [2, 1e6] with the accurate Gram R."""
    max_abs = {"eta1": 0.0, "eta2": 0.0}
    violations = {"eta1": 0, "eta2": 0}
    for block in pipeline.iter_blocks(2, 10**6, r_terms=None):
        xf = block.x.astype(np.float64)
        sqrt_diff = np.sqrt(block.pi) - np.sqrt(block.r)
        for params in (phase.ETA1, phase.ETA2):
            cos_d = sqrt_diff / phase.eta(params, xf)
            max_abs[params.kind] = max(max_abs[params.kind],
                                       float(np.max(np.abs(cos_d))))
            violations[params.kind] += int(np.sum(np.abs(cos_d) > 1.0))
    return max_abs, violations


def trial_division_is_prime(n: int) -> bool:
    """Dumb oracle used to validate the sieve."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def brute_mobius(n: int) -> int:
    """Mobius by full factorization, independent of the production routine."""
    if n == 1:
        return 1
    factors = []
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors.append(d)
            m //= d
        d += 1
    if m > 1:
        factors.append(m)
    if len(set(factors)) != len(factors):
        return 0
    return -1 if len(factors) % 2 else 1


def finite_difference(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)
