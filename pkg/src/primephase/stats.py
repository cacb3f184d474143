"""Streaming, mergeable statistics over phase samples; histogram; Gaussian overlay.

Standard deviations use the population convention sigma = sqrt(m2/count),
which is the only divisor under which the tabulated values reproduce.
Accumulators and histograms are monoids: merging partial results gives the
serial answer to ~1e-12 regardless of the split.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import phase, pipeline
from .phase import EnvelopeParams
from .primes import Category, category_mask
from .specfun import DEFAULT_CONFIG, DEFAULT_R_TERMS, SeriesConfig

# cos(delta) bin edges: two width-0.05 edge bins, nineteen width-0.1 interior
COS_DELTA_EDGES = np.array(
    [-1.0, -0.95] + [round(-0.95 + 0.1 * i, 2) for i in range(1, 20)] + [1.0])
N_BINS = len(COS_DELTA_EDGES) - 1

# Fixed overlay used on every distribution plot; not fitted per sample.
OVERLAY_MEAN = 0.014
OVERLAY_SIGMA = 0.28

QUANTITIES = ("sqrt_diff", "pi_minus_r", "cos_delta", "cos_delta_bar")


@dataclass(frozen=True)
class MomentAccumulator:
    """Single-pass mean/variance/mean-absolute state."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    mean_abs: float = 0.0

    @property
    def sigma(self) -> float:
        if self.count == 0:
            return 0.0
        return math.sqrt(self.m2 / self.count)


def accumulate(acc: MomentAccumulator, value: float) -> MomentAccumulator:
    """Fold one value with the numerically stable one-pass recurrence."""
    count = acc.count + 1
    delta = value - acc.mean
    mean = acc.mean + delta / count
    m2 = acc.m2 + delta * (value - mean)
    mean_abs = acc.mean_abs + (abs(value) - acc.mean_abs) / count
    return MomentAccumulator(count, mean, m2, mean_abs)


def merge(a: MomentAccumulator, b: MomentAccumulator) -> MomentAccumulator:
    """Combine two accumulators; order-independent to ~1e-12."""
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    count = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * b.count / count
    m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / count
    mean_abs = (a.mean_abs * a.count + b.mean_abs * b.count) / count
    return MomentAccumulator(count, mean, m2, mean_abs)


def from_values(values: np.ndarray) -> MomentAccumulator:
    """Accumulator over a whole array at once (used per block, then merged)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return MomentAccumulator()
    mean = float(values.mean())
    m2 = float(np.sum((values - mean) ** 2))
    return MomentAccumulator(values.size, mean, m2, float(np.abs(values).mean()))


@dataclass(frozen=True)
class Histogram:
    """Counts over the fixed cos(delta) bins plus under/overflow.

    Bins are [lo, hi) except the last, which closes at 1; anything outside
    [-1, 1] lands in underflow/overflow so that counts always conserve the
    sample size.
    """

    counts: np.ndarray = field(default_factory=lambda: np.zeros(N_BINS, dtype=np.int64))
    underflow: int = 0
    overflow: int = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.underflow + self.overflow


def histogram(values: Iterable[float]) -> Histogram:
    """Bin a sequence of cos(delta) values."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=np.float64)
    if arr.size == 0:
        return Histogram()
    counts, _ = np.histogram(arr, bins=COS_DELTA_EDGES)
    return Histogram(counts=counts.astype(np.int64),
                     underflow=int(np.sum(arr < COS_DELTA_EDGES[0])),
                     overflow=int(np.sum(arr > COS_DELTA_EDGES[-1])))


def merge_histograms(a: Histogram, b: Histogram) -> Histogram:
    return Histogram(counts=a.counts + b.counts,
                     underflow=a.underflow + b.underflow,
                     overflow=a.overflow + b.overflow)


def density(hist: Histogram) -> list[tuple[float, float]]:
    """(bin center, relative frequency / bin width) for each bin.

    Summing density * width over the bins gives 1 minus the out-of-range
    fraction.  Raises on an empty histogram.
    """
    total = hist.total
    if total == 0:
        raise ValueError("density of an empty histogram")
    widths = np.diff(COS_DELTA_EDGES)
    centers = 0.5 * (COS_DELTA_EDGES[:-1] + COS_DELTA_EDGES[1:])
    dens = hist.counts / total / widths
    return list(zip(centers.tolist(), dens.tolist()))


@dataclass(frozen=True)
class GaussianOverlay:
    """Fixed-parameter normal curve drawn over the histograms."""

    mean: float = OVERLAY_MEAN
    sigma: float = OVERLAY_SIGMA

    @property
    def height(self) -> float:
        return 1.0 / (math.sqrt(2.0 * math.pi) * self.sigma)


def gaussian_overlay(mean: float, sigma: float,
                     grid: Sequence[float]) -> list[tuple[float, float]]:
    """Normal pdf sampled on a grid."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    height = 1.0 / (math.sqrt(2.0 * math.pi) * sigma)
    return [(float(g), height * math.exp(-((g - mean) ** 2) / (2.0 * sigma ** 2)))
            for g in grid]


def quantity_values(quantity: str, block: pipeline.Block,
                    params: EnvelopeParams) -> np.ndarray:
    """Per-integer values of one tabulated quantity over a block."""
    if quantity == "pi_minus_r":
        return block.pi - block.r
    sqrt_diff = np.sqrt(block.pi) - np.sqrt(block.r)
    if quantity == "sqrt_diff":
        return sqrt_diff
    eta_vals = phase.eta(params, block.x.astype(np.float64))
    if quantity == "cos_delta":
        return sqrt_diff / eta_vals
    if quantity == "cos_delta_bar":
        return (block.pi - block.r - eta_vals**2) / (2.0 * np.sqrt(block.r) * eta_vals)
    raise ValueError(f"unknown quantity {quantity!r} (expected one of {QUANTITIES})")


def _checkpointed(n_max: int, checkpoints: Sequence[int], visit, snapshot,
                  r_terms, config, threads) -> None:
    """Drive blocks over [2, n_max], calling snapshot at each checkpoint."""
    pending = sorted(set(checkpoints))
    if any(c < 2 or c > n_max for c in pending):
        raise ValueError(f"checkpoints must lie in [2, {n_max}]")
    for block in pipeline.iter_blocks(2, n_max, r_terms=r_terms, config=config,
                                      threads=threads):
        lo = int(block.x[0])
        start = 0
        while pending and pending[0] <= int(block.x[-1]):
            cp = pending.pop(0)
            cut = cp - lo + 1
            visit(_slice_block(block, start, cut))
            snapshot(cp)
            start = cut
        if start < len(block):
            visit(_slice_block(block, start, len(block)))


def _slice_block(block: pipeline.Block, start: int, stop: int) -> pipeline.Block:
    if start == 0 and stop == len(block):
        return block
    return pipeline.Block(x=block.x[start:stop], prime=block.prime[start:stop],
                          pi=block.pi[start:stop], li=block.li[start:stop],
                          r=block.r[start:stop])


def collect_moments(checkpoints: Sequence[int],
                    specs: Sequence[tuple[str, EnvelopeParams]],
                    categories: Sequence[Category] = (Category.ALL,),
                    *, r_terms: int | None = DEFAULT_R_TERMS,
                    config: SeriesConfig = DEFAULT_CONFIG,
                    threads: int | None = None) -> dict:
    """Accumulators for several (quantity, envelope) pairs in one sweep.

    Returns {checkpoint: {(quantity, kind): {category: MomentAccumulator}}}.
    """
    running = {(q, p.kind): {c: MomentAccumulator() for c in categories}
               for q, p in specs}
    results: dict = {}

    def visit(block: pipeline.Block) -> None:
        masks = {c: category_mask(c, block.x, block.prime) for c in categories}
        for quantity, params in specs:
            vals = quantity_values(quantity, block, params)
            slot = running[(quantity, params.kind)]
            for cat, mask in masks.items():
                slot[cat] = merge(slot[cat], from_values(vals[mask]))

    def snapshot(cp: int) -> None:
        results[cp] = {key: dict(per_cat) for key, per_cat in running.items()}

    n_max = max(checkpoints)
    _checkpointed(n_max, checkpoints, visit, snapshot, r_terms, config, threads)
    return results


def table_row(range_max: int, quantity: str, params: EnvelopeParams,
              category: Category = Category.ALL,
              *, r_terms: int | None = DEFAULT_R_TERMS,
              config: SeriesConfig = DEFAULT_CONFIG,
              threads: int | None = None) -> tuple[float, float, float, int]:
    """(mean, sigma, mean|.|, count) of `quantity` over [2, range_max]."""
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r} (expected one of {QUANTITIES})")
    if not isinstance(category, Category):
        raise ValueError(f"unknown category {category!r}")
    out = collect_moments([range_max], [(quantity, params)], [category],
                          r_terms=r_terms, config=config, threads=threads)
    acc = out[range_max][(quantity, params.kind)][category]
    return acc.mean, acc.sigma, acc.mean_abs, acc.count


def collect_histograms(checkpoints: Sequence[int], params: EnvelopeParams,
                       *, r_terms: int | None = DEFAULT_R_TERMS,
                       config: SeriesConfig = DEFAULT_CONFIG,
                       threads: int | None = None) -> dict[int, Histogram]:
    """cos(delta) histograms over [2, cp] for each checkpoint, one sweep."""
    running = Histogram()
    results: dict[int, Histogram] = {}

    def visit(block: pipeline.Block) -> None:
        nonlocal running
        vals = quantity_values("cos_delta", block, params)
        running = merge_histograms(running, histogram(vals))

    def snapshot(cp: int) -> None:
        results[cp] = running

    _checkpointed(max(checkpoints), checkpoints, visit, snapshot,
                  r_terms, config, threads)
    return results
