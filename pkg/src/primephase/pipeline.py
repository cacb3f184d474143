"""Columnar per-integer pipeline: sieve blocks with li, R, and pi attached.

Blocks are independent except for the running prime count, so they can be
prepared in parallel and stitched in order; PRIMEPHASE_THREADS (or the
threads argument) caps the worker pool.  Results are identical for any
thread count because blocks are always merged in ascending order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import primes, specfun
from .specfun import DEFAULT_CONFIG, DEFAULT_R_TERMS, SeriesConfig


@dataclass(frozen=True)
class Block:
    """Per-integer columns for one contiguous range."""

    x: np.ndarray        # int64
    prime: np.ndarray    # bool
    pi: np.ndarray       # int64, exact pi(x) per row
    li: np.ndarray       # float64
    r: np.ndarray        # float64

    def __len__(self) -> int:
        return len(self.x)


def threads_from_env() -> int:
    raw = os.environ.get("PRIMEPHASE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _prepare(lo: int, hi: int, r_terms: int | None,
             config: SeriesConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    seg = primes.sieve_range(lo, hi)
    xf = np.arange(lo, hi + 1, dtype=np.float64)
    li_vals = specfun.li(xf, config)
    if r_terms is None:
        r_vals = specfun.riemann_r(xf, config)
    else:
        r_vals = specfun.riemann_r_partial(xf, r_terms, config)
    return seg.flags, li_vals, r_vals


def iter_blocks(lo: int, hi: int, *, r_terms: int | None = DEFAULT_R_TERMS,
                config: SeriesConfig = DEFAULT_CONFIG,
                block_size: int = primes.SEGMENT_SIZE,
                threads: int | None = None) -> Iterator[Block]:
    """Yield Blocks covering [lo, hi] in ascending order.

    lo must be >= 2; pi columns are exact because counting always starts
    from 2 even when lo is larger.
    """
    if lo < 2 or hi < lo:
        raise ValueError(f"invalid block range [{lo}, {hi}]")
    if hi > primes.SIEVE_LIMIT:
        raise ValueError(f"x={hi} beyond sieve range; ingest a prime-count table instead")
    threads = threads_from_env() if threads is None else max(1, threads)

    # primes below lo enter the running count but produce no rows
    pi_before = 0 if lo == 2 else primes.pi_at(lo - 1)

    ranges = [(seg_lo, min(seg_lo + block_size - 1, hi))
              for seg_lo in range(lo, hi + 1, block_size)]

    def emit(seg_lo, seg_hi, flags, li_vals, r_vals, count_before):
        x = np.arange(seg_lo, seg_hi + 1, dtype=np.int64)
        pi = count_before + np.cumsum(flags, dtype=np.int64)
        return Block(x=x, prime=flags, pi=pi, li=li_vals, r=r_vals)

    if threads == 1:
        count = pi_before
        for seg_lo, seg_hi in ranges:
            flags, li_vals, r_vals = _prepare(seg_lo, seg_hi, r_terms, config)
            yield emit(seg_lo, seg_hi, flags, li_vals, r_vals, count)
            count += int(np.count_nonzero(flags))
        return

    # sliding submission window keeps at most a few blocks in flight
    with ThreadPoolExecutor(max_workers=threads) as pool:
        window = threads + 2
        futures = {}
        for i in range(min(window, len(ranges))):
            futures[i] = pool.submit(_prepare, *ranges[i], r_terms, config)
        count = pi_before
        for i, (seg_lo, seg_hi) in enumerate(ranges):
            flags, li_vals, r_vals = futures.pop(i).result()
            nxt = i + window
            if nxt < len(ranges):
                futures[nxt] = pool.submit(_prepare, *ranges[nxt], r_terms, config)
            yield emit(seg_lo, seg_hi, flags, li_vals, r_vals, count)
            count += int(np.count_nonzero(flags))
