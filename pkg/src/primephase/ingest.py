"""Loading external (x, pi(x)) tables to reach beyond the sieve range.

Canonical format: UTF-8 CSV with header ``x,pi``, both columns exact decimal
integers, comment lines starting with ``#`` ignored.  Conversion from
historic tables with rounded x values is the user's job; the loader does no
rounding.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

from .phase import EnvelopeParams, PhaseSample, make_sample
from .specfun import DEFAULT_CONFIG, DEFAULT_R_TERMS, SeriesConfig

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
             41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class PiTableError(ValueError):
    """Malformed or inconsistent prime-count table."""


@dataclass(frozen=True)
class PiTable:
    """Validated (x, pi(x)) rows, strictly increasing in x."""

    rows: tuple[tuple[int, int], ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.rows)


def load_pi_table(path) -> PiTable:
    """Parse and validate a prime-count CSV; errors carry the line number."""
    path = Path(path)
    rows: list[tuple[int, int]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        header_seen = False
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or (record[0].lstrip().startswith("#")):
                continue
            if not header_seen:
                if [c.strip().lower() for c in record] != ["x", "pi"]:
                    raise PiTableError(
                        f"{path}:{lineno}: expected header 'x,pi', got {record!r}")
                header_seen = True
                continue
            if len(record) != 2:
                raise PiTableError(f"{path}:{lineno}: expected 2 fields, got {len(record)}")
            try:
                x, pi_x = int(record[0]), int(record[1])
            except ValueError:
                raise PiTableError(
                    f"{path}:{lineno}: non-integer field in {record!r}") from None
            if rows:
                prev_x, prev_pi = rows[-1]
                if x <= prev_x:
                    raise PiTableError(
                        f"{path}:{lineno}: x={x} not increasing (previous {prev_x})")
                if pi_x < prev_pi:
                    raise PiTableError(
                        f"{path}:{lineno}: pi={pi_x} decreased (previous {prev_pi})")
            if pi_x > x:
                raise PiTableError(f"{path}:{lineno}: pi={pi_x} exceeds x={x}")
            rows.append((x, pi_x))
    return PiTable(rows=tuple(rows), source=str(path))


def _is_prime_int(n: int) -> bool:
    """Exact for n < 3.3e24 (fixed-base Miller-Rabin); beyond that the same
    bases make the test probabilistic with a negligible error rate."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        r = pow(a, d, n)
        if r in (1, n - 1):
            continue
        for _ in range(s - 1):
            r = r * r % n
            if r == n - 1:
                break
        else:
            return False
    return True


def extended_samples(table: PiTable, params: EnvelopeParams,
                     r_terms: int | None = DEFAULT_R_TERMS,
                     config: SeriesConfig = DEFAULT_CONFIG) -> list[PhaseSample]:
    """Phase samples for every table row; pi comes from the table, not a sieve.

    Rows with x > 1e300 are out of double-precision range for li/R and raise.
    Derived fields use exactly the same evaluations as the sieved pipeline,
    so overlapping rows agree bit for bit.
    """
    samples = []
    for x, pi_x in table.rows:
        if x < 2:
            raise ValueError(f"table row x={x} below 2")
        samples.append(make_sample(x, pi_x, _is_prime_int(x), params,
                                   r_terms=r_terms, config=config))
    return samples
