"""Prime-count table loading, validation, and pipeline equivalence."""

import math

import numpy as np
import pytest

from primephase import phase, pipeline
from primephase.ingest import PiTableError, extended_samples, load_pi_table
from primephase.primes import Category

# widely published prime counts; entries <= 1e9 are re-verified by the sieve
PI_REFERENCE = {
    10**2: 25,
    10**3: 168,
    10**6: 78498,
    10**8: 5761455,
    10**10: 455052511,
    10**12: 37607912018,
    10**23: 1925320391606803968923,
}


def _write_table(path, rows, header="x,pi"):
    lines = [header] + [f"{x},{p}" for x, p in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_basic(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(100, 25), (1000, 168)])
    table = load_pi_table(path)
    assert table.rows == ((100, 25), (1000, 168))
    assert table.source.endswith("t.csv")


def test_load_skips_comments_and_blank_lines(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("# prime counts\nx,pi\n# checkpoint\n100,25\n\n1000,168\n",
                    encoding="utf-8")
    assert len(load_pi_table(path)) == 2


def test_load_empty_file_is_valid(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    assert len(load_pi_table(path)) == 0
    path.write_text("x,pi\n", encoding="utf-8")
    assert len(load_pi_table(path)) == 0


def test_load_rejects_bad_header(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(100, 25)], header="a,b")
    with pytest.raises(PiTableError, match=":1:"):
        load_pi_table(path)


def test_load_rejects_out_of_order(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(1000, 168), (100, 25)])
    with pytest.raises(PiTableError, match="not increasing"):
        load_pi_table(path)


def test_load_rejects_decreasing_pi(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(100, 25), (1000, 24)])
    with pytest.raises(PiTableError, match="decreased"):
        load_pi_table(path)


def test_load_rejects_pi_above_x(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(100, 101)])
    with pytest.raises(PiTableError, match="exceeds"):
        load_pi_table(path)


def test_load_reports_parse_error_line(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("x,pi\n100,25\nten,30\n", encoding="utf-8")
    with pytest.raises(PiTableError, match=":3:"):
        load_pi_table(path)


def test_extended_samples_match_sieved_pipeline_bit_for_bit(tmp_path):
    checkpoints = [100, 10**4, 10**6]
    path = _write_table(tmp_path / "t.csv",
                        [(c, PI_REFERENCE.get(c, 1229)) for c in checkpoints])
    table = load_pi_table(path)
    samples = {s.x: s for s in extended_samples(table, phase.ETA1)}

    for block in pipeline.iter_blocks(2, 10**6):
        for cp in checkpoints:
            if block.x[0] <= cp <= block.x[-1]:
                i = cp - int(block.x[0])
                s = samples[cp]
                assert s.pi_x == int(block.pi[i])
                assert s.li_x == block.li[i]
                assert s.r_x == block.r[i]
                sqrt_diff = math.sqrt(s.pi_x) - math.sqrt(s.r_x)
                assert s.cos_delta == sqrt_diff / s.eta
                cd_block = (np.sqrt(block.pi[i]) - np.sqrt(block.r[i])) / \
                    phase.eta(phase.ETA1, float(cp))
                assert s.cos_delta == float(cd_block)


def test_extended_samples_first_row_bin_and_category(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(2, 1), (4, 2), (7, 4)])
    samples = extended_samples(load_pi_table(path), phase.ETA1)
    assert -1.0 < samples[0].cos_delta < -0.95
    assert samples[0].category is Category.PRIME
    assert samples[1].category is Category.EVEN_COMPOSITE
    assert samples[2].category is Category.PRIME


def test_extended_samples_beyond_sieve_range(tmp_path):
    x = 10**23
    path = _write_table(tmp_path / "t.csv", [(x, PI_REFERENCE[x])])
    [s] = extended_samples(load_pi_table(path), phase.ETA1)
    assert math.isfinite(s.cos_delta) and math.isfinite(s.r_x)
    assert abs(s.cos_delta) < 1.5
    assert s.li_x - s.pi_x > 0


def test_extended_samples_range_error(tmp_path):
    path = _write_table(tmp_path / "t.csv", [(10**301, 10**295)])
    with pytest.raises(ValueError, match="double-precision"):
        extended_samples(load_pi_table(path), phase.ETA1)
