"""CLI surface: subcommands, formats, determinism, and error paths."""

import csv
import json

import pytest

from primephase.cli import main


def run_csv(argv, tmp_path, name="out.csv"):
    out = tmp_path / name
    assert main(argv + ["--out", str(out)]) == 0
    comments = []
    with open(out, encoding="utf-8") as fh:
        rows = []
        for line in fh:
            if line.startswith("#"):
                comments.append(line)
                continue
            rows.append(line.rstrip("\n"))
    parsed = list(csv.DictReader(rows))
    return parsed, comments, out.read_bytes()


def test_tables_cos_delta_1000(tmp_path):
    rows, _, _ = run_csv(["tables", "--quantity", "cos_delta", "--eta", "eta1",
                          "--max", "1e3"], tmp_path)
    assert [r["range_hi"] for r in rows] == ["100", "1000"]
    assert rows[1]["mean"] == "0.008304"
    assert rows[1]["sigma"] == "0.280109"
    assert rows[1]["mean_abs"] == "0.223332"
    assert rows[1]["count"] == "999"


def test_tables_sqrt_diff_100(tmp_path):
    rows, _, _ = run_csv(["tables", "--quantity", "sqrt_diff", "--max", "100"],
                         tmp_path)
    assert rows[0]["mean"] == "0.001889"
    assert rows[0]["sigma"] == "0.062256"


def test_tables_prime_category(tmp_path):
    rows, _, _ = run_csv(["tables", "--quantity", "cos_delta", "--category",
                          "prime", "--max", "100"], tmp_path)
    assert rows[0]["count"] == "25"
    assert rows[0]["mean"] == "0.256581"


def test_tables_json(tmp_path):
    out = tmp_path / "t.json"
    assert main(["tables", "--quantity", "cos_delta", "--max", "100",
                 "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload[0]["range_hi"] == 100
    assert payload[0]["mean"] == pytest.approx(0.014402, abs=1e-6)


def test_hist_1000(tmp_path):
    rows, comments, _ = run_csv(["hist", "--max", "1e3"], tmp_path)
    assert len(rows) == 23  # 21 bins + underflow + overflow
    by_bin = {(r["bin_lo"], r["bin_hi"]): r for r in rows}
    assert by_bin[("-0.45", "-0.35")]["count"] == "47"
    assert by_bin[("-1", "-0.95")]["count"] == "1"
    assert by_bin[("-inf", "-1")]["count"] == "0"
    total = sum(int(r["count"]) for r in rows)
    assert total == 999
    assert any("sample_mean=0.008304" in c for c in comments)


def test_hist_counts_conserved_small(tmp_path):
    rows, _, _ = run_csv(["hist", "--max", "100"], tmp_path)
    assert sum(int(r["count"]) for r in rows) == 99


def test_hist_density_consistent(tmp_path):
    rows, _, _ = run_csv(["hist", "--max", "1e3"], tmp_path)
    interior = [r for r in rows if r["bin_lo"] not in ("-inf", "1")]
    for r in interior:
        width = float(r["bin_hi"]) - float(r["bin_lo"])
        want = int(r["count"]) / 999 / width
        assert float(r["density"]) == pytest.approx(want, rel=1e-9)


def test_scan_first_row_and_max(tmp_path):
    rows, _, _ = run_csv(["scan", "2", "100"], tmp_path)
    assert rows[0]["x"] == "2"
    assert float(rows[0]["sqrt_pi_minus_sqrt_r"]) == pytest.approx(-0.244906, abs=1e-5)

    rows, _, _ = run_csv(["scan", "2", "10000"], tmp_path)
    best = max(rows, key=lambda r: float(r["sqrt_li_minus_sqrt_pi"]))
    assert best["x"] == "28"
    assert float(best["sqrt_li_minus_sqrt_pi"]) == pytest.approx(0.525426, abs=1e-5)


def test_scan_csv_is_lossless_for_cos_delta(tmp_path):
    rows, _, _ = run_csv(["scan", "2", "2000"], tmp_path)
    for r in rows[::97]:
        recomputed = float(r["sqrt_pi_minus_sqrt_r"]) / float(r["eta1"])
        assert recomputed == pytest.approx(float(r["cos_delta"]), rel=1e-9)


def test_scan_deterministic(tmp_path):
    _, _, first = run_csv(["scan", "2", "3000"], tmp_path, "a.csv")
    _, _, second = run_csv(["scan", "2", "3000"], tmp_path, "b.csv")
    assert first == second


def test_scan_matches_across_thread_counts(tmp_path, monkeypatch):
    monkeypatch.setenv("PRIMEPHASE_THREADS", "4")
    _, _, threaded = run_csv(["scan", "2", "30000"], tmp_path, "a.csv")
    monkeypatch.setenv("PRIMEPHASE_THREADS", "1")
    _, _, serial = run_csv(["scan", "2", "30000"], tmp_path, "b.csv")
    assert threaded == serial


def test_scan_decimation_bounds_output(tmp_path):
    rows, _, _ = run_csv(["scan", "2", "100000", "--decimate", "log"], tmp_path)
    assert len(rows) <= 400
    xs = [int(r["x"]) for r in rows]
    assert xs == sorted(xs)
    assert any(r["x"] == "2" for r in rows)  # global extreme kept


def test_scan_range_error_without_table(tmp_path, capsys):
    assert main(["scan", "2", "1e10"]) == 1
    err = capsys.readouterr().err
    assert "beyond sieve range" in err and "--pi-table" in err


def test_scan_with_pi_table(tmp_path):
    table = tmp_path / "pi.csv"
    table.write_text("x,pi\n1000000,78498\n10000000000,455052511\n",
                     encoding="utf-8")
    rows, _, _ = run_csv(["scan", "2", "1e10", "--pi-table", str(table)], tmp_path)
    assert [r["x"] for r in rows] == ["1000000", "10000000000"]
    # same value the sieved pipeline yields at 1e6 (pi - R < 0 at that point)
    assert float(rows[0]["cos_delta"]) == pytest.approx(-0.530416, abs=1e-5)
    assert abs(float(rows[1]["cos_delta"])) < 1.0


def test_bounds_contain_li_minus_pi(tmp_path):
    rows, _, _ = run_csv(["bounds", "2", "1000"], tmp_path)
    for r in rows:
        lo, mid, hi = (float(r["exact_lo"]), float(r["li_minus_pi"]),
                       float(r["exact_hi"]))
        assert lo <= mid <= hi
        assert r["asym_lo"] == "" and r["asym_hi"] == ""


def test_bounds_asymptotic_with_table(tmp_path):
    table = tmp_path / "pi.csv"
    table.write_text("x,pi\n10000000000,455052511\n", encoding="utf-8")
    rows, _, _ = run_csv(["bounds", "2", "1e10", "--pi-table", str(table)], tmp_path)
    [r] = rows
    assert float(r["asym_lo"]) < float(r["li_minus_pi"]) < float(r["asym_hi"])


def test_crossing_outputs(tmp_path, capsys):
    assert main(["crossing", "--eta", "eta2"]) == 0
    out = capsys.readouterr().out
    line = [l for l in out.splitlines() if l.startswith("L =")][0]
    big_l = float(line.split("=")[-1])
    assert 720 <= big_l <= 736
    assert "10^316" in out

    assert main(["crossing", "--eta", "eta1"]) == 0
    out = capsys.readouterr().out
    assert "note:" in out


def test_crossing_rejects_unknown_envelope():
    with pytest.raises(SystemExit) as exc:
        main(["crossing", "--eta", "eta9"])
    assert exc.value.code == 2


def test_stdout_output(capsys):
    assert main(["tables", "--quantity", "cos_delta", "--max", "100"]) == 0
    out = capsys.readouterr().out
    assert "range_lo,range_hi,mean" in out
    assert "0.014402" in out


def test_json_round_trip_matches_csv(tmp_path):
    csv_rows, _, _ = run_csv(["scan", "2", "50"], tmp_path)
    out = tmp_path / "s.json"
    assert main(["scan", "2", "50", "--format", "json", "--out", str(out)]) == 0
    json_rows = json.loads(out.read_text())
    assert len(json_rows) == len(csv_rows)
    for jr, cr in zip(json_rows, csv_rows):
        assert jr["x"] == int(cr["x"])
        assert jr["cos_delta"] == pytest.approx(float(cr["cos_delta"]), rel=1e-11)
