"""Report renderer: regenerates the summary tables as CSV and the figures as PNG.

Everything lands in one output directory; the delimited data next to each
figure carries exactly the points that were drawn.
"""

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import phase, pipeline, specfun, stats
from .primes import Category
from .specfun import DEFAULT_R_TERMS

TABLE_CHECKPOINTS = (10**2, 10**3, 10**4, 10**5, 10**6)
HIST_CHECKPOINTS = (10**3, 10**4, 10**5, 10**6)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fig(width=7.0, height=4.5):
    fig, ax = plt.subplots(figsize=(width, height))
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    return fig, ax


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def _collect_scan(max_x: int, r_terms) -> dict:
    """One pass over [2, max_x]: decimated border points plus small windows."""
    edges = np.logspace(math.log10(2), math.log10(max_x), 400)
    border: dict[int, tuple] = {}
    first_100 = []
    window_15k = []
    for block in pipeline.iter_blocks(2, max_x, r_terms=r_terms):
        xf = block.x.astype(np.float64)
        sqrt_diff = np.sqrt(block.pi) - np.sqrt(block.r)
        li_diff = np.sqrt(block.li) - np.sqrt(block.pi)
        e1 = phase.eta(phase.ETA1, xf)
        cos_d = sqrt_diff / e1
        idx = np.clip(np.searchsorted(edges, xf, side="right") - 1, 0, len(edges) - 2)
        for w in np.unique(idx):
            sel = idx == w
            sub_x = xf[sel]
            sub_sd = sqrt_diff[sel]
            sub_ld = li_diff[sel]
            cur = border.get(int(w))
            lo_i, hi_i = int(np.argmin(sub_sd)), int(np.argmax(sub_sd))
            cand = (sub_x[lo_i], sub_sd[lo_i], sub_ld[lo_i],
                    sub_x[hi_i], sub_sd[hi_i], sub_ld[hi_i])
            if cur is None:
                border[int(w)] = cand
            else:
                lo = cand[:3] if cand[1] < cur[1] else cur[:3]
                hi = cand[3:] if cand[4] > cur[4] else cur[3:]
                border[int(w)] = lo + hi
        if block.x[0] <= 100:
            sel = block.x <= 100
            first_100.extend(zip(block.x[sel].tolist(), block.pi[sel].tolist(),
                                 cos_d[sel].tolist()))
        if block.x[0] <= 15100 and block.x[-1] >= 15000:
            sel = (block.x >= 15000) & (block.x <= 15100)
            window_15k.extend(zip(block.x[sel].tolist(), cos_d[sel].tolist()))
    return {"border": border, "first_100": first_100, "window_15k": window_15k}


def _render_border_figures(outdir: Path, scan: dict, max_x: int) -> None:
    rows = []
    for w in sorted(scan["border"]):
        x_lo, sd_lo, ld_lo, x_hi, sd_hi, ld_hi = scan["border"][w]
        rows.append((x_lo, sd_lo, ld_lo))
        if x_hi != x_lo:
            rows.append((x_hi, sd_hi, ld_hi))
    rows.sort()
    _write_csv(outdir / "border_points.csv",
               ["x", "sqrt_pi_minus_sqrt_r", "sqrt_li_minus_sqrt_pi"],
               [(f"{x:.0f}", f"{a:.12g}", f"{b:.12g}") for x, a, b in rows])

    xs = np.array([r[0] for r in rows])
    sd = np.array([r[1] for r in rows])
    ld = np.array([r[2] for r in rows])
    grid = np.logspace(math.log10(2), math.log10(max_x), 500)
    e1 = phase.eta(phase.ETA1, grid)
    e2 = phase.eta(phase.ETA2, grid)

    fig, ax = _fig()
    ax.plot(np.log(xs), sd, ".", ms=2.5, color="0.35", label="sqrt(pi)-sqrt(R)")
    ax.plot(np.log(grid), e1, "b-", lw=1.2, label="eta1")
    ax.plot(np.log(grid), -e1, "b-", lw=1.2)
    ax.plot(np.log(grid), e2, "r--", lw=1.2, label="eta2")
    ax.plot(np.log(grid), -e2, "r--", lw=1.2)
    ax.set_xlabel("ln x")
    ax.set_ylabel("sqrt(pi) - sqrt(R)")
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, outdir / "fig_sqrt_diff_envelopes.png")

    li_r = np.sqrt(np.maximum(specfun.li(grid), 0)) - np.sqrt(specfun.riemann_r(grid))
    fig, ax = _fig()
    ax.plot(np.log(xs), ld, ".", ms=2.5, color="0.35", label="sqrt(li)-sqrt(pi)")
    ax.plot(np.log(grid), li_r, "k-", lw=1.8, label="sqrt(li)-sqrt(R)")
    ax.plot(np.log(grid), li_r + e1, "b-", lw=1.0)
    ax.plot(np.log(grid), li_r - e1, "b-", lw=1.0)
    ax.plot(np.log(grid), li_r + e2, "r--", lw=1.0)
    ax.plot(np.log(grid), li_r - e2, "r--", lw=1.0)
    ax.set_xlabel("ln x")
    ax.set_ylabel("sqrt(li) - sqrt(pi)")
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, outdir / "fig_sqrt_li_pi.png")


def _render_bounds_figure(outdir: Path, max_x: int) -> None:
    hi = min(max_x, 10**4)
    xs = np.arange(2, hi + 1, dtype=np.float64)
    blocks = list(pipeline.iter_blocks(2, hi, r_terms=None))
    pi = np.concatenate([b.pi for b in blocks]).astype(np.float64)
    li_v = np.concatenate([b.li for b in blocks])
    r_v = np.concatenate([b.r for b in blocks])
    e1 = phase.eta(phase.ETA1, xs)
    lo_b = li_v - (np.sqrt(r_v) + e1) ** 2
    hi_b = li_v - (np.sqrt(r_v) - e1) ** 2
    _write_csv(outdir / "li_pi_bounds.csv",
               ["x", "li_minus_pi", "exact_lo", "exact_hi", "li_minus_r"],
               [(f"{x:.0f}", f"{a:.12g}", f"{b:.12g}", f"{c:.12g}", f"{d:.12g}")
                for x, a, b, c, d in zip(xs, li_v - pi, lo_b, hi_b, li_v - r_v)])

    fig, ax = _fig()
    ax.plot(np.log(xs), li_v - pi, ".", ms=2, color="0.35", label="li - pi")
    ax.plot(np.log(xs), lo_b, "b-", lw=1.0, label="exact bounds (eta1)")
    ax.plot(np.log(xs), hi_b, "b-", lw=1.0)
    ax.plot(np.log(xs), li_v - r_v, "k-", lw=1.6, label="li - R")
    ax.set_xlabel("ln x")
    ax.set_ylabel("li(x) - pi(x)")
    ax.legend(loc="upper left", fontsize=8)
    _save(fig, outdir / "fig_li_pi_bounds.png")


def _render_tables(outdir: Path, max_x: int, r_terms) -> None:
    checkpoints = [c for c in TABLE_CHECKPOINTS if c <= max_x] or [max_x]
    specs = [("sqrt_diff", phase.ETA1), ("pi_minus_r", phase.ETA1),
             ("cos_delta", phase.ETA1), ("cos_delta_bar", phase.ETA1),
             ("cos_delta", phase.ETA2)]
    cats = list(Category)
    collected = stats.collect_moments(checkpoints, specs, cats, r_terms=r_terms)

    def fmt(acc):
        return f"{acc.mean:.6f}", f"{acc.sigma:.6f}", f"{acc.mean_abs:.6f}", acc.count

    rows1, rows2, rows3, rows4 = [], [], [], []
    for cp in checkpoints:
        sd = collected[cp][("sqrt_diff", "eta1")][Category.ALL]
        pr = collected[cp][("pi_minus_r", "eta1")][Category.ALL]
        rows1.append((cp, f"{sd.mean:.6f}", f"{sd.sigma:.6f}",
                      f"{pr.mean:.6f}", f"{pr.sigma:.6f}"))
        cd = collected[cp][("cos_delta", "eta1")][Category.ALL]
        cb = collected[cp][("cos_delta_bar", "eta1")][Category.ALL]
        rows2.append((cp, *fmt(cd)[:3], *fmt(cb)[:3]))
        c2 = collected[cp][("cos_delta", "eta2")][Category.ALL]
        rows3.append((cp, *fmt(c2)[:3]))
        per_cat = collected[cp][("cos_delta", "eta1")]
        rows4.append((cp,
                      f"{per_cat[Category.ALL].mean:.6f}",
                      f"{per_cat[Category.PRIME].mean:.6f}",
                      per_cat[Category.PRIME].count,
                      f"{per_cat[Category.EVEN_COMPOSITE].mean:.6f}",
                      f"{per_cat[Category.ODD_COMPOSITE].mean:.6f}",
                      per_cat[Category.ODD_COMPOSITE].count,
                      f"{per_cat[Category.ODD].mean:.6f}"))
    _write_csv(outdir / "table_sqrt_diff.csv",
               ["range_hi", "mean_sqrt_diff", "sigma_sqrt_diff",
                "mean_pi_minus_r", "sigma_pi_minus_r"], rows1)
    _write_csv(outdir / "table_cos_delta_eta1.csv",
               ["range_hi", "mean", "sigma", "mean_abs",
                "bar_mean", "bar_sigma", "bar_mean_abs"], rows2)
    _write_csv(outdir / "table_cos_delta_eta2.csv",
               ["range_hi", "mean", "sigma", "mean_abs"], rows3)
    _write_csv(outdir / "table_categories.csv",
               ["range_hi", "all", "prime", "prime_count", "even_composite",
                "odd_composite", "odd_composite_count", "odd"], rows4)


def _render_histograms(outdir: Path, max_x: int, r_terms) -> None:
    checkpoints = [c for c in HIST_CHECKPOINTS if c <= max_x] or [max_x]
    hists = stats.collect_histograms(checkpoints, phase.ETA1, r_terms=r_terms)
    overlay = stats.GaussianOverlay()
    count_rows = [[f"({stats.COS_DELTA_EDGES[i]:g},{stats.COS_DELTA_EDGES[i + 1]:g})"]
                  for i in range(stats.N_BINS)]
    for cp in checkpoints:
        h = hists[cp]
        for i in range(stats.N_BINS):
            count_rows[i].append(int(h.counts[i]))
        dens = stats.density(h)
        fig, ax = _fig(6.0, 4.2)
        centers = [c for c, _ in dens]
        widths = np.diff(stats.COS_DELTA_EDGES)
        ax.bar(centers, [d for _, d in dens], width=widths * 0.92,
               color="0.75", edgecolor="0.4", lw=0.5)
        grid = np.linspace(-1, 1, 400)
        pdf = [overlay.height * math.exp(-((g - overlay.mean) ** 2)
                                         / (2 * overlay.sigma ** 2)) for g in grid]
        ax.plot(grid, pdf, "b-", lw=1.4,
                label=f"normal({overlay.mean}, {overlay.sigma})")
        ax.set_xlabel("cos(delta)")
        ax.set_ylabel("density")
        ax.set_title(f"x in (2, {cp:g})", fontsize=10)
        ax.legend(fontsize=8)
        _save(fig, outdir / f"fig_hist_{cp}.png")
    _write_csv(outdir / "table_histogram.csv",
               ["bin"] + [f"upto_{cp}" for cp in checkpoints], count_rows)


def _render_phase_windows(outdir: Path, scan: dict) -> None:
    if scan["first_100"]:
        xs = [r[0] for r in scan["first_100"]]
        pis = [r[1] for r in scan["first_100"]]
        cds = [r[2] for r in scan["first_100"]]
        _write_csv(outdir / "phase_first_100.csv",
                   ["x", "pi", "cos_delta"],
                   [(x, p, f"{c:.12g}") for x, p, c in scan["first_100"]])
        fig, ax = _fig(9.0, 3.5)
        # join runs sharing the same pi(x): the sawtooth between primes
        start = 0
        for i in range(1, len(xs) + 1):
            if i == len(xs) or pis[i] != pis[start]:
                ax.plot(xs[start:i], cds[start:i], "b.-", ms=4, lw=0.8)
                start = i
        ax.set_xlabel("x")
        ax.set_ylabel("cos(delta)")
        _save(fig, outdir / "fig_phase_first_100.png")

    if scan["window_15k"]:
        _write_csv(outdir / "phase_window_15000.csv", ["x", "cos_delta"],
                   [(x, f"{c:.12g}") for x, c in scan["window_15k"]])
        fig, ax = _fig(9.0, 3.5)
        ax.plot([r[0] for r in scan["window_15k"]],
                [r[1] for r in scan["window_15k"]], "b.-", ms=3, lw=0.7)
        ax.set_xlabel("x")
        ax.set_ylabel("cos(delta)")
        _save(fig, outdir / "fig_phase_window_15000.png")


def run_report(outdir: Path, max_x: int = 10**6,
               r_terms: int | None = DEFAULT_R_TERMS) -> None:
    """Render every table CSV and figure PNG into `outdir`."""
    if max_x < 100:
        raise ValueError("report needs max_x >= 100")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    scan = _collect_scan(max_x, r_terms)
    _render_border_figures(outdir, scan, max_x)
    _render_bounds_figure(outdir, max_x)
    _render_tables(outdir, max_x, r_terms)
    _render_histograms(outdir, max_x, r_terms)
    _render_phase_windows(outdir, scan)

    crossing_lines = []
    for params in (phase.ETA1, phase.ETA2):
        big_l = phase.first_crossing_estimate(params)
        crossing_lines.append(
            f"{params.kind}: L = {big_l:.4f}, x ~ 10^{big_l / math.log(10):.2f}")
    (outdir / "crossing.txt").write_text("\n".join(crossing_lines) + "\n",
                                         encoding="utf-8")
