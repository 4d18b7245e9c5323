"""CSV and SVG output for detuning sweeps."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .spectra import SweepResult

CSV_HEADER = ("delta_p", "chi_re", "chi_im", "n_g")
PLOT_PARTS = ("chi_im", "chi_re", "n_g")


def _fmt(x: float | None) -> str:
    if x is None or not math.isfinite(x):
        return ""
    # 17 significant digits round-trip any double
    return format(x, ".16e")


def sweep_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in result.samples:
        chi_re = s.chi_re if s.valid else None
        chi_im = s.chi_im if s.valid else None
        writer.writerow([_fmt(s.delta_p), _fmt(chi_re), _fmt(chi_im), _fmt(s.n_g)])
    return buf.getvalue()


def write_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    path.write_text(sweep_to_csv(result), encoding="utf-8", newline="")
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a sweep CSV as float arrays; empty fields become NaN."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: not a sweep CSV (expected header {','.join(CSV_HEADER)})")
    body = rows[1:]
    if not body:
        raise ValueError(f"{path}: no data rows")
    cols = {name: np.array([float(r[k]) if r[k] else math.nan for r in body]) for k, name in enumerate(CSV_HEADER)}
    return cols


_STYLES = {"chi_im": "-", "chi_re": "--", "n_g": ":"}
_LABELS = {"chi_im": "χ″ (absorption)", "chi_re": "χ′ (dispersion)", "n_g": "n_g"}


def plot_svg(
    series: list[tuple[str, dict[str, np.ndarray]]],
    out_path,
    parts=("chi_im", "chi_re"),
    xlim: tuple[float, float] | None = None,
    title: str | None = None,
) -> Path:
    """Line chart of the requested columns against detuning, written as SVG.

    ``series`` pairs a legend label with columns from :func:`read_csv`.
    Imaginary parts are solid, real parts dashed.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for part in parts:
        if part not in PLOT_PARTS:
            raise ValueError(f"unknown plot part {part!r}")
    if not series:
        raise ValueError("nothing to plot")

    with matplotlib.rc_context({"svg.hashsalt": "darkfloquet", "svg.fonttype": "none"}):
        # 72 pt per inch: an 800x500 pt canvas
        fig, ax = plt.subplots(figsize=(800 / 72, 500 / 72), dpi=72)
        colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
        for k, (label, cols) in enumerate(series):
            x = cols["delta_p"]
            mask = np.ones_like(x, dtype=bool)
            if xlim is not None:
                mask = (x >= xlim[0]) & (x <= xlim[1])
            for part in parts:
                name = _LABELS[part] if not label else f"{_LABELS[part]}, {label}"
                ax.plot(x[mask], cols[part][mask], _STYLES[part], color=colors[k % len(colors)], label=name, lw=1.2)
        if xlim is not None:
            ax.set_xlim(*xlim)
        ax.set_xlabel("Δ_p")
        ax.set_ylabel("χ" if parts != ("n_g",) else "n_g")
        ax.axhline(0.0, color="0.7", lw=0.6, zorder=0)
        if title:
            ax.set_title(title)
        ax.legend(loc="best", fontsize="small")
        fig.tight_layout()
        out_path = Path(out_path)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out_path
