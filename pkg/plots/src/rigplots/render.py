"""Render the sweep and diagnostic CSVs into static images.

All readers are dict-of-columns based: a CSV is parsed once, required
columns are checked up front, and a missing column or an empty body raises
CsvFormatError with a message naming the problem.  Rendering is a pure
function of the CSV contents and the FigureSpec (fixed DPI, agg backend),
so identical inputs give identical images.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class CsvFormatError(ValueError):
    """Raised for a missing column, an empty body, or an unparsable cell."""


# line styles keyed by series order: solid, dashed, dotted, dash-dot, ...
LINE_STYLES = ["-", "--", ":", "-."]


@dataclass
class FigureSpec:
    out_path: str
    dpi: int = 150
    figsize: tuple[float, float] = (6.0, 7.0)
    styles: list[str] = field(default_factory=lambda: list(LINE_STYLES))


def read_columns(path: str, required: list[str]) -> dict[str, np.ndarray]:
    """Load a CSV as float columns, enforcing the required schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: no data (empty file)")
        rows = [row for row in reader if row]
    for col in required:
        if col not in header:
            raise CsvFormatError(f"{path}: missing column {col!r}")
    if not rows:
        raise CsvFormatError(f"{path}: no data (header only)")
    out: dict[str, np.ndarray] = {}
    for col in required:
        i = header.index(col)
        try:
            out[col] = np.array([float(r[i]) for r in rows])
        except (ValueError, IndexError) as exc:
            raise CsvFormatError(f"{path}: bad value in column {col!r}: {exc}")
    return out


def _series_by_p(data: dict[str, np.ndarray]):
    for k, p in enumerate(sorted(set(data["p"].tolist()))):
        mask = data["p"] == p
        order = np.argsort(data["c"][mask])
        yield k, p, data["c"][mask][order], mask, order


def render_figure1(figure1_csv: str, spec: FigureSpec | str) -> str:
    """Two stacked panels against clustering c: R_0 on top, pi below."""
    if isinstance(spec, str):
        spec = FigureSpec(out_path=spec)
    data = read_columns(figure1_csv, ["c", "p", "mu", "R0", "pi"])
    mu = data["mu"][0]
    fig, (ax_r0, ax_pi) = plt.subplots(
        2, 1, sharex=True, figsize=spec.figsize, dpi=spec.dpi
    )
    for k, p, c, mask, order in _series_by_p(data):
        style = spec.styles[k % len(spec.styles)]
        ax_r0.plot(c, data["R0"][mask][order], style, color="k", label=f"p = {p:g}")
        ax_pi.plot(c, data["pi"][mask][order], style, color="k", label=f"p = {p:g}")
    ax_r0.axhline(1.0, color="0.6", lw=0.8)
    ax_r0.set_ylabel(r"$R_0$")
    ax_r0.legend(loc="upper left", frameon=False)
    ax_pi.set_ylabel(r"$\pi$")
    ax_pi.set_xlabel(r"clustering $c$")
    ax_pi.set_xlim(0.0, 1.0)
    ax_r0.set_title(rf"$\mu = {mu:g}$")
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path


def _render_degree(data: dict[str, np.ndarray], spec: FigureSpec) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=spec.dpi)
    ax.bar(data["degree"], data["empirical_pmf"], width=0.8, color="0.75",
           label="empirical")
    ax.plot(data["degree"], data["theory_pmf"], "k.-", label="compound Poisson")
    ax.set_xlabel("degree")
    ax.set_ylabel("pmf")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)


def _render_census(data: dict[str, np.ndarray], spec: FigureSpec) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=spec.dpi)
    for k, p in enumerate(sorted(set(data["p"].tolist()), reverse=True)):
        mask = data["p"] == p
        ns = np.array(sorted(set(data["n"][mask].tolist())))
        means = [data["k4prime"][mask & (data["n"] == n)].mean() for n in ns]
        label = "unthinned" if p == 1.0 else f"thinned (p = {p:g})"
        ax.plot(ns, means, LINE_STYLES[k % len(LINE_STYLES)], color="k",
                marker="o", label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("mean K4' count")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)


def render_diagnostics(csv_path: str, spec: FigureSpec | str) -> str:
    """Dispatch on the CSV schema: degree-law overlay or census scaling."""
    if isinstance(spec, str):
        spec = FigureSpec(out_path=spec)
    with open(csv_path, newline="") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise CsvFormatError(f"{csv_path}: no data (empty file)")
    if "degree" in header:
        data = read_columns(
            csv_path, ["degree", "count", "empirical_pmf", "theory_pmf"]
        )
        _render_degree(data, spec)
    elif "k4prime" in header:
        data = read_columns(csv_path, ["n", "p", "replicate", "k4", "k4prime"])
        _render_census(data, spec)
    else:
        raise CsvFormatError(
            f"{csv_path}: unrecognized schema (no 'degree' or 'k4prime' column)"
        )
    return spec.out_path
