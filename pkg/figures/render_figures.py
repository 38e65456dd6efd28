#!/usr/bin/env python3
"""Render the four standard figures from diracwalk CSV files.

The figures consume only the CSV datasets written by the ``diracwalk``
command-line tool (see the repository README):

    1  site-probability snapshots      <- diracwalk evolve  --preset fig1
    2  light-cone peak decay           <- diracwalk peak    --preset fig2
    3  second-moment growth crossover  <- diracwalk moments --preset fig3
    4  distribution vs normal limit    <- diracwalk gaussian --preset fig4

Usage:
    python render_figures.py FIGURE_ID CSV_PATH --out IMAGE_PATH

Each CSV is validated against the figure it is supposed to feed (the
header echoes which subcommand produced it); on a mismatch nothing is
rendered and the exit code is nonzero.
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_COMMAND = {1: "evolve", 2: "peak", 3: "moments", 4: "gaussian"}


class FigureError(RuntimeError):
    """The CSV input is missing, malformed, or from the wrong subcommand."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int
    csv_path: Path
    out_path: Path


@dataclass
class Dataset:
    meta: dict
    columns: list
    rows: list  # list of per-column string values
    footers: dict

    def column(self, name, rows=None, convert=float):
        idx = self.columns.index(name)
        return [convert(r[idx]) for r in (self.rows if rows is None else rows)]

    def subset(self, name, value):
        idx = self.columns.index(name)
        return [r for r in self.rows if r[idx] == value]


def load_dataset(path: Path, expected_command: str) -> Dataset:
    if not path.exists():
        raise FigureError(f"CSV not found: {path}")
    meta, rows, footers = {}, [], {}
    columns = None
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            body = line[2:]
            if body.startswith("columns:"):
                columns = [c.strip() for c in body.split(":", 1)[1].split(",")]
            elif ":" in body:
                key, val = body.split(":", 1)
                (footers if columns is not None else meta)[key.strip()] = val.strip()
        elif line.strip():
            rows.append(line.split(","))
    if columns is None or not rows:
        raise FigureError(f"{path} carries no data (empty or truncated CSV)")
    if meta.get("command") != expected_command:
        raise FigureError(
            f"{path} was written by {meta.get('command')!r}, "
            f"but this figure needs {expected_command!r}"
        )
    if "epsilon" not in meta:
        raise FigureError(f"{path} header lacks the epsilon echo")
    return Dataset(meta=meta, columns=columns, rows=rows, footers=footers)


def _circled_dot(ax, x, y):
    # the "circled dot" marker: an open circle around a solid point
    ax.plot([x], [y], marker="o", markersize=11, markerfacecolor="none",
            markeredgecolor="tab:red", linestyle="none")
    ax.plot([x], [y], marker=".", color="tab:red", linestyle="none")


def render_fig1(data: Dataset, out_path: Path):
    """2x2 probability snapshots with the light-cone point circled."""
    steps = sorted({int(r[0]) for r in data.rows})
    fig, axes = plt.subplots(2, 2, figsize=(9, 7))
    for ax, n in zip(axes.flat, steps):
        rows = data.subset("n", str(n))
        k = data.column("k", rows)
        p = data.column("p", rows)
        ax.plot(k, p, ".", markersize=4, color="tab:blue")
        _circled_dot(ax, n, p[-1])
        ax.set_title(f"n = {n}")
        ax.set_xlabel("site k (x / cΔ)")
        ax.set_ylabel("probability")
    fig.suptitle(f"site probabilities, eps = {data.meta['epsilon']}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    return fig


def render_fig2(data: Dataset, out_path: Path):
    """Decay of the probability of remaining on the light cone."""
    n = data.column("n")
    p_nn = data.column("p_nn")
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(n, p_nn, "-", color="tab:blue")
    ax.set_xlabel("steps n (t / Δ)")
    ax.set_ylabel("P(n, n)")
    ax.set_title(f"probability of staying at x = ct, eps = {data.meta['epsilon']}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    return fig


def render_fig3(data: Dataset, out_path: Path):
    """Second-moment growth on log-log axes with the crossover marked."""
    n = data.column("n")
    s2 = data.column("s2_exact")
    emp = data.column("s2_empirical")
    ball = data.column("ballistic_approx")
    diff = data.column("diffusive_approx")
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.loglog(n, emp, ".", markersize=3, color="tab:blue", label="moment of the distribution")
    ax.loglog(n, s2, "-", linewidth=1, color="tab:orange", label="closed form")
    ax.loglog(n, ball, "--", linewidth=1, color="gray", label="n^2 (ballistic)")
    positive = [(x, y) for x, y in zip(n, diff) if y > 0]
    ax.loglog(*zip(*positive), ":", linewidth=1, color="black", label="linear (diffusive)")
    if "crossover_n" in data.footers:
        n_star = int(data.footers["crossover_n"])
        ax.axvline(n_star, color="tab:red", linewidth=1, alpha=0.7,
                   label=f"crossover n* = {n_star}")
    ax.set_xlabel("steps n")
    ax.set_ylabel("second moment")
    ax.set_title(f"quadratic-to-linear growth, eps = {data.meta['epsilon']}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    return fig


def render_fig4(data: Dataset, out_path: Path):
    """Discrete density (dots) on top of the limiting normal (circles)."""
    steps = sorted({int(r[0]) for r in data.rows})
    fig, axes = plt.subplots(1, len(steps), figsize=(6 * len(steps), 5))
    axes = [axes] if len(steps) == 1 else list(axes.flat)
    for i, (ax, n) in enumerate(zip(axes, steps)):
        rows = data.subset("n", str(n))
        k = data.column("k", rows)
        half_p = data.column("half_p", rows)
        dens = data.column("normal_density", rows)
        ax.plot(k, half_p, ".", markersize=5, color="tab:blue", label="walk density P/2")
        ax.plot(k, dens, "o", markersize=4, markerfacecolor="none",
                markeredgecolor="tab:orange", linestyle="none", label="normal limit")
        if i == 0:
            ax.plot([n], [half_p[-1]], marker="*", markersize=10, color="tab:red",
                    linestyle="none", label="x = ct")
        ax.set_title(f"n = {n}")
        ax.set_xlabel("site k")
        ax.set_ylabel("density")
        ax.legend()
    fig.suptitle(f"approach to the normal limit, eps = {data.meta['epsilon']}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    return fig


_RENDERERS = {1: render_fig1, 2: render_fig2, 3: render_fig3, 4: render_fig4}


def render(spec: FigureSpec):
    """Validate the CSV and render one figure; returns the Figure object."""
    data = load_dataset(spec.csv_path, EXPECTED_COMMAND[spec.figure_id])
    return _RENDERERS[spec.figure_id](data, spec.out_path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("figure", type=int, choices=sorted(_RENDERERS))
    parser.add_argument("csv", type=Path)
    parser.add_argument("--out", type=Path, required=True)
    args = parser.parse_args(argv)
    try:
        fig = render(FigureSpec(figure_id=args.figure, csv_path=args.csv, out_path=args.out))
        plt.close(fig)
    except FigureError as exc:
        print(f"render_figures: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
