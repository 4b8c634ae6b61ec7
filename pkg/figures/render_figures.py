#!/usr/bin/env python3
"""Regenerate publication-style panels from the simulator's text outputs.

This script is deliberately independent of the simulation package: it reads
only the delimited tables and summary files written by the `mtcsim` command
line and never recomputes any physics.

Usage:
    python render_figures.py FIGURE INPUT_DIR OUTPUT_PATH

Figures:
    dtc      stroboscopic series (even periods red, odd blue) + power spectrum
             [needs z_series.tsv and power_spectrum.tsv]
    braid    four correlation traces with dotted stage markers
             [needs correlations.tsv and summary.txt]
    sweep    eigenphase spectrum along the swept parameter, edge modes as
             black dots  [needs spectrum.tsv]
"""
import argparse
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

FIGURES = ("dtc", "braid", "sweep")


class FigureInputError(RuntimeError):
    pass


def read_table(path, required):
    """Read a whitespace/tab-delimited table with a header row."""
    if not os.path.exists(path):
        raise FigureInputError("missing input table: %s" % path)
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise FigureInputError("empty table: %s" % path)
    header = lines[0].split("\t")
    for col in required:
        if col not in header:
            raise FigureInputError("table %s lacks required column %r" % (path, col))
    if len(lines) == 1:
        raise FigureInputError("table %s has a header but no rows" % path)
    data = np.array([[float(x) for x in ln.split("\t")] for ln in lines[1:]])
    return {col: data[:, i] for i, col in enumerate(header)}


def read_summary(path):
    out = {}
    if not os.path.exists(path):
        return out
    with open(path) as fh:
        for line in fh:
            if " = " in line:
                key, val = line.rstrip("\n").split(" = ", 1)
                out[key] = val
    return out


def render_dtc(input_dir, output_path):
    z = read_table(os.path.join(input_dir, "z_series.tsv"), ("n", "Z"))
    ps = read_table(os.path.join(input_dir, "power_spectrum.tsv"),
                    ("omega_T", "magnitude_sq"))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
    n = z["n"].astype(int)
    even = n % 2 == 0
    ax1.plot(n[even], z["Z"][even], ".-", color="crimson", ms=3, lw=0.7,
             label="even periods")
    ax1.plot(n[~even], z["Z"][~even], ".-", color="royalblue", ms=3, lw=0.7,
             label="odd periods")
    ax1.set_xlabel(r"$n$  (periods)")
    ax1.set_ylabel(r"$Z(nT)$")
    ax1.set_ylim(-1.1, 1.1)
    ax1.legend(loc="center right", fontsize=8)
    ax2.plot(ps["omega_T"] / np.pi, ps["magnitude_sq"], color="k", lw=0.9)
    ax2.axvline(1.0, color="crimson", ls=":", lw=0.8)
    ax2.set_xlabel(r"$\omega T/\pi$")
    ax2.set_ylabel(r"$|\tilde{Z}(\omega)|^2$")
    ax2.set_yscale("log")
    fig.tight_layout()
    fig.savefig(output_path, dpi=180)
    plt.close(fig)


def render_braid(input_dir, output_path):
    tab = read_table(os.path.join(input_dir, "correlations.tsv"),
                     ("period", "c_AA", "c_BB", "c_AB", "c_BA"))
    summary = read_summary(os.path.join(input_dir, "summary.txt"))
    fig, ax = plt.subplots(figsize=(6.5, 3.4))
    styles = {
        "c_AA": dict(color="royalblue", label=r"$\langle i\gamma_L^A(t)\gamma_R^A\rangle$"),
        "c_BB": dict(color="seagreen", label=r"$\langle i\gamma_L^B(t)\gamma_R^B\rangle$"),
        "c_AB": dict(color="crimson", label=r"$\langle i\gamma_L^A(t)\gamma_R^B\rangle$"),
        "c_BA": dict(color="darkorange", label=r"$\langle i\gamma_L^B(t)\gamma_R^A\rangle$"),
    }
    for key, st in styles.items():
        ax.plot(tab["period"], tab[key], lw=1.0, **st)
    if "stage_boundaries" in summary:
        marks = [int(x) for x in summary["stage_boundaries"].split(",")]
        for x in marks[:3]:  # ends of the first three steps
            ax.axvline(x, color="gray", ls=":", lw=0.8)
    ax.set_xlabel("period")
    ax.set_ylabel("correlation")
    ax.set_ylim(-1.15, 1.15)
    ax.legend(fontsize=7, ncol=2, loc="lower left")
    fig.tight_layout()
    fig.savefig(output_path, dpi=180)
    plt.close(fig)


def render_sweep(input_dir, output_path):
    tab = read_table(os.path.join(input_dir, "spectrum.tsv"),
                     ("grid_value", "phase", "edge_flag"))
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    bulk = tab["edge_flag"] == 0
    upper = bulk & (tab["phase"] >= 0)
    lower = bulk & (tab["phase"] < 0)
    ax.plot(tab["grid_value"][upper], tab["phase"][upper], ".", color="crimson", ms=2)
    ax.plot(tab["grid_value"][lower], tab["phase"][lower], ".", color="royalblue", ms=2)
    edge = ~bulk
    ax.plot(tab["grid_value"][edge], tab["phase"][edge], ".", color="k", ms=5,
            label="edge modes")
    ax.set_xlabel("swept parameter value")
    ax.set_ylabel("eigenphase")
    ax.set_ylim(-np.pi * 1.05, np.pi * 1.05)
    ax.legend(fontsize=8, loc="upper right")
    fig.tight_layout()
    fig.savefig(output_path, dpi=180)
    plt.close(fig)


RENDERERS = {"dtc": render_dtc, "braid": render_braid, "sweep": render_sweep}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("figure", choices=sorted(RENDERERS))
    parser.add_argument("input_dir")
    parser.add_argument("output_path")
    args = parser.parse_args(argv)
    try:
        RENDERERS[args.figure](args.input_dir, args.output_path)
    except FigureInputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
