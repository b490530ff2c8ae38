#!/usr/bin/env python3
"""Render transfer-probability heatmaps over the static-detuning plane,
one panel per control rate, from a detuning-grid CSV (columns
gamma3,delta_sum,delta_diff,P1,P2,P3,Pi).  Each panel annotates the grid
argmax of P2."""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COLUMNS = ["gamma3", "delta_sum", "delta_diff", "P2"]


def read_scan(path, columns):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header = rows[0]
    missing = [c for c in columns if c not in header]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")
    idx = [header.index(c) for c in columns]
    data = np.array([[float(r[i]) for i in idx] for r in rows[1:]])
    if data.size == 0:
        raise ValueError(f"{path}: no data rows")
    return data


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="src", required=True,
                    help="detuning-grid CSV")
    ap.add_argument("--out", dest="dst", required=True, help="image path")
    args = ap.parse_args()

    try:
        data = read_scan(args.src, COLUMNS)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    gamma3_values = sorted(set(data[:, 0]))
    fig, axes = plt.subplots(1, len(gamma3_values),
                             figsize=(4.2 * len(gamma3_values), 4.0),
                             squeeze=False, sharey=True)
    for ax, g3 in zip(axes[0], gamma3_values):
        block = data[data[:, 0] == g3]
        sums = np.unique(block[:, 1])
        diffs = np.unique(block[:, 2])
        # rows come in lexicographic (sum, diff) order
        grid = block[:, 3].reshape(len(sums), len(diffs))
        mesh = ax.pcolormesh(sums, diffs, grid.T, shading="nearest",
                             vmin=0.0, vmax=1.0, cmap="viridis")
        k = int(np.argmax(block[:, 3]))
        ax.plot(block[k, 1], block[k, 2], "r+", markersize=10)
        ax.annotate(f"max $P_2$ = {block[k, 3]:.3f}",
                    xy=(block[k, 1], block[k, 2]),
                    xytext=(0.03, 0.95), textcoords="axes fraction",
                    color="white", va="top")
        ax.set_title(rf"$\gamma_3 = {g3:g}\,\gamma_0$")
        ax.set_xlabel(r"$(\delta_1 + \delta_2)/\gamma_0$")
    axes[0][0].set_ylabel(r"$(\delta_1 - \delta_2)/\gamma_0$")
    fig.colorbar(mesh, ax=axes[0], label="$P_2$", fraction=0.025)
    fig.savefig(args.dst, dpi=150)
    return 0


if __name__ == "__main__":
    sys.exit(main())
