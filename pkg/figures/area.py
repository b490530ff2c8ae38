#!/usr/bin/env python3
"""Plot final populations against the total pulse area from an area-scan
CSV (columns A,P1,P2,P3,Pi)."""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COLUMNS = ["A", "P1", "P2", "P3", "Pi"]


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
    data = [[float(r[i]) for i in idx] for r in rows[1:]]
    if not data:
        raise ValueError(f"{path}: no data rows")
    return list(zip(*data))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="src", required=True, help="area-scan CSV")
    ap.add_argument("--out", dest="dst", required=True, help="image path")
    args = ap.parse_args()

    try:
        a, p1, p2, p3, pi = read_scan(args.src, COLUMNS)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(a, p1, label="$P_1$")
    ax.plot(a, p2, label="$P_2$", linestyle="--")
    ax.plot(a, p3, label="$P_3$", linestyle="-.")
    ax.plot(a, pi, label="$P_i$", linestyle=":")
    ax.axhline(1 / 3, color="gray", linewidth=0.6, alpha=0.6)
    ax.set_xlabel("pulse area $A$")
    ax.set_ylabel("final populations")
    ax.set_xlim(min(a), max(a))
    ax.set_ylim(0, 1)
    ax.legend(loc="center right")
    fig.tight_layout()
    fig.savefig(args.dst, dpi=150)
    return 0


if __name__ == "__main__":
    sys.exit(main())
