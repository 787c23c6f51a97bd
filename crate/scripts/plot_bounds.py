#!/usr/bin/env python3
"""Plot CDF bound curves written by `histtools bounds --out FILE.csv`.

    histtools bounds --m1 0.3 --var 0.05 --grid 401 --out b.csv
    python3 scripts/plot_bounds.py b.csv bounds.png

Needs matplotlib. Not used by the build or the tests.
"""

import csv
import sys

import matplotlib.pyplot as plt


def main(src, dst):
    with open(src, newline="") as f:
        rows = list(csv.DictReader(f))
    x = [float(r["x"]) for r in rows]
    lo = [float(r["lower"]) for r in rows]
    hi = [float(r["upper"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.fill_between(x, lo, hi, alpha=0.25, step=None)
    ax.plot(x, hi, label="upper")
    ax.plot(x, lo, label="lower")
    ax.set_xlabel("x (normalized bin)")
    ax.set_ylabel("F(x)")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(dst)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit("usage: plot_bounds.py BOUNDS.csv OUT.png")
    main(sys.argv[1], sys.argv[2])
