"""Entropy and energy error per eigenstate label from fig2.csv.

Usage: plot-eigenstates fig2.csv [--out image.png]
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import SchemaError, floats, load_columns


def build_figure(data):
    labels = data["label"]
    entropy = floats(data["S"])
    de_idx, de = floats(data["dE"], skip_empty=True)
    x = list(range(len(labels)))

    fig, (top, bottom) = plt.subplots(
        2, 1, sharex=True, figsize=(7.0, 5.5), constrained_layout=True
    )
    top.plot(x, entropy, marker="s", markersize=4, linestyle="none",
             color="tab:blue")
    top.set_ylabel("S")
    top.grid(alpha=0.3)

    if de:
        floor = 1e-18
        bottom.semilogy(
            [x[i] for i in de_idx],
            [max(v, floor) for v in de],
            marker="s",
            markersize=4,
            linestyle="none",
            color="tab:red",
        )
    bottom.set_ylabel(r"$\Delta E$")
    bottom.set_xlabel("eigenstate label")
    bottom.set_xticks(x)
    bottom.set_xticklabels(labels, rotation=70, fontsize=7)
    bottom.grid(alpha=0.3)
    return fig


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Plot per-label entropy and energy error."
    )
    parser.add_argument("csv", help="fig2.csv with columns label,S,dE")
    parser.add_argument("--out", default=None, help="output PNG path")
    args = parser.parse_args(argv)
    out = Path(args.out) if args.out else Path(args.csv).with_suffix(".png")
    try:
        data = load_columns(args.csv, ("label", "S", "dE"))
        fig = build_figure(data)
        fig.savefig(out, dpi=150)
        plt.close(fig)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not out.exists() or out.stat().st_size == 0:
        print(f"error: failed to write {out}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
