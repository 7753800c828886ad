"""Two stacked panels from fig1.csv: entropy on top, fidelity error below.

Usage: plot-quench fig1.csv [--out image.png]
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import SchemaError, floats, load_columns


def build_figure(data):
    t = floats(data["t"])
    entropy = floats(data["S"])
    delta_idx, delta = floats(data["delta"], skip_empty=True)

    fig, (top, bottom) = plt.subplots(
        2, 1, sharex=True, figsize=(6.0, 5.0), constrained_layout=True
    )
    top.plot(t, entropy, marker="o", markersize=3, color="tab:blue")
    top.set_ylabel("S")
    top.grid(alpha=0.3)

    if delta:
        # the error hovers at machine precision; clip for the log axis
        floor = 1e-18
        bottom.semilogy(
            [t[i] for i in delta_idx],
            [max(v, floor) for v in delta],
            marker="o",
            markersize=3,
            color="tab:red",
        )
    bottom.set_ylabel(r"$\Delta$")
    bottom.set_xlabel("t")
    bottom.grid(alpha=0.3)
    return fig


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Plot entropy and fidelity error from a quench CSV."
    )
    parser.add_argument("csv", help="fig1.csv with columns t,S,delta")
    parser.add_argument("--out", default=None, help="output PNG path")
    args = parser.parse_args(argv)
    out = Path(args.out) if args.out else Path(args.csv).with_suffix(".png")
    try:
        data = load_columns(args.csv, ("t", "S", "delta"))
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
