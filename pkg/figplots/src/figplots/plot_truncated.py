"""Entropy of the capped-bond run with a log-scale spectrum inset.

Usage: plot-truncated fig3.csv rdm_spectrum.csv [--out image.png]
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import SchemaError, floats, load_columns


def build_figure(run, spectrum):
    t = floats(run["t"])
    entropy = floats(run["S"])
    spec_t = floats(spectrum["t"])
    spec_idx = [int(v) for v in spectrum["index"]]
    spec_val = floats(spectrum["lambda_sq"])

    fig, ax = plt.subplots(figsize=(6.5, 4.5), constrained_layout=True)
    ax.plot(t, entropy, marker="o", markersize=3, color="tab:blue")
    ax.set_xlabel("t")
    ax.set_ylabel("S")
    ax.grid(alpha=0.3)

    inset = ax.inset_axes([0.52, 0.12, 0.44, 0.5])
    floor = 1e-30
    for snapshot in sorted(set(spec_t)):
        xs = [i for i, tv in zip(spec_idx, spec_t) if tv == snapshot]
        ys = [max(v, floor) for v, tv in zip(spec_val, spec_t) if tv == snapshot]
        order = sorted(range(len(xs)), key=xs.__getitem__)
        inset.semilogy(
            [xs[i] for i in order],
            [ys[i] for i in order],
            marker=".",
            markersize=3,
            label=f"t={snapshot:g}",
        )
    inset.set_xlabel("index", fontsize=7)
    inset.set_ylabel(r"$\lambda^2$", fontsize=7)
    inset.tick_params(labelsize=6)
    inset.legend(fontsize=5, frameon=False)
    return fig


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Plot the capped-bond entropy curve with a spectrum inset."
    )
    parser.add_argument("run_csv", help="fig3.csv with columns t,S")
    parser.add_argument(
        "spectrum_csv", help="rdm_spectrum.csv with columns t,index,lambda_sq"
    )
    parser.add_argument("--out", default=None, help="output PNG path")
    args = parser.parse_args(argv)
    out = Path(args.out) if args.out else Path(args.run_csv).with_suffix(".png")
    try:
        run = load_columns(args.run_csv, ("t", "S"))
        spectrum = load_columns(args.spectrum_csv, ("t", "index", "lambda_sq"))
        fig = build_figure(run, spectrum)
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
