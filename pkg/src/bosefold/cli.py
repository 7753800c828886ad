"""Command-line entry point.

    bosefold quench|eigenstates|truncated|roundtrip
             [--n INT] [--m INT] [--t-max FLOAT] [--dt FLOAT]
             [--chi INT] [--seed INT] [--out DIR] [--config FILE]

Defaults differ per command (quench/eigenstates: N=M=8, chi unbounded;
truncated: N=M=16, chi=16).  A config file holds ``key = value`` lines with
the same keys as the flags (``t-max`` or ``t_max``); explicit flags win over
the file, the file wins over the defaults.  --chi 0 means unbounded.
"""

import argparse
import sys
from pathlib import Path

from .errors import BasisSizeError, NonOrthonormalModesError
from .experiments import (
    ExperimentConfig,
    ROUNDTRIP_FAIL_TOL,
    run_eigenstates,
    run_quench,
    run_roundtrip,
    run_truncated,
)

_DEFAULTS = {
    "quench": dict(n=8, m=8, t_max=10.0, dt=0.25, chi=0, seed=0, out="."),
    "eigenstates": dict(n=8, m=8, t_max=10.0, dt=0.25, chi=0, seed=0, out="."),
    "truncated": dict(n=16, m=16, t_max=10.0, dt=0.25, chi=16, seed=0, out="."),
    "roundtrip": dict(n=8, m=8, t_max=10.0, dt=0.25, chi=0, seed=0, out="."),
}

_KEY_TYPES = {
    "n": int,
    "m": int,
    "t_max": float,
    "dt": float,
    "chi": int,
    "seed": int,
    "out": str,
}


def parse_config_file(path):
    """Read ``key = value`` lines; '#' starts a comment, blank lines ignored."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _KEY_TYPES:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _KEY_TYPES[key](value.strip())
        except ValueError:
            raise ValueError(
                f"{path}:{lineno}: bad value {value.strip()!r} for {key!r}"
            ) from None
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bosefold",
        description="Fold/unfold MPS experiments on linearly coupled boson chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("quench", "uniform-filling ring quench with oracle error (fig1.csv)"),
        ("eigenstates", "eigenmode-product entropies and energy errors (fig2.csv)"),
        ("truncated", "capped-bond quench plus Schmidt spectra (fig3.csv)"),
        ("roundtrip", "seeded fold/unfold fidelity fuzz run (roundtrip.csv)"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--n", type=int, help="number of chain sites")
        cmd.add_argument("--m", type=int, help="total number of bosons")
        cmd.add_argument("--t-max", type=float, dest="t_max", help="final time")
        cmd.add_argument("--dt", type=float, help="time step")
        cmd.add_argument("--chi", type=int, help="bond cap (0 = unbounded)")
        cmd.add_argument("--seed", type=int, help="base random seed")
        cmd.add_argument("--out", type=str, help="output directory")
        cmd.add_argument("--config", type=str, help="key=value config file")
    return parser


def resolve_config(args):
    defaults = dict(_DEFAULTS[args.command])
    if args.config:
        defaults.update(parse_config_file(args.config))
    merged = {
        key: getattr(args, key) if getattr(args, key) is not None else defaults[key]
        for key in _KEY_TYPES
    }
    return ExperimentConfig(
        n_sites=merged["n"],
        n_bosons=merged["m"],
        t_max=merged["t_max"],
        dt=merged["dt"],
        chi_cap=merged["chi"],
        seed=merged["seed"],
        out_dir=Path(merged["out"]),
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "quench":
            path = run_quench(cfg)
            print(f"wrote {path}")
        elif args.command == "eigenstates":
            path = run_eigenstates(cfg)
            print(f"wrote {path}")
        elif args.command == "truncated":
            fig3, spectrum = run_truncated(cfg)
            print(f"wrote {fig3}")
            print(f"wrote {spectrum}")
        elif args.command == "roundtrip":
            path, worst = run_roundtrip(cfg)
            print(f"wrote {path} (worst delta {worst:.3e})")
            if worst > ROUNDTRIP_FAIL_TOL:
                print(
                    f"roundtrip failure: worst delta {worst:.3e} exceeds "
                    f"{ROUNDTRIP_FAIL_TOL:.1e}",
                    file=sys.stderr,
                )
                return 1
    except (ValueError, NonOrthonormalModesError, BasisSizeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
