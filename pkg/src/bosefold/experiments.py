"""The numerical experiments behind the command-line entry points.

Four runs, each writing CSV artifacts (UTF-8, header row, '.' decimal
separator, floats with 17 significant digits):

* quench      -- ring chain started from one boson per site, evolved, folded
                 and unfolded to an MPS; entropy plus fidelity error against
                 the dense oracle.  -> fig1.csv
* eigenstates -- products of analytic ring eigenmodes for every occupation
                 partition; entropy and energy error.  -> fig2.csv
* truncated   -- the quench at fixed bond cap with no oracle, plus Schmidt
                 spectra at selected times.  -> fig3.csv, rdm_spectrum.csv
* roundtrip   -- seeded random mode sets folded and unfolded, checked against
                 the dense construction.  -> roundtrip.csv
"""

import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fock, mps
from .errors import BasisSizeError
from .folding import fold, unfold_to_mps
from .modes import ModeSet, random_mode_set, site_modes
from .sbdynamics import propagate_modes, reference_ring_eigensystem, ring_hamiltonian

ROUNDTRIP_CASES = 100
ROUNDTRIP_FAIL_TOL = 1e-8


@dataclass
class ExperimentConfig:
    """Knobs shared by the experiment commands; chi_cap 0 means unbounded."""

    n_sites: int = 8
    n_bosons: int = 8
    t_max: float = 10.0
    dt: float = 0.25
    chi_cap: int = 0
    seed: int = 0
    out_dir: Path = field(default_factory=lambda: Path("."))
    oracle_budget: int = fock.DEFAULT_DENSE_DIM
    basis_budget: int = fock.DEFAULT_BASIS_BUDGET

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if self.n_sites < 2:
            raise ValueError("need at least two sites")
        if self.n_bosons < 1:
            raise ValueError("need at least one boson")
        if self.t_max < 0.0:
            raise ValueError("t_max must be nonnegative")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.chi_cap < 0:
            raise ValueError("chi_cap must be >= 0 (0 = unbounded)")

    @property
    def chi(self):
        """chi_cap in engine form: None for unbounded."""
        return None if self.chi_cap == 0 else self.chi_cap

    def times(self):
        steps = int(np.floor(self.t_max / self.dt + 1e-9))
        return [i * self.dt for i in range(steps + 1)]


def _fmt(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _quench_oracle(cfg, hamiltonian_matrix):
    """Dense basis, operator and initial state, or None when over budget."""
    size = fock.basis_size(cfg.n_sites, cfg.n_bosons)
    if size > min(cfg.oracle_budget, cfg.basis_budget):
        print(
            f"warning: oracle basis of {size} states exceeds the budget; "
            "running MPS-only with an empty delta column",
            file=sys.stderr,
        )
        return None
    basis = fock.enumerate_basis(cfg.n_sites, cfg.n_bosons, max_states=cfg.basis_budget)
    operator = fock.build_hamiltonian(hamiltonian_matrix, basis, max_dim=cfg.oracle_budget)
    psi0 = fock.basis_state(basis, (1,) * cfg.n_sites)
    return basis, operator, psi0


def _require_uniform_filling(cfg):
    if cfg.n_bosons != cfg.n_sites:
        raise ValueError(
            "the quench starts from one boson per site, so it needs "
            f"n_bosons == n_sites (got {cfg.n_bosons} != {cfg.n_sites})"
        )


def run_quench(cfg):
    """Entropy and oracle fidelity error along the ring quench -> fig1.csv."""
    _require_uniform_filling(cfg)
    h = ring_hamiltonian(cfg.n_sites)
    start = site_modes(cfg.n_sites)
    oracle = _quench_oracle(cfg, h)
    rows = []
    discarded_total = 0.0  # running sum: each time point is built from scratch
    for t in cfg.times():
        evolved = propagate_modes(h, t, start)
        state = unfold_to_mps(fold(evolved), chi_cap=cfg.chi)
        ent = mps.entropy(state, 1)
        discarded_total += state.discarded_weight
        if oracle is not None:
            basis, operator, psi0 = oracle
            psi_t = fock.evolve(psi0, operator, t)
            delta = 1.0 - abs(mps.overlap(state, psi_t)) ** 2
        else:
            delta = ""
        rows.append(
            (t, ent, delta, state.max_bond_dimension(), discarded_total)
        )
    return write_csv(
        cfg.out_dir / "fig1.csv",
        ("t", "S", "delta", "chi_max", "discarded_weight"),
        rows,
    )


def partitions(total, max_parts, max_value=None):
    """Integer partitions of ``total`` into at most ``max_parts`` parts,
    descending parts, generated in reverse lexicographic order."""
    if max_value is None:
        max_value = total

    def _gen(remaining, cap, slots):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in _gen(remaining - first, first, slots - 1):
                yield (first,) + rest

    return list(_gen(total, max_value, max_parts))


def partition_label(parts):
    """Caption-style label: ascending parts, concatenated digits when all
    parts are below ten, comma-separated otherwise."""
    ascending = sorted(parts)
    if all(p < 10 for p in ascending):
        return "".join(str(p) for p in ascending)
    return ",".join(str(p) for p in ascending)


def run_eigenstates(cfg):
    """Entropy and energy error of eigenmode-product states -> fig2.csv."""
    h = ring_hamiltonian(cfg.n_sites)
    eig = reference_ring_eigensystem(cfg.n_sites)
    size = fock.basis_size(cfg.n_sites, cfg.n_bosons)
    oracle = None
    if size <= min(cfg.oracle_budget, cfg.basis_budget):
        basis = fock.enumerate_basis(
            cfg.n_sites, cfg.n_bosons, max_states=cfg.basis_budget
        )
        oracle = (basis, fock.build_hamiltonian(h, basis, max_dim=cfg.oracle_budget))
    else:
        print(
            f"warning: oracle basis of {size} states exceeds the budget; "
            "running MPS-only with an empty dE column",
            file=sys.stderr,
        )
    rows = []
    for parts in partitions(cfg.n_bosons, cfg.n_sites):
        n_modes = len(parts)
        modeset = ModeSet(cfg.n_sites, parts, eig.vectors[:, :n_modes])
        state = unfold_to_mps(fold(modeset), chi_cap=cfg.chi)
        ent = mps.entropy(state, 1)
        if oracle is not None:
            basis, operator = oracle
            dense = mps.to_dense(state, basis=basis)
            energy = fock.energy_expectation(dense, operator)
            target = float(sum(n * e for n, e in zip(parts, eig.values)))
            d_energy = abs(energy - target)
        else:
            d_energy = ""
        rows.append((partition_label(parts), ent, d_energy))
    return write_csv(cfg.out_dir / "fig2.csv", ("label", "S", "dE"), rows)


def _spectrum_dump_indices(n_times):
    picks = {n_times // 4, n_times // 2, (3 * n_times) // 4, n_times - 1}
    return sorted(i for i in picks if 0 <= i < n_times)


def run_truncated(cfg):
    """Capped-bond quench -> fig3.csv plus bond-1 spectra -> rdm_spectrum.csv."""
    _require_uniform_filling(cfg)
    h = ring_hamiltonian(cfg.n_sites)
    start = site_modes(cfg.n_sites)
    times = cfg.times()
    dump_at = set(_spectrum_dump_indices(len(times)))
    rows = []
    spectrum_rows = []
    discarded_total = 0.0  # running sum across time points, as in run_quench
    for i, t in enumerate(times):
        evolved = propagate_modes(h, t, start)
        state = unfold_to_mps(fold(evolved), chi_cap=cfg.chi)
        discarded_total += state.discarded_weight
        rows.append((t, mps.entropy(state, 1), discarded_total))
        if i in dump_at:
            for rank, weight in enumerate(mps.schmidt_spectrum(state, 1)):
                spectrum_rows.append((t, rank, float(weight)))
    fig3 = write_csv(
        cfg.out_dir / "fig3.csv", ("t", "S", "discarded_weight"), rows
    )
    spectrum = write_csv(
        cfg.out_dir / "rdm_spectrum.csv", ("t", "index", "lambda_sq"), spectrum_rows
    )
    return fig3, spectrum


def roundtrip_case(case_seed):
    """One seeded fold/unfold fidelity check against the dense construction."""
    rng = np.random.default_rng(case_seed)
    n_sites = int(rng.integers(2, 7))
    n_bosons = int(rng.integers(1, 5))
    n_modes = int(rng.integers(1, min(n_sites, n_bosons) + 1))
    modeset = random_mode_set(rng, n_sites, n_modes, n_bosons)
    state = unfold_to_mps(fold(modeset))
    basis = fock.enumerate_basis(n_sites, n_bosons)
    reference = fock.apply_mode_polynomial(modeset, basis)
    delta = 1.0 - abs(mps.overlap(state, reference)) ** 2
    return n_sites, n_bosons, n_modes, float(delta)


def run_roundtrip(cfg, cases=ROUNDTRIP_CASES):
    """Fold/unfold fuzz harness -> roundtrip.csv; returns the worst delta."""
    rows = []
    worst = 0.0
    for i in range(cases):
        case_seed = cfg.seed + i
        n_sites, n_bosons, n_modes, delta = roundtrip_case(case_seed)
        worst = max(worst, delta)
        rows.append((case_seed, n_sites, n_bosons, n_modes, delta))
    path = write_csv(
        cfg.out_dir / "roundtrip.csv",
        ("seed", "N", "M", "Nprime", "delta"),
        rows,
    )
    return path, worst
