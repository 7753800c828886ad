"""Gate synthesis: fold a mode set to a local Fock product and back.

Folding walks the modes in order.  For mode k it first strips the complex
phases of the coefficients on sites k..N with single-site phase gates, then
sweeps two-site rotations down the chain (bonds N-1, ..., k), each chosen to
cancel the upper-site coefficient, until the mode sits entirely on site k.
Because all gates are linear in the creation operators, folding mode k also
zeroes the site-k coefficient of every later mode, so after N' blocks the
state is the plain Fock product with n_q bosons at site q.

Unfolding applies the inverse gates to that product in reverse block order
(k = N' down to 1; within a block the rotations ascend the bonds k..N-1 and
the phases follow), reconstructing the original state.  Driving this sequence
through the MPS engine yields the tensor representation directly.
"""

import json
from dataclasses import dataclass
from math import atan2, cos, sin

import numpy as np

from .errors import NonOrthonormalModesError
from . import mps as mps_mod

# Gates with angles below this are recorded for auditability but skipped when
# the sequence is applied to an MPS (they are numerically the identity).
GATE_PRUNE_TOL = 1e-14


@dataclass(frozen=True)
class PhaseGate:
    """Single-site phase, recorded while folding mode ``mode`` at site ``site``."""

    site: int
    angle: float
    mode: int


@dataclass(frozen=True)
class RotationGate:
    """Two-site rotation on chain bond ``bond`` (sites bond+1 and bond)."""

    bond: int
    angle: float
    mode: int


class GateSequence:
    """Ordered fold gates plus the residual occupations they leave behind.

    Gates are stored in folding order: for each mode k the phases on sites
    k..N, then the rotations on bonds N-1 down to k.  The residual is the
    product Fock state with ``residual_occupations[q-1]`` bosons at site q.
    """

    def __init__(self, n_sites, n_bosons, gates, residual_occupations):
        self.n_sites = int(n_sites)
        self.n_bosons = int(n_bosons)
        self.gates = tuple(gates)
        self.residual_occupations = tuple(int(n) for n in residual_occupations)
        if any(n < 1 for n in self.residual_occupations):
            raise ValueError("residual occupations must be positive")
        if sum(self.residual_occupations) != self.n_bosons:
            raise ValueError(
                f"residual occupations sum to {sum(self.residual_occupations)}, "
                f"expected {self.n_bosons}"
            )
        if len(self.residual_occupations) > self.n_sites:
            raise ValueError("more residual modes than sites")
        for g in self.gates:
            if not np.isfinite(g.angle):
                raise ValueError(f"non-finite angle in {g}")
            if isinstance(g, RotationGate):
                if not 1 <= g.bond <= self.n_sites - 1:
                    raise ValueError(f"bond out of range in {g}")
                if not 0.0 <= g.angle <= np.pi:
                    raise ValueError(f"rotation angle outside [0, pi] in {g}")
            else:
                if not 1 <= g.site <= self.n_sites:
                    raise ValueError(f"site out of range in {g}")
                if not -np.pi < g.angle <= np.pi:
                    raise ValueError(f"phase angle outside (-pi, pi] in {g}")

    @property
    def n_modes(self):
        return len(self.residual_occupations)

    def rotations(self):
        return [g for g in self.gates if isinstance(g, RotationGate)]

    def phases(self):
        return [g for g in self.gates if isinstance(g, PhaseGate)]

    def __len__(self):
        return len(self.gates)

    def __repr__(self):
        return (
            f"GateSequence(n_sites={self.n_sites}, n_bosons={self.n_bosons}, "
            f"modes={self.n_modes}, gates={len(self.gates)})"
        )


def fold(modes, tol=1e-8):
    """Synthesize the gate sequence reducing ``modes`` to a local Fock product.

    Works on a private copy of the coefficient matrix.  For each mode k
    (1-based, in the order given):

    * phases: for sites l = k..N record phi = arg(c[l, k]) and multiply row l
      of every column by exp(-i phi), making column k real nonnegative;
    * rotations: for bonds j = N-1 down to k record
      theta = 2 atan2(|c[j+1, k]|, |c[j, k]|) and rotate rows (j+1, j) of
      every column by the half-angle, which cancels the (j+1, k) entry.

    atan2 covers the singular branches of the tangent condition: a vanishing
    lower coefficient gives theta = pi, a vanishing pair gives theta = 0.
    """
    dev = modes.gram_deviation()
    if dev > tol:
        raise NonOrthonormalModesError(
            f"mode columns deviate from orthonormality by {dev:.3e}; fold "
            "requires commuting (orthonormal) modes -- overlapping sets would "
            "need auxiliary purification modes, which are out of scope"
        )
    n = modes.n_sites
    work = np.array(modes.coefficients, dtype=complex)
    gates = []
    for k0 in range(modes.n_modes):
        for l0 in range(k0, n):
            phi = float(np.angle(work[l0, k0]))
            if phi == -np.pi:  # negative-zero imaginary part; fold onto +pi
                phi = np.pi
            gates.append(PhaseGate(site=l0 + 1, angle=phi, mode=k0 + 1))
            if phi != 0.0:
                work[l0, :] *= np.exp(-1j * phi)
        for j0 in range(n - 2, k0 - 1, -1):
            lower = abs(work[j0, k0])
            upper = abs(work[j0 + 1, k0])
            theta = 2.0 * atan2(upper, lower)
            gates.append(RotationGate(bond=j0 + 1, angle=theta, mode=k0 + 1))
            if theta != 0.0:
                half_c = cos(0.5 * theta)
                half_s = sin(0.5 * theta)
                row_up = work[j0 + 1, :].copy()
                work[j0 + 1, :] = half_c * row_up - half_s * work[j0, :]
                work[j0, :] = half_s * row_up + half_c * work[j0, :]
    n_modes = modes.n_modes
    assert sum(isinstance(g, RotationGate) for g in gates) == sum(
        n - k for k in range(1, n_modes + 1)
    )
    assert sum(isinstance(g, PhaseGate) for g in gates) == sum(
        n - k + 1 for k in range(1, n_modes + 1)
    )
    return GateSequence(n, modes.n_bosons, gates, modes.occupations)


def unfold_gate_order(sequence):
    """Application order that rebuilds the state from the residual Fock product.

    Blocks run k = N' down to 1; inside a block the rotations come first with
    ascending bonds k..N-1 (the reverse of folding), then the phases.  Each
    gate is applied with its recorded angle and the inverse generator sign,
    which is exactly what ``rotation_gate`` / ``phase_gate`` implement.
    """
    by_mode = {}
    for g in sequence.gates:
        by_mode.setdefault(g.mode, []).append(g)
    ordered = []
    for k in range(sequence.n_modes, 0, -1):
        block = by_mode.get(k, [])
        rotations = sorted(
            (g for g in block if isinstance(g, RotationGate)), key=lambda g: g.bond
        )
        phases = sorted(
            (g for g in block if isinstance(g, PhaseGate)), key=lambda g: g.site
        )
        ordered.extend(rotations)
        ordered.extend(phases)
    return ordered


def unfold_to_mps(sequence, chi_cap=None, prune_tol=GATE_PRUNE_TOL):
    """Run the unfold gates through the MPS engine.

    Starts from the residual product state (n_q bosons at site q) and applies
    ``unfold_gate_order``.  With ``chi_cap=None`` nothing is truncated and the
    result is exact up to floating error.
    """
    n = sequence.n_sites
    m = sequence.n_bosons
    occupations = [0] * n
    for q, nq in enumerate(sequence.residual_occupations):
        occupations[q] = nq
    state = mps_mod.mps_from_fock(occupations, m, chi_cap=chi_cap)
    for g in unfold_gate_order(sequence):
        if abs(g.angle) < prune_tol:
            continue
        if isinstance(g, RotationGate):
            mps_mod.apply_two_site(state, g.bond, mps_mod.rotation_gate(g.angle, m))
        else:
            mps_mod.apply_single_site(state, g.site, mps_mod.phase_gate(g.angle, m))
    return state


# -- JSON wire format ---------------------------------------------------------
#
# {"n_sites": N, "n_bosons": M, "residual_occupations": [...],
#  "gates": [{"kind": "phase", "site": l, "angle": a, "mode": k},
#            {"kind": "rotation", "bond": j, "angle": a, "mode": k}, ...]}
#
# Angles are radians written as 17-significant-digit decimals, which
# round-trip IEEE doubles exactly.


def _angle_repr(x):
    return format(float(x), ".17g")


def gates_to_json(sequence):
    parts = [
        f'"n_sites": {sequence.n_sites}',
        f'"n_bosons": {sequence.n_bosons}',
        '"residual_occupations": [{}]'.format(
            ", ".join(str(n) for n in sequence.residual_occupations)
        ),
    ]
    gate_objs = []
    for g in sequence.gates:
        if isinstance(g, PhaseGate):
            gate_objs.append(
                f'{{"kind": "phase", "site": {g.site}, '
                f'"angle": {_angle_repr(g.angle)}, "mode": {g.mode}}}'
            )
        else:
            gate_objs.append(
                f'{{"kind": "rotation", "bond": {g.bond}, '
                f'"angle": {_angle_repr(g.angle)}, "mode": {g.mode}}}'
            )
    parts.append('"gates": [{}]'.format(", ".join(gate_objs)))
    return "{" + ", ".join(parts) + "}"


def gates_from_json(text):
    doc = json.loads(text)
    gates = []
    for item in doc["gates"]:
        kind = item["kind"]
        if kind == "phase":
            gates.append(
                PhaseGate(site=int(item["site"]), angle=float(item["angle"]),
                          mode=int(item["mode"]))
            )
        elif kind == "rotation":
            gates.append(
                RotationGate(bond=int(item["bond"]), angle=float(item["angle"]),
                             mode=int(item["mode"]))
            )
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
    return GateSequence(
        doc["n_sites"], doc["n_bosons"], gates, doc["residual_occupations"]
    )
