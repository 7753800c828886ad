"""Shared independent oracles for the test suite.

These helpers deliberately avoid the production code paths they are used to
check: gates are applied to dense states by direct basis bookkeeping, rotation
blocks are compared against the closed-form rotation matrix elements and a
plain Taylor exponential, and entropies come from density-matrix eigenvalues.
"""

from math import cos, factorial, sin, sqrt

import numpy as np

from bosefold import DenseState


def dense_apply_single_site(state, site, gate):
    """Apply a (d, d) single-site gate to a dense state at chain site ``site``."""
    basis = state.basis
    pos = site - 1
    out = np.zeros_like(state.amplitudes)
    gate = np.asarray(gate)
    for i, occ in enumerate(basis.states):
        amp = state.amplitudes[i]
        if amp == 0.0:
            continue
        for p_out in np.nonzero(gate[:, occ[pos]])[0]:
            target = occ[:pos] + (int(p_out),) + occ[pos + 1 :]
            out[basis.index[target]] += gate[p_out, occ[pos]] * amp
    return DenseState(basis, out)


def dense_apply_two_site(state, bond, gate_matrix):
    """Apply a (d^2, d^2) gate on chain bond ``bond`` (sites bond+1, bond).

    The combined gate index is p_left * d + p_right with the left slot holding
    the site of larger chain label, matching the MPS engine's convention.
    """
    basis = state.basis
    d = basis.n_bosons + 1
    pos_l = bond      # tuple position of site bond+1
    pos_r = bond - 1  # tuple position of site bond
    out = np.zeros_like(state.amplitudes)
    gate_matrix = np.asarray(gate_matrix)
    for i, occ in enumerate(basis.states):
        amp = state.amplitudes[i]
        if amp == 0.0:
            continue
        col = occ[pos_l] * d + occ[pos_r]
        column = gate_matrix[:, col]
        for row in np.nonzero(column)[0]:
            p_l, p_r = divmod(int(row), d)
            target = list(occ)
            target[pos_l] = p_l
            target[pos_r] = p_r
            out[basis.index[tuple(target)]] += column[row] * amp
    return DenseState(basis, out)


def rdm_entropy(rho):
    """Von Neumann entropy from density-matrix eigenvalues."""
    p = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


def wigner_d(two_j, two_mp, two_m, beta):
    """Closed-form rotation matrix element <j m'| exp(-i beta J_y) |j m>.

    Arguments are doubled so half-integer spins stay integral.
    """
    jpm = (two_j + two_m) // 2
    jmm = (two_j - two_m) // 2
    jpmp = (two_j + two_mp) // 2
    jmmp = (two_j - two_mp) // 2
    dmp = (two_mp - two_m) // 2
    pref = sqrt(
        factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm)
    )
    total = 0.0
    for s in range(max(0, -dmp), min(jpm, jmmp) + 1):
        sign = -1.0 if (dmp + s) % 2 else 1.0
        den = (
            factorial(jpm - s)
            * factorial(s)
            * factorial(dmp + s)
            * factorial(jmmp - s)
        )
        total += (
            sign
            / den
            * cos(beta / 2.0) ** (two_j - dmp - 2 * s)
            * sin(beta / 2.0) ** (dmp + 2 * s)
        )
    return pref * total


def taylor_expm(a, terms=80):
    """Matrix exponential by straight Taylor summation (small matrices only)."""
    a = np.asarray(a, dtype=complex)
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for n in range(1, terms):
        term = term @ a / n
        out = out + term
    return out
