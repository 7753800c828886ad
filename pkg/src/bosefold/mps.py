"""Schmidt-explicit (Vidal-form) MPS engine for a fixed number of bosons.

Storage conventions
-------------------
Chain sites are labeled 1..N with site 1 at the *right* end of the chain.
Internally tensors live in an array ordered left to right, so storage index
``i`` holds chain site ``n = N - i`` (site N first, site 1 last).

``gammas[i]`` has shape ``(chi_left, d, chi_right)`` with local dimension
``d = M + 1`` (occupations 0..M).  ``lambdas[k]`` is the Schmidt vector on the
cut between storage indices ``k-1`` and ``k``; the boundary vectors
``lambdas[0]`` and ``lambdas[N]`` are the trivial ``[1.0]``.  Chain bond ``n``
(the cut between sites n+1 and n, with bond 1 separating site 1 from the rest)
is ``lambdas[N - n]``.

Every public operation takes chain labels; only this module translates.
"""

from dataclasses import dataclass
from typing import NamedTuple

import json
import numpy as np
import scipy.linalg

from .errors import BasisSizeError
from . import fock

# Relative threshold below which singular values count as zero, and the
# cutoff under which environment Schmidt values are pseudo-inverted to zero.
SVD_ZERO_RTOL = 1e-14
LAMBDA_INV_CUTOFF = 1e-12


class MpsState:
    """Mutable MPS with explicit Schmidt vectors on every bond."""

    def __init__(self, n_sites, n_bosons, gammas, lambdas, chi_cap=None,
                 discarded_weight=0.0):
        if len(gammas) != n_sites or len(lambdas) != n_sites + 1:
            raise ValueError("need one gamma per site and one lambda per cut")
        if chi_cap is not None and chi_cap < 1:
            raise ValueError("chi_cap must be positive (or None for unbounded)")
        self.n_sites = int(n_sites)
        self.n_bosons = int(n_bosons)
        self.gammas = list(gammas)
        self.lambdas = list(lambdas)
        self.chi_cap = chi_cap
        self.discarded_weight = float(discarded_weight)

    @property
    def local_dim(self):
        return self.n_bosons + 1

    def bond_dimensions(self):
        """Schmidt ranks on the interior cuts, listed for chain bonds 1..N-1."""
        return [len(self.lambdas[self.n_sites - n]) for n in range(1, self.n_sites)]

    def max_bond_dimension(self):
        dims = self.bond_dimensions()
        return max(dims) if dims else 1

    def copy(self):
        return MpsState(
            self.n_sites,
            self.n_bosons,
            [g.copy() for g in self.gammas],
            [l.copy() for l in self.lambdas],
            self.chi_cap,
            self.discarded_weight,
        )


def _svd(matrix):
    # The divide-and-conquer LAPACK driver occasionally fails to converge on
    # matrices whose singular values span many orders of magnitude; retry with
    # the slower but dependable QR-based driver.
    try:
        return np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(matrix, full_matrices=False, lapack_driver="gesvd")


class UpdateInfo(NamedTuple):
    """Bookkeeping returned by a two-site update."""

    total_weight: float      # sum of squared singular values before truncation
    discarded: float         # squared weight dropped by this update
    rank: int                # Schmidt rank kept on the updated bond


@dataclass(frozen=True)
class TwoSiteGate:
    """Dense unitary on two neighboring sites, block-diagonal in total occupation.

    ``matrix`` is (d^2, d^2) with the row-major combined index
    ``p_left * d + p_right``, where the left slot is the site with the larger
    chain label (the leftmost of the pair in storage order).
    """

    matrix: np.ndarray
    n_bosons: int


def mps_from_fock(occupations, n_bosons, chi_cap=None):
    """Product Fock state as an MPS: trivial rank-1 Schmidt data on every cut.

    ``occupations[l-1]`` is the boson count at chain site l.
    """
    occ = tuple(int(p) for p in occupations)
    n = len(occ)
    if n < 1:
        raise ValueError("need at least one site")
    if any(p < 0 for p in occ):
        raise ValueError("occupations must be nonnegative")
    if sum(occ) != n_bosons:
        raise ValueError(
            f"occupations sum to {sum(occ)}, expected {n_bosons} bosons"
        )
    d = n_bosons + 1
    gammas = []
    for i in range(n):
        g = np.zeros((1, d, 1), dtype=complex)
        g[0, occ[n - 1 - i], 0] = 1.0
        gammas.append(g)
    lambdas = [np.ones(1) for _ in range(n + 1)]
    return MpsState(n, n_bosons, gammas, lambdas, chi_cap)


def phase_gate(phi, n_bosons):
    """Diagonal single-site gate exp(i phi n_hat): entry exp(i phi p) at p."""
    p = np.arange(n_bosons + 1)
    return np.diag(np.exp(1j * float(phi) * p))


def rotation_blocks(theta, n_bosons):
    """Fixed-total blocks of the two-site rotation exp(i theta J^y).

    ``J^y = (a_L^dag a_R - a_R^dag a_L) / 2i`` acts on the pair of sites, with
    L the site of larger chain label.  Inside the block of total occupation
    ``n_tot`` (basis ordered by p_L = 0..n_tot) the generator ``i J^y`` is a
    real antisymmetric tridiagonal matrix, so the exponential is real
    orthogonal: the spin-(n_tot/2) rotation matrix.  Each block is obtained by
    eigendecomposition of the Hermitian restriction of J^y.
    """
    theta = float(theta)
    blocks = []
    for ntot in range(n_bosons + 1):
        dim = ntot + 1
        jy = np.zeros((dim, dim), dtype=complex)
        for p in range(ntot):
            amp = 0.5 * np.sqrt((p + 1.0) * (ntot - p))
            jy[p + 1, p] = -1j * amp
            jy[p, p + 1] = 1j * amp
        w, v = np.linalg.eigh(jy)
        block = (v * np.exp(1j * theta * w)) @ v.conj().T
        blocks.append(block.real)
    return blocks


def rotation_gate(theta, n_bosons):
    """Assemble exp(i theta J^y) on the full two-site space.

    Sectors with combined occupation above the global boson count are
    unreachable for number-conserving states and are left as the identity,
    which keeps the full matrix unitary.
    """
    d = n_bosons + 1
    g = np.eye(d * d)
    for ntot, block in enumerate(rotation_blocks(theta, n_bosons)):
        for p_out in range(ntot + 1):
            row = p_out * d + (ntot - p_out)
            for p_in in range(ntot + 1):
                col = p_in * d + (ntot - p_in)
                g[row, col] = block[p_out, p_in]
    return TwoSiteGate(matrix=g, n_bosons=n_bosons)


def apply_single_site(state, site, gate):
    """Contract a d x d gate into one site; Schmidt data is untouched."""
    if not 1 <= site <= state.n_sites:
        raise ValueError(f"site {site} outside 1..{state.n_sites}")
    gate = np.asarray(gate)
    d = state.local_dim
    if gate.shape != (d, d):
        raise ValueError(f"gate must be {d}x{d}, got {gate.shape}")
    i = state.n_sites - site
    state.gammas[i] = np.einsum("pq,aqb->apb", gate, state.gammas[i])


def apply_two_site(state, bond, gate):
    """Apply a TwoSiteGate on chain bond j (sites j+1 and j) and re-canonicalize.

    Standard Schmidt-explicit update: contract the neighborhood
    lambda Gamma lambda Gamma lambda into a two-site tensor, apply the gate,
    SVD, truncate to the cap, renormalize the new Schmidt vector and divide the
    environment Schmidt values back out with a pseudo-inverse cutoff.

    Rows and columns of the matrix that are exactly zero (structural zeros from
    number conservation) are trimmed before the SVD and restored afterwards;
    this is exact and only saves work.
    """
    n = state.n_sites
    if not 1 <= bond <= n - 1:
        raise ValueError(f"bond {bond} outside 1..{n - 1}")
    d = state.local_dim
    mat = gate.matrix if isinstance(gate, TwoSiteGate) else np.asarray(gate)
    if mat.shape != (d * d, d * d):
        raise ValueError(f"gate must be {d * d}x{d * d}, got {mat.shape}")

    i_left = n - bond - 1
    i_right = i_left + 1
    lam_l = state.lambdas[i_left]
    lam_r = state.lambdas[i_right + 1]
    g_left = state.gammas[i_left]
    g_right = state.gammas[i_right]
    chi_l = g_left.shape[0]
    chi_r = g_right.shape[2]

    theta = (lam_l[:, None, None] * g_left) * state.lambdas[i_left + 1][None, None, :]
    theta = np.tensordot(theta, g_right, axes=(2, 0))       # (chi_l, d, d, chi_r)
    theta = theta * lam_r[None, None, None, :]
    theta = theta.reshape(chi_l, d * d, chi_r)
    theta = np.tensordot(mat, theta, axes=([1], [1])).transpose(1, 0, 2)
    m = theta.reshape(chi_l, d, d, chi_r).reshape(chi_l * d, d * chi_r)

    row_mask = np.abs(m).sum(axis=1) > 0.0
    col_mask = np.abs(m).sum(axis=0) > 0.0
    if not row_mask.any():
        raise ValueError("two-site tensor vanished; the state is not physical")
    sub = m[np.ix_(row_mask, col_mask)]

    u, s, vh = _svd(sub)
    total = float(s @ s)
    cutoff = SVD_ZERO_RTOL * s[0]
    rank = max(int(np.count_nonzero(s > cutoff)), 1)
    if state.chi_cap is not None:
        rank = min(rank, state.chi_cap)
    kept = s[:rank]
    kept_weight = float(kept @ kept)
    state.discarded_weight += total - kept_weight

    u_full = np.zeros((chi_l * d, rank), dtype=complex)
    u_full[row_mask] = u[:, :rank]
    vh_full = np.zeros((rank, d * chi_r), dtype=complex)
    vh_full[:, col_mask] = vh[:rank]

    inv_l = np.where(lam_l > LAMBDA_INV_CUTOFF, 1.0 / lam_l, 0.0)
    inv_r = np.where(lam_r > LAMBDA_INV_CUTOFF, 1.0 / lam_r, 0.0)
    state.gammas[i_left] = u_full.reshape(chi_l, d, rank) * inv_l[:, None, None]
    state.gammas[i_right] = vh_full.reshape(rank, d, chi_r) * inv_r[None, None, :]
    state.lambdas[i_left + 1] = kept / np.sqrt(kept_weight)
    return UpdateInfo(total_weight=total, discarded=total - kept_weight, rank=rank)


def _mid_index(state, bond):
    if not 1 <= bond <= state.n_sites - 1:
        raise ValueError(f"bond {bond} outside 1..{state.n_sites - 1}")
    return state.n_sites - bond


def schmidt_spectrum(state, bond):
    """Squared Schmidt values on a chain bond, descending.

    On bond 1 these are exactly the eigenvalues of the reduced density matrix
    of chain site 1.
    """
    lam = state.lambdas[_mid_index(state, bond)]
    return np.sort(lam**2)[::-1]


def entropy(state, bond):
    """Von Neumann entropy of a cut, natural log; zero weights contribute 0."""
    p = state.lambdas[_mid_index(state, bond)] ** 2
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def bond_entropies(state):
    return [entropy(state, n) for n in range(1, state.n_sites)]


def _site_matrices(state):
    # B[i](p) = Gamma[i](p) with the right-hand Schmidt vector absorbed, so the
    # amplitude of a configuration is the ordered product of the B matrices.
    mats = []
    for i in range(state.n_sites):
        g = state.gammas[i]
        if i < state.n_sites - 1:
            g = g * state.lambdas[i + 1][None, None, :]
        mats.append(g)
    return mats


def to_dense(state, basis=None, max_states=fock.DEFAULT_BASIS_BUDGET):
    """Contract the MPS into a full amplitude vector on the oracle basis.

    Walks the basis in its canonical order reusing shared occupation prefixes,
    so the cost is roughly one chi x chi matrix-vector product per state.
    """
    if basis is None:
        size = fock.basis_size(state.n_sites, state.n_bosons)
        if size > max_states:
            raise BasisSizeError(
                f"densifying needs {size} amplitudes, over the budget of {max_states}"
            )
        basis = fock.FockBasis(state.n_sites, state.n_bosons, max_states=max_states)
    elif basis.n_sites != state.n_sites or basis.n_bosons != state.n_bosons:
        raise ValueError("basis does not match the state's sector")

    mats = _site_matrices(state)
    n = state.n_sites
    amplitudes = np.empty(basis.size, dtype=complex)
    stack = [np.ones(1, dtype=complex)] + [None] * n
    prev_key = None
    for idx, occ in enumerate(basis.states):
        key = occ[::-1]  # storage order: site N first
        depth = 0
        if prev_key is not None:
            while depth < n and key[depth] == prev_key[depth]:
                depth += 1
        for lvl in range(depth, n):
            stack[lvl + 1] = stack[lvl] @ mats[lvl][:, key[lvl], :]
        amplitudes[idx] = stack[n][0]
        prev_key = key
    return fock.DenseState(basis, amplitudes)


def _mps_mps_overlap(a, b):
    mats_a = _site_matrices(a)
    mats_b = _site_matrices(b)
    t = np.ones((1, 1), dtype=complex)
    for i in range(a.n_sites):
        t = np.einsum("apb,ac,cpd->bd", mats_a[i].conj(), t, mats_b[i])
    return complex(t[0, 0])


def overlap(a, b):
    """Inner product <a|b> between MPS and/or dense states of one sector.

    MPS-MPS overlaps are contracted through the transfer network without
    densification; mixed overlaps densify the MPS side on the dense state's
    basis.
    """
    a_mps = isinstance(a, MpsState)
    b_mps = isinstance(b, MpsState)
    na = a.n_sites if a_mps else a.basis.n_sites
    nb = b.n_sites if b_mps else b.basis.n_sites
    ma = a.n_bosons if a_mps else a.basis.n_bosons
    mb = b.n_bosons if b_mps else b.basis.n_bosons
    if na != nb or ma != mb:
        raise ValueError(
            f"states live in different sectors: ({na},{ma}) vs ({nb},{mb})"
        )
    if a_mps and b_mps:
        return _mps_mps_overlap(a, b)
    if a_mps:
        return complex(np.vdot(to_dense(a, basis=b.basis).amplitudes, b.amplitudes))
    if b_mps:
        return complex(np.vdot(a.amplitudes, to_dense(b, basis=a.basis).amplitudes))
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def norm(state):
    """Norm of the represented state, via the transfer contraction."""
    return float(np.sqrt(abs(_mps_mps_overlap(state, state))))


def total_occupation(state, basis=None):
    """Expected total boson number computed from the densified state."""
    dense = to_dense(state, basis=basis)
    weights = np.abs(dense.amplitudes) ** 2
    totals = np.fromiter(
        (sum(occ) for occ in dense.basis.states), dtype=float, count=dense.basis.size
    )
    return float(weights @ totals / weights.sum())


# -- snapshot format ---------------------------------------------------------
#
# JSON object with keys:
#   n_sites, n_bosons, chi_cap (int or null), discarded_weight,
#   site_order: fixed descriptive string for the storage convention,
#   lambdas: list of N+1 float lists,
#   gammas: list of {"shape": [a, d, b], "re": [...], "im": [...]} with the
#           flattened tensors in row-major order.

_SITE_ORDER_NOTE = "storage index i holds chain site N - i; site 1 is the right end"


def to_snapshot(state):
    gammas = []
    for g in state.gammas:
        gammas.append(
            {
                "shape": list(g.shape),
                "re": g.real.ravel().tolist(),
                "im": g.imag.ravel().tolist(),
            }
        )
    return {
        "n_sites": state.n_sites,
        "n_bosons": state.n_bosons,
        "chi_cap": state.chi_cap,
        "discarded_weight": state.discarded_weight,
        "site_order": _SITE_ORDER_NOTE,
        "lambdas": [lam.tolist() for lam in state.lambdas],
        "gammas": gammas,
    }


def from_snapshot(doc):
    gammas = []
    for item in doc["gammas"]:
        shape = tuple(item["shape"])
        g = np.array(item["re"], dtype=float) + 1j * np.array(item["im"], dtype=float)
        gammas.append(g.reshape(shape))
    lambdas = [np.asarray(lam, dtype=float) for lam in doc["lambdas"]]
    return MpsState(
        doc["n_sites"],
        doc["n_bosons"],
        gammas,
        lambdas,
        doc.get("chi_cap"),
        doc.get("discarded_weight", 0.0),
    )


def save_snapshot(state, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_snapshot(state), fh)


def load_snapshot(path):
    with open(path, "r", encoding="utf-8") as fh:
        return from_snapshot(json.load(fh))
