"""Brute-force reference implementation in the full fixed-number Fock basis.

Everything here is exact up to dense linear algebra: basis enumeration,
Hamiltonian matrices, unitary evolution by full diagonalization, reduced
density matrices.  It is deliberately simple and serves as the verification
oracle for the MPS engine at small sizes.
"""

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import BasisSizeError, NonOrthonormalModesError
from .sbdynamics import validate_hermitian

DEFAULT_BASIS_BUDGET = 5_000_000
DEFAULT_DENSE_DIM = 7_000


def basis_size(n_sites, n_bosons):
    """Number of occupation configurations of n_bosons over n_sites."""
    return comb(n_sites + n_bosons - 1, n_bosons)


def _occupation_tuples(n_sites, n_bosons):
    # Enumerates (n_1, ..., n_N) in descending lexicographic order of the
    # reversed tuple (n_N, ..., n_1): the first state piles everything on
    # site N, the last on site 1.
    if n_sites == 1:
        yield (n_bosons,)
        return
    for top in range(n_bosons, -1, -1):
        for rest in _occupation_tuples(n_sites - 1, n_bosons - top):
            yield rest + (top,)


class FockBasis:
    """Ordered basis of occupation tuples (n_1..n_N) with fixed total."""

    def __init__(self, n_sites, n_bosons, max_states=DEFAULT_BASIS_BUDGET):
        n_sites = int(n_sites)
        n_bosons = int(n_bosons)
        if n_sites < 1 or n_bosons < 0:
            raise ValueError("need n_sites >= 1 and n_bosons >= 0")
        size = basis_size(n_sites, n_bosons)
        if size > max_states:
            raise BasisSizeError(
                f"basis of {size} states exceeds the budget of {max_states}"
            )
        self.n_sites = n_sites
        self.n_bosons = n_bosons
        self.states = list(_occupation_tuples(n_sites, n_bosons))
        self.index = {occ: i for i, occ in enumerate(self.states)}

    @property
    def size(self):
        return len(self.states)

    def index_of(self, occupations):
        occ = tuple(int(n) for n in occupations)
        try:
            return self.index[occ]
        except KeyError:
            raise ValueError(f"{occ} is not a basis state of this sector") from None

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"FockBasis(n_sites={self.n_sites}, n_bosons={self.n_bosons}, size={self.size})"


def enumerate_basis(n_sites, n_bosons, max_states=DEFAULT_BASIS_BUDGET):
    return FockBasis(n_sites, n_bosons, max_states=max_states)


@dataclass
class DenseState:
    """Amplitude vector over a FockBasis."""

    basis: FockBasis
    amplitudes: np.ndarray

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self):
        return DenseState(self.basis, self.amplitudes / self.norm())


def basis_state(basis, occupations):
    """Unit vector on a single occupation configuration."""
    amp = np.zeros(basis.size, dtype=complex)
    amp[basis.index_of(occupations)] = 1.0
    return DenseState(basis, amp)


def _creation_maps(basis_from, basis_to):
    # For each site j (0-based): index map and sqrt(n_j + 1) factors taking a
    # state of basis_from to basis_to under a_j^dag.
    maps = []
    for j in range(basis_from.n_sites):
        targets = np.empty(basis_from.size, dtype=np.int64)
        factors = np.empty(basis_from.size, dtype=float)
        for i, occ in enumerate(basis_from.states):
            lifted = occ[:j] + (occ[j] + 1,) + occ[j + 1 :]
            targets[i] = basis_to.index[lifted]
            factors[i] = np.sqrt(occ[j] + 1.0)
        maps.append((targets, factors))
    return maps


def apply_mode_polynomial(modes, basis):
    """Build the state  prod_q (mode_q^dag)^{n_q} / sqrt(n_q!)  |vacuum>.

    Works by repeated sparse application of the creation combination through
    the ladder of fixed-number bases.  Orthonormal modes give a normalized
    result; a norm deviation beyond 1e-6 signals an inconsistent mode set.
    """
    if modes.n_sites != basis.n_sites:
        raise ValueError("mode set and basis disagree on the number of sites")
    if modes.n_bosons != basis.n_bosons:
        raise ValueError(
            f"mode set carries {modes.n_bosons} bosons, basis {basis.n_bosons}"
        )

    ladder = [FockBasis(basis.n_sites, m) for m in range(basis.n_bosons)]
    ladder.append(basis)

    vec = np.ones(1, dtype=complex)
    level = 0
    for q in range(modes.n_modes):
        column = modes.coefficients[:, q]
        for _ in range(modes.occupations[q]):
            maps = _creation_maps(ladder[level], ladder[level + 1])
            out = np.zeros(ladder[level + 1].size, dtype=complex)
            for j in range(basis.n_sites):
                targets, factors = maps[j]
                out[targets] += column[j] * factors * vec
            vec = out
            level += 1

    norm_factor = np.sqrt(
        float(np.prod([factorial(n) for n in modes.occupations]))
    )
    vec = vec / norm_factor
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-6:
        raise NonOrthonormalModesError(
            f"mode polynomial produced norm {norm:.6f}; the mode set is inconsistent"
        )
    return DenseState(basis, vec / norm)


class FockHamiltonian:
    """Dense many-body matrix of  sum_{j,k} h[j,k] a_j^dag a_k  on a basis.

    The eigendecomposition is computed lazily and cached so repeated
    evolution calls at different times stay cheap.
    """

    def __init__(self, h, basis, max_dim=DEFAULT_DENSE_DIM):
        h = validate_hermitian(h)
        if h.shape[0] != basis.n_sites:
            raise ValueError("single-body matrix and basis disagree on sites")
        if basis.size > max_dim:
            raise BasisSizeError(
                f"dense operator of dimension {basis.size} exceeds the budget of {max_dim}"
            )
        self.basis = basis
        real = bool(np.all(h.imag == 0.0)) if np.iscomplexobj(h) else True
        hr = h.real if real else h
        dtype = float if real else complex
        size = basis.size
        mat = np.zeros((size, size), dtype=dtype)
        pairs = [
            (j, k)
            for j in range(basis.n_sites)
            for k in range(basis.n_sites)
            if j != k and hr[j, k] != 0.0
        ]
        for i, occ in enumerate(basis.states):
            diag = 0.0
            for j in range(basis.n_sites):
                if hr[j, j] != 0.0:
                    diag += hr[j, j] * occ[j]
            if diag != 0.0:
                mat[i, i] += diag
            for j, k in pairs:
                nk = occ[k]
                if nk == 0:
                    continue
                lifted = list(occ)
                lifted[k] -= 1
                lifted[j] += 1
                tgt = basis.index[tuple(lifted)]
                mat[tgt, i] += hr[j, k] * np.sqrt((occ[j] + 1.0) * nk)
        self.matrix = mat
        self._eig = None

    @property
    def eigensystem(self):
        if self._eig is None:
            self._eig = np.linalg.eigh(self.matrix)
        return self._eig

    def _matvec(self, vec):
        m = self.matrix
        if m.dtype == float and np.iscomplexobj(vec):
            return m @ vec.real + 1j * (m @ vec.imag)
        return m @ vec

    def evolve(self, state, t):
        if state.basis is not self.basis and state.basis.states != self.basis.states:
            raise ValueError("state and Hamiltonian live on different bases")
        w, v = self.eigensystem
        amp = state.amplitudes
        if v.dtype == float:
            coeff = v.T @ amp.real + 1j * (v.T @ amp.imag)
        else:
            coeff = v.conj().T @ amp
        coeff = coeff * np.exp(-1j * w * float(t))
        out = v @ coeff.real + 1j * (v @ coeff.imag) if v.dtype == float else v @ coeff
        return DenseState(self.basis, out)

    def expectation(self, state):
        amp = state.amplitudes
        val = np.vdot(amp, self._matvec(amp))
        return float(val.real)


def build_hamiltonian(h, basis, max_dim=DEFAULT_DENSE_DIM):
    return FockHamiltonian(h, basis, max_dim=max_dim)


def evolve(state, hamiltonian, t):
    """Unitary evolution exp(-i H t) |state> through full diagonalization."""
    return hamiltonian.evolve(state, t)


def energy_expectation(state, hamiltonian):
    """Real expectation value <state| H |state>."""
    return hamiltonian.expectation(state)


def single_site_rdm(state, site):
    """Reduced density matrix of one chain site, by index-partition contraction.

    ``site`` uses chain labels 1..N.  The result is an (M+1) x (M+1) Hermitian
    positive matrix with unit trace (for a normalized state).
    """
    basis = state.basis
    if not 1 <= site <= basis.n_sites:
        raise ValueError(f"site {site} outside 1..{basis.n_sites}")
    j = site - 1
    d = basis.n_bosons + 1
    rest_index = {}
    columns = []
    for occ in basis.states:
        rest = occ[:j] + occ[j + 1 :]
        if rest not in rest_index:
            rest_index[rest] = len(columns)
            columns.append(rest)
    a = np.zeros((d, len(columns)), dtype=complex)
    for i, occ in enumerate(basis.states):
        rest = occ[:j] + occ[j + 1 :]
        a[occ[j], rest_index[rest]] += state.amplitudes[i]
    return a @ a.conj().T
