"""Single-body Hamiltonians and Heisenberg dynamics of creation modes.

The chain Hamiltonian ``H = sum_{j,k} h[j,k] a_j^dag a_k`` is fixed by the
Hermitian matrix ``h``.  A mode ``alpha^dag = sum_j c_j a_j^dag`` evolves as
``c(t) = U(t)^T c(0)`` with ``U(t) = exp(-i h t)``, so the whole machinery of
time evolution reduces to diagonalizing ``h`` once.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianError
from .modes import ModeSet

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues and eigenvector columns of a Hermitian matrix.

    ``vectors[:, l]`` is the eigenvector for ``values[l]``.  Columns are
    normalized; ordering and phases depend on how the system was produced
    (ascending with a deterministic phase fix for the numeric solver, the
    analytic labeling for the ring reference family).
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self):
        return len(self.values)


def validate_hermitian(h, tol=HERMITICITY_TOL):
    """Return ``h`` as a square complex ndarray, raising if not Hermitian."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    dev = float(np.abs(h - h.conj().T).max())
    if dev > tol:
        raise NonHermitianError(
            f"matrix deviates from Hermiticity by {dev:.3e} (tolerance {tol:.1e})"
        )
    return h


def ring_hamiltonian(n_sites):
    """Nearest-neighbor hopping matrix with periodic boundary conditions.

    Entries are set, not accumulated, so the degenerate two-site ring keeps a
    single unit bond: h = [[0, 1], [1, 0]].
    """
    n = int(n_sites)
    if n < 2:
        raise ValueError("ring needs at least two sites")
    h = np.zeros((n, n))
    for j in range(n - 1):
        h[j, j + 1] = 1.0
        h[j + 1, j] = 1.0
    h[0, n - 1] = 1.0
    h[n - 1, 0] = 1.0
    return h


def reference_ring_eigensystem(n_sites):
    """Analytic Fourier eigensystem of the ring hopping matrix.

    Mode l = 1..N (stored in column l-1) has energy 2 cos(2 pi l / N) and
    plane-wave amplitudes exp(2 pi i k l / N) / sqrt(N) on sites k = 1..N.
    This fixed family resolves the degeneracies of the numeric spectrum.
    """
    n = int(n_sites)
    if n < 2:
        raise ValueError("ring needs at least two sites")
    labels = np.arange(1, n + 1)
    values = 2.0 * np.cos(2.0 * np.pi * labels / n)
    k = labels[:, None]
    l = labels[None, :]
    vectors = np.exp(2j * np.pi * k * l / n) / np.sqrt(n)
    return EigenSystem(values=values, vectors=vectors)


def _fix_phases(vectors):
    # Deterministic gauge: in each column the entry of largest modulus
    # (first index on ties) is made real positive.
    fixed = vectors.copy()
    for col in range(fixed.shape[1]):
        pivot = int(np.argmax(np.abs(fixed[:, col])))
        entry = fixed[pivot, col]
        mag = abs(entry)
        if mag > 0.0:
            fixed[:, col] *= entry.conjugate() / mag
    return fixed


def hermitian_eigendecompose(h, tol=HERMITICITY_TOL):
    """Eigendecompose a Hermitian matrix with a deterministic gauge.

    Eigenvalues come out ascending; each eigenvector is rotated so that its
    largest-modulus component is real positive.
    """
    h = validate_hermitian(h, tol)
    values, vectors = np.linalg.eigh(h)
    return EigenSystem(values=values, vectors=_fix_phases(vectors))


def propagator(h, t):
    """The unitary exp(-i h t), computed through the eigendecomposition."""
    eig = hermitian_eigendecompose(h)
    phases = np.exp(-1j * eig.values * float(t))
    return (eig.vectors * phases) @ eig.vectors.conj().T


def propagate_modes(h, t, modes):
    """Evolve every mode of a ModeSet under the chain Hamiltonian for time t.

    Each coefficient column transforms as c -> U(t)^T c, which preserves the
    orthonormality of the set.
    """
    h = validate_hermitian(h)
    if modes.n_sites != h.shape[0]:
        raise ValueError(
            f"mode set has {modes.n_sites} sites but h is {h.shape[0]}x{h.shape[0]}"
        )
    u = propagator(h, t)
    evolved = u.T @ modes.coefficients
    return ModeSet(modes.n_sites, modes.occupations, evolved)
