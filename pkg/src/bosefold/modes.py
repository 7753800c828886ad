"""Sets of delocalized bosonic creation modes acting on the vacuum.

A mode set describes a state of the form

    prod_q  (sum_j c[j, q] a_j^dag)^{n_q} / sqrt(n_q!)  |vacuum>

where ``c[:, q]`` is the coefficient column of mode ``q`` over the chain sites
and ``n_q`` its occupation.  The columns must be orthonormal, which bounds the
number of modes by the number of sites.
"""

import numpy as np

from .errors import NonOrthonormalModesError

ORTHONORMALITY_TOL = 1e-8


class ModeSet:
    """Orthonormal creation modes with integer occupations.

    Parameters
    ----------
    n_sites : int
        Number of chain sites N (rows of the coefficient matrix).
    occupations : sequence of int
        Bosons per mode.  Modes with zero occupation are dropped; the
        remaining occupations must be positive.
    coefficients : array_like, shape (n_sites, n_modes)
        Column q holds the amplitudes of mode q on sites 1..N
        (row j-1 corresponds to site j).
    """

    def __init__(self, n_sites, occupations, coefficients, *, tol=ORTHONORMALITY_TOL):
        n_sites = int(n_sites)
        if n_sites < 1:
            raise ValueError("need at least one site")
        coeff = np.array(coefficients, dtype=complex)
        if coeff.ndim != 2 or coeff.shape[0] != n_sites:
            raise ValueError(
                f"coefficient matrix must be (n_sites, n_modes), got {coeff.shape}"
            )
        occ = tuple(int(n) for n in occupations)
        if len(occ) != coeff.shape[1]:
            raise ValueError("one occupation per coefficient column required")
        if any(n < 0 for n in occ):
            raise ValueError("occupations must be nonnegative")

        keep = [q for q, n in enumerate(occ) if n > 0]
        occ = tuple(occ[q] for q in keep)
        coeff = coeff[:, keep]
        if len(occ) > n_sites:
            raise ValueError("more occupied modes than sites")

        gram = coeff.conj().T @ coeff
        dev = float(np.abs(gram - np.eye(len(occ))).max()) if occ else 0.0
        if dev > tol:
            raise NonOrthonormalModesError(
                f"mode columns are not orthonormal (max deviation {dev:.3e}); "
                "non-commuting mode sets would need auxiliary purification modes, "
                "which are not supported"
            )

        coeff.setflags(write=False)
        self.n_sites = n_sites
        self.occupations = occ
        self.coefficients = coeff

    @property
    def n_modes(self):
        return len(self.occupations)

    @property
    def n_bosons(self):
        return sum(self.occupations)

    def gram_deviation(self):
        """Max-norm distance of the column Gram matrix from the identity."""
        gram = self.coefficients.conj().T @ self.coefficients
        return float(np.abs(gram - np.eye(self.n_modes)).max())

    def __repr__(self):
        return (
            f"ModeSet(n_sites={self.n_sites}, n_modes={self.n_modes}, "
            f"occupations={self.occupations})"
        )


def site_modes(n_sites):
    """One boson sitting at each site: mode q is the local operator a_q^dag."""
    return ModeSet(n_sites, (1,) * n_sites, np.eye(n_sites))


def random_mode_set(rng, n_sites, n_modes, n_bosons):
    """Draw an orthonormal mode set from a seeded generator.

    Columns come from the QR factorization of a complex Gaussian matrix, and
    the bosons are spread over the modes so that every mode holds at least one.
    """
    if not 1 <= n_modes <= n_sites:
        raise ValueError("need 1 <= n_modes <= n_sites")
    if n_bosons < n_modes:
        raise ValueError("need at least one boson per mode")
    a = rng.standard_normal((n_sites, n_modes)) + 1j * rng.standard_normal(
        (n_sites, n_modes)
    )
    q, _ = np.linalg.qr(a)
    extra = rng.multinomial(n_bosons - n_modes, [1.0 / n_modes] * n_modes)
    occupations = tuple(1 + int(e) for e in extra)
    return ModeSet(n_sites, occupations, q)
