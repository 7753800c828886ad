"""Exception types shared across the package."""


class NonHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not, beyond tolerance."""


class NonOrthonormalModesError(ValueError):
    """Raised when a set of mode coefficient columns fails the orthonormality check.

    Non-commuting (overlapping) mode sets can in principle be handled by
    augmenting the set with auxiliary modes that restore orthogonality, in the
    spirit of a purification; that extension is out of scope here.
    """


class BasisSizeError(RuntimeError):
    """Raised when a Fock-basis operation would exceed the configured size budget."""
