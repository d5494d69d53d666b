"""Exception hierarchy shared across the package.

Input errors (bad user data) and internal invariant violations are kept in
separate branches so the CLI can map them to distinct exit codes.
"""


class LiouvError(Exception):
    """Base class for all package errors."""


class InputError(LiouvError):
    """Problems with user-supplied data (CLI exit code 2)."""


class DimensionMismatch(InputError):
    """A Lindblad vector or matrix has the wrong shape."""


class NotAntisymmetric(InputError):
    """Hamiltonian kernel K fails the antisymmetry tolerance."""


class ParseError(InputError):
    """Model file could not be parsed; carries field/line diagnostics."""


class TooLarge(InputError):
    """Requested size exceeds the configured limit."""


class SpectrumTooLarge(TooLarge):
    """Occupation-vector count exceeds the enumeration limit."""


class InternalInvariantViolated(LiouvError):
    """A mathematically guaranteed identity failed (CLI exit code 3)."""


class BuildInvariantViolated(InternalInvariantViolated):
    """Structure-matrix antisymmetry or self-conjugation residual too large."""


class StabilityViolated(InternalInvariantViolated):
    """Rapidity with negative real part, or a nontrivial Jordan block on the
    imaginary axis; both are impossible for a genuine PSD bath."""


class NontrivialImaginaryBlock(InternalInvariantViolated):
    """Back-substitution precondition violated: an imaginary-axis rapidity has
    a Jordan block of size > 1."""


class InconsistentSingularSystem(InternalInvariantViolated):
    """A singular Lyapunov row has a non-vanishing right-hand side."""


class NormalizationFailure(InternalInvariantViolated):
    """The eigenvector matrix V fails VV^T = J beyond tolerance."""


class IdentityViolated(InternalInvariantViolated):
    """An exact integer identity of the seed coefficients failed."""
