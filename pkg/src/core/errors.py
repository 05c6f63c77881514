"""
Error and Warning Types

Every failure the library can signal derives from TomographyError, which knows
the process exit status the CLI should use:

- ValidationError (exit 2): bad inputs, preconditions not met
- CertificationError (exit 3): a numerical self-check failed

Soft conditions (mass near the truncation edge, small sample batches, surfaces
that do not vanish at the grid boundary) are reported as warnings.
"""

from typing import Dict, Optional


class TomographyError(Exception):
    """Base class for all library errors."""

    exit_code = 1
    kind = "tomography-error"

    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict:
        """
        Machine-readable form, written by the CLI as error.json.

        Returns:
            {"error": kind, "message": ..., "exit_code": ..., "details": {...}}
        """
        return {
            "error": self.kind,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ValidationError(TomographyError):
    exit_code = 2
    kind = "validation-error"


class CertificationError(TomographyError):
    exit_code = 3
    kind = "certification-error"


class ConfigError(ValidationError):
    kind = "config-error"


class DensityMatrixError(ValidationError):
    kind = "invalid-density-matrix"


class GridTooCoarseError(ValidationError):
    kind = "grid-too-coarse"


class AngleCoverageError(ValidationError):
    kind = "angle-coverage"


class OrderOverflowError(ValidationError):
    kind = "order-overflow"


class DomainError(ValidationError):
    kind = "domain-error"


class TruncationError(ValidationError):
    kind = "truncation-edge-mass"


class InsufficientQuadratureError(CertificationError):
    kind = "insufficient-quadrature"


class ClosedFormMismatchError(CertificationError):
    kind = "closed-form-mismatch"


class TruncationWarning(UserWarning):
    """State mass sits near the Fock cutoff; derived densities are unreliable."""


class InsufficientSamplesWarning(UserWarning):
    """A sample batch is too small for a meaningful empirical mean."""


class SupportWarning(UserWarning):
    """A phase-space surface is not negligible on the grid boundary."""


class DensityWarning(UserWarning):
    """A density that must be normalized and non-negative is not, beyond tolerance."""
