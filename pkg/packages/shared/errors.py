"""Exception hierarchy shared by every package.

Two roots, mapped to CLI exit codes by ``apps.cli.main``:

- ``ValidationFailure`` (exit 2): the input is wrong. Bad primes, caps, malformed
  algebras, inconsistent point counts, type-sum violations, config invariants.
- ``InternalCheckError`` (exit 1): the input was accepted but a computed
  certificate or internal identity did not hold, or the truncation level was too
  small to decide a question.
"""


class ValidationFailure(ValueError):
    """Base class for rejected input."""


class FieldError(ValidationFailure):
    """Invalid finite-field request or cross-field arithmetic."""


class CurveError(ValidationFailure):
    """Singular curve model, bad genus, or invalid infinite-point rule."""


class InvalidCounts(ValidationFailure):
    """Point counts that do not come from a zeta function of the stated genus."""


class AlgebraError(ValidationFailure):
    """Malformed local invariants or violated algebra preconditions."""


class TypeVectorError(ValidationFailure):
    """Type vector or matrix shape does not match the requested dimension."""


class ModuleError(ValidationFailure):
    """Graded module whose maps violate the defining relations."""


class ConfigError(ValidationFailure):
    """Mass-formula configuration that violates its invariants."""


class InternalCheckError(RuntimeError):
    """Base class for failed internal assertions."""


class InsufficientTruncation(InternalCheckError):
    """The truncated ring cannot decide the question at the requested level."""


class CertificateError(InternalCheckError):
    """A computed certificate (isomorphism, conjugation, closure) did not verify."""
