"""Exception hierarchy for hecke-orbit-lab.

Every error carries enough context to reproduce the failing call; callers
that treat absence as a value (algdep, cm detection) return ``None`` instead
of raising.
"""


class HolError(Exception):
    """Base class for all package errors."""


class EmptyWindow(HolError):
    """A series operation produced an empty reliability window (order < valuation)."""


class NotAUnit(HolError):
    """Series inversion requested for a series whose leading coefficient is not invertible."""


class BadEtaIndex(HolError):
    """Eta-quotient exponent attached to a non-divisor of the level."""


class NotCoprime(HolError):
    """Hecke index shares a factor with the level."""


class StepTooSmall(HolError):
    """Finite-difference step outside the trusted range for the working precision."""


class NonConvergent(HolError):
    """|q| too close to 1 for direct series evaluation; reduce the point first."""


class PoleOnSupport(HolError):
    """Divisor evaluation hit a pole of the function."""


class DegenerateTau(HolError):
    """Construction point too close to a degeneracy of the denominator."""


class ResidueNotIntegral(HolError):
    """Numerically computed residue failed to snap to an integer."""

    def __init__(self, value, tol):
        super().__init__(f"residue {value} not within {tol} of an integer")
        self.value = value
        self.tol = tol


class BasisDegenerate(HolError):
    """Gram matrix of the cusp basis is numerically singular."""


class IncompleteData(HolError):
    """Stored coefficient ranges are insufficient for the requested pairing/evaluation."""


class InsufficientCoefficients(IncompleteData):
    """Harmonic evaluation tail exceeds the target tolerance.

    ``required`` holds the minimal coefficient range estimated to suffice.
    """

    def __init__(self, msg, required=None):
        super().__init__(msg)
        self.required = required


class RankDeficient(HolError):
    """LLL input rows are linearly dependent."""


class BadBasis(HolError):
    """Ingested cusp-form basis is rank deficient or malformed."""


class ParseError(HolError):
    """Malformed mfcoeffs/series text; carries the 1-based line number."""

    def __init__(self, msg, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line


class EigenFailure(HolError):
    """Probe Hecke matrices failed to commute or diagonalize."""


class NotInSpan(HolError):
    """Cusp-form decomposition residual exceeded tolerance."""


class PrecisionInsufficient(HolError):
    """Rounding residual too large; carries a recommended working precision."""

    def __init__(self, msg, recommended_digits=None):
        super().__init__(msg)
        self.recommended_digits = recommended_digits


class Unsupported(HolError):
    """Requested configuration is outside the supported desk-scale range."""


class Divergent(HolError):
    """Quadrature detected a non-decaying integrand at an unexcised cusp."""
