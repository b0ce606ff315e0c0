"""Exception types shared across the package.

Everything numerical that can refuse to produce a value raises one of
these instead of returning NaN, so callers can branch on the failure
mode (and the CLI can record it as a verdict rather than a crash).
"""


class SubcalcError(Exception):
    """Base class for all package-specific failures."""


class ParameterOutOfRange(SubcalcError):
    """Catalog parameters outside their admissible range."""


class DomainError(SubcalcError):
    """Evaluation requested outside the closed left half-plane."""


class NonDifferentiable(SubcalcError):
    """Finite-difference derivative estimates failed to converge."""


class ToleranceNotMet(SubcalcError):
    """Adaptive quadrature hit its refinement cap before the tolerance."""


class NonIntegrableTail(SubcalcError):
    """Tail certificate of a Levy-type integral diverges."""


class AtomLimitUndefined(SubcalcError):
    """Atom at zero requires a density limit at 0+ that does not exist."""


class NoClosedForm(SubcalcError):
    """No closed-form subordination density for this catalog member."""


class NonDecayingSymbol(SubcalcError):
    """|exp(t psi(i y))| does not decay; Fourier inversion impossible.

    The classic trigger is psi(z) = z, whose measure is a point mass.
    """


class GridTooCoarse(SubcalcError):
    """Doubling test detected aliasing in a Fourier inversion grid."""


class NoDecay(SubcalcError):
    """Symbol profile does not reach the decay floor at the grid edge."""


class Divergent(SubcalcError):
    """Tail fit of a grid function implies a divergent L^p norm."""


class Inapplicable(SubcalcError):
    """A criterion's prerequisites fail (e.g. a norm it needs diverges)."""


class IllConditionedEigenbasis(SubcalcError):
    """Eigenvector condition number too large for a spectral reference."""


class NotSectorial(SubcalcError):
    """No truncated sector with half-angle below pi/2 contains the range."""


class LowerBoundFails(SubcalcError):
    """Power-law lower bound |psi(z)| >= b|z|^alpha decays to zero."""


class UpperBoundFails(SubcalcError):
    """Power-law upper bound |psi(z)| <= k|z|^gamma grows without bound."""


class BoundFails(SubcalcError):
    """Derivative growth bound |psi'(iy)| <= k|y|^delta fails."""


class WindowViolated(SubcalcError):
    """Requested delta lies outside the admissible exponent window."""


class PoorFit(SubcalcError):
    """Log-log regression r^2 below threshold; slope unreliable."""


class Undecidable(SubcalcError):
    """Neither criterion route applicable to this Bernstein function."""


class ConfigParseError(SubcalcError):
    """Run configuration file is malformed or incomplete."""
