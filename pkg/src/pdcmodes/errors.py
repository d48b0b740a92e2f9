"""Exception hierarchy shared by all modules.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class PdcModesError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PdcModesError):
    """A physical quantity is outside the modeled domain.

    Examples: wavelength outside a crystal's Sellmeier validity range,
    a phase-matching regime violation, a poling period that does not exist.
    """


class ValidationError(PdcModesError):
    """A data file or run configuration violates its schema or invariants."""


class SolverError(PdcModesError):
    """A bracketed root search failed (no sign change, no solution)."""
