"""Exception taxonomy.

Errors are deliberately fine-grained so callers (and the CLI) can distinguish
geometry violations that falsify a mathematical claim from plain misuse.
"""


class LogCapError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(LogCapError, ValueError):
    """Generic bad input: wrong types, empty collections, out-of-range values."""


class DisjointnessError(LogCapError):
    """A construction that requires disjoint intervals received overlapping ones.

    Distinct from :class:`InvalidArgumentError`: raising this means the
    *geometry* is inconsistent (e.g. ``n * exp(r) >= 1`` for a uniform level,
    or two levels overlapping somewhere other than a shared exact center).
    """


class ZeroMassError(LogCapError):
    """Conditioning on a set of measure zero."""


class PolicyError(LogCapError):
    """An evaluation policy was applied outside its contract.

    Examples: point-charge evaluation of overlapping intervals, or the Exact
    policy on intervals with ``|log length| > 30``.
    """


class GeometryError(LogCapError):
    """Interval geometry incompatible with the requested computation (rho >= 1)."""


class ScheduleDomainError(LogCapError, KeyError):
    """A custom radius schedule has no entry for the requested level."""


class CutoffError(LogCapError):
    """Cutoff width delta is too large for the support it is applied to."""


class WitnessError(LogCapError):
    """A measuring-function witness fails a schedule precondition.

    Carries the index of the first failing row in ``.j``.
    """

    def __init__(self, j, message):
        super().__init__(message)
        self.j = j


class OracleBudgetError(LogCapError):
    """The quadrature oracle exhausted its subdivision budget before converging."""
