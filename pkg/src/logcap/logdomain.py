"""Log-domain scalars.

Interval lengths in this package range down to ``exp(-n**alpha)`` with
``n**alpha`` in the thousands, far below the smallest positive float.  All
lengths are therefore carried as logarithms, optionally paired with an exact
rational value when one exists (dyadic radii, endpoint arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import InvalidArgumentError

LN2 = math.log(2.0)

# Exact rational arithmetic: ``fractions.Fraction`` already guarantees a
# reduced numerator/denominator pair with positive denominator and exact
# (rounding-free) arithmetic on arbitrary-precision integers, so the public
# rational type is an alias rather than a wrapper.
Rational = Fraction

_Rational = Union[int, Fraction]


def log_of_fraction(q: Fraction) -> float:
    """log of a positive rational, safe for huge numerators/denominators.

    ``math.log`` accepts arbitrary-size ints directly, so ``log(2**5000)``
    works where ``float(2**5000)`` would overflow.
    """
    if q <= 0:
        raise InvalidArgumentError(f"need a positive rational, got {q}")
    return math.log(q.numerator) - math.log(q.denominator)


def log_sub(a: float, b: float) -> float:
    """log(exp(a) - exp(b)) for a > b."""
    if b >= a:
        raise InvalidArgumentError("log_sub requires a > b")
    return a + math.log1p(-math.exp(b - a))


@dataclass(frozen=True)
class LogLength:
    """A length in (0, 1], stored as ``log_value = log(length) <= 0``.

    ``exact`` optionally carries the same length as a Fraction; it is
    authoritative for endpoint arithmetic when present.  The float log is
    always present and is what the energy kernels consume.
    """

    log_value: float
    exact: Optional[Fraction] = None

    def __post_init__(self):
        lv = self.log_value
        if not isinstance(lv, float) or math.isnan(lv) or math.isinf(lv):
            raise InvalidArgumentError(f"log_value must be a finite float, got {lv!r}")
        if lv > 0.0:
            raise InvalidArgumentError(
                f"lengths above 1 are outside the unit-interval universe (log_value={lv})"
            )
        if self.exact is not None:
            ex = self.exact
            if not isinstance(ex, Fraction):
                object.__setattr__(self, "exact", Fraction(ex))
                ex = self.exact
            if ex <= 0 or ex > 1:
                raise InvalidArgumentError(f"exact length must lie in (0, 1], got {ex}")

    @classmethod
    def from_length(cls, value: Union[float, _Rational]) -> "LogLength":
        if isinstance(value, (int, Fraction)):
            q = Fraction(value)
            return cls(log_of_fraction(q), q)
        if not (0.0 < value <= 1.0):
            raise InvalidArgumentError(f"length must lie in (0, 1], got {value!r}")
        return cls(math.log(value))

    @classmethod
    def from_log(cls, log_value: float) -> "LogLength":
        return cls(float(log_value))

    @property
    def length(self) -> float:
        """Plain float length; underflows to 0.0 below exp(-745) by design."""
        return math.exp(self.log_value)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def half(self) -> "LogLength":
        return LogLength(self.log_value - LN2, None if self.exact is None else self.exact / 2)

    def scaled(self, k: _Rational) -> "LogLength":
        """Multiply by a positive rational factor (result must stay <= 1)."""
        q = Fraction(k)
        return LogLength(self.log_value + log_of_fraction(q), None if self.exact is None else self.exact * q)

    def __lt__(self, other: "LogLength") -> bool:
        if self.exact is not None and other.exact is not None:
            return self.exact < other.exact
        return self.log_value < other.log_value

    def __le__(self, other: "LogLength") -> bool:
        if self.exact is not None and other.exact is not None:
            return self.exact <= other.exact
        return self.log_value <= other.log_value
