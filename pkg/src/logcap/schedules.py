"""Radius schedules: the map n -> r_n controlling how fast level lengths shrink.

The built-in families:

* ``PowerExp(alpha)``      r_n = exp(-n**alpha), alpha >= 1
* ``SubexpRoot(beta)``     r_n = exp(-n**beta), 0 < beta < 1
* ``GeometricDyadic()``    r_n = 2**-n, exact dyadic
* ``CustomTable(table)``   explicit {n: LogLength}

Every schedule must satisfy r_n < 1/n so the n evenly spaced pieces of a
uniform level stay pairwise disjoint; ``schedule_radius`` enforces that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

from .errors import DisjointnessError, InvalidArgumentError, ScheduleDomainError
from .logdomain import LN2, LogLength


class RadiusSchedule:
    """Base class; concrete schedules implement ``log_radius``."""

    def log_radius(self, n: int) -> LogLength:  # pragma: no cover - abstract
        raise NotImplementedError

    def describe(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class PowerExp(RadiusSchedule):
    """r_n = exp(-n**alpha) for alpha >= 1 (supercritical decay when alpha > 2)."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha >= 1.0) or math.isinf(self.alpha):
            raise InvalidArgumentError(f"alpha must be a finite real >= 1, got {self.alpha}")

    def log_radius(self, n: int) -> LogLength:
        _check_level(n)
        return LogLength(-float(n) ** self.alpha)

    def describe(self) -> str:
        return f"powexp:{self.alpha:g}"


@dataclass(frozen=True)
class SubexpRoot(RadiusSchedule):
    """r_n = exp(-n**beta) for 0 < beta < 1, so |log r_n| = n**beta = o(n).

    The beta = 1/2 case is the reference point for redistribution-convergence
    experiments: cross terms and self terms then balance at scale sqrt(n)/n.
    """

    beta: float

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise InvalidArgumentError(f"beta must lie in (0, 1), got {self.beta}")

    def log_radius(self, n: int) -> LogLength:
        _check_level(n)
        return LogLength(-float(n) ** self.beta)

    def describe(self) -> str:
        return f"subexp:{self.beta:g}"


@dataclass(frozen=True)
class GeometricDyadic(RadiusSchedule):
    """r_n = 2**-n with the exact dyadic rational attached."""

    def log_radius(self, n: int) -> LogLength:
        _check_level(n)
        return LogLength(-n * LN2, Fraction(1, 2**n))

    def describe(self) -> str:
        return "dyadic"


@dataclass(frozen=True)
class CustomTable(RadiusSchedule):
    """Explicit table of radii; raises ScheduleDomainError off-table."""

    table: Dict[int, LogLength] = field(default_factory=dict)

    def __post_init__(self):
        coerced = {
            int(n): v if isinstance(v, LogLength) else LogLength(float(v))
            for n, v in self.table.items()
        }
        object.__setattr__(self, "table", coerced)

    def log_radius(self, n: int) -> LogLength:
        _check_level(n)
        try:
            return self.table[n]
        except KeyError:
            raise ScheduleDomainError(f"no radius tabulated for level n={n}") from None

    def describe(self) -> str:
        return f"table[{len(self.table)}]"


def _check_level(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidArgumentError(f"level index must be an integer >= 1, got {n!r}")


def schedule_radius(schedule: RadiusSchedule, n: int) -> LogLength:
    """Radius for level n, validated against the disjointness constraint r_n < 1/n."""
    r = schedule.log_radius(n)
    if r.exact is not None:
        ok = r.exact * n < 1
    else:
        ok = r.log_value < -math.log(n)
    if not ok:
        raise DisjointnessError(
            f"schedule gives r_{n} with log r = {r.log_value:.6g} >= -log n; "
            f"the n pieces of the uniform level would not be disjoint"
        )
    return r


def parse_schedule(spec: str) -> RadiusSchedule:
    """Parse CLI-style schedule strings: 'powexp:3', 'subexp:0.5', 'dyadic'."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "dyadic":
        if arg:
            raise InvalidArgumentError("dyadic schedule takes no parameter")
        return GeometricDyadic()
    if name in ("powexp", "subexp"):
        try:
            value = float(arg)
        except ValueError:
            raise InvalidArgumentError(f"bad schedule parameter in {spec!r}") from None
        return PowerExp(value) if name == "powexp" else SubexpRoot(value)
    raise InvalidArgumentError(f"unknown schedule family in {spec!r}")
