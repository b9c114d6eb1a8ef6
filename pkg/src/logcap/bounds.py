"""Capacity bounds from interval covers and measuring functions.

Two export surfaces:

* Cauchy-Schwarz machinery: a cover with piece lengths r_k yields the energy
  lower bound I >= 1 / sum_k 1/|log r_k| for any probability measure living
  on it, hence the capacity upper bound exp(-1/S).  For the level schedules
  r_n = exp(-n**alpha) the sum telescopes into the tail series
  sum_{n >= m} n**(1-alpha), bracketed by integral comparison.

* Measuring-function schedules: witnesses certifying that an h-volume can
  vanish while the piece counts blow up.  The interesting radii are doubly
  exponential (log r = -exp(4**(j+1))), far beyond floats, so rows are checked
  in mpmath at a precision chosen from the witness itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple, Union

import mpmath as mp

from .errors import InvalidArgumentError, WitnessError
from .intervals import IntervalUnion
from .logdomain import LogLength


# -- covers ------------------------------------------------------------------

@dataclass(frozen=True)
class CoverDescription:
    """Multiset of cover piece lengths, as (log length, multiplicity) pairs.

    Multiplicities keep level covers compact: level n contributes n congruent
    pieces, and materializing 10**5 identical entries would be silly.
    """

    entries: Tuple[Tuple[float, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise InvalidArgumentError("a cover needs at least one piece")
        for ll, mult in self.entries:
            if not (ll < 0.0):
                raise InvalidArgumentError(
                    f"cover pieces must be shorter than 1 (log length {ll!r})"
                )
            if not isinstance(mult, int) or mult < 1:
                raise InvalidArgumentError(f"multiplicity must be a positive int, got {mult!r}")

    @classmethod
    def from_log_lengths(cls, lls: Sequence[Union[float, LogLength]]) -> "CoverDescription":
        entries = []
        for ll in lls:
            v = ll.log_value if isinstance(ll, LogLength) else float(ll)
            entries.append((v, 1))
        return cls(tuple(entries))

    @classmethod
    def from_interval_union(cls, u: IntervalUnion) -> "CoverDescription":
        if u.is_empty:
            raise InvalidArgumentError("cannot describe an empty cover")
        return cls(tuple((p.log_length, 1) for p in u.pieces))

    @classmethod
    def from_level_schedule(cls, schedule, n_values: Sequence[int]) -> "CoverDescription":
        from .schedules import schedule_radius  # local import to avoid a cycle

        entries = []
        for n in n_values:
            r = schedule_radius(schedule, n)
            entries.append((r.log_value, n))
        return cls(tuple(entries))

    @property
    def piece_count(self) -> int:
        return sum(m for _, m in self.entries)

    def to_dict(self) -> dict:
        return {
            "log_lengths": [ll for ll, _ in self.entries],
            "multiplicities": [m for _, m in self.entries],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoverDescription":
        lls = d["log_lengths"]
        mults = d.get("multiplicities") or [1] * len(lls)
        if len(lls) != len(mults):
            raise InvalidArgumentError("log_lengths and multiplicities differ in length")
        return cls(tuple((float(ll), int(m)) for ll, m in zip(lls, mults)))


def cs_lower_energy_bound(cover: CoverDescription) -> float:
    """1 / sum_k mult_k / |log r_k|: valid for any probability measure on the cover."""
    s = math.fsum(m / (-ll) for ll, m in cover.entries)
    return 1.0 / s


# -- tail series --------------------------------------------------------------

@dataclass(frozen=True)
class TailSeries:
    """sum_{n >= m} n**(1-alpha) with an integral-test remainder bracket."""

    alpha: float
    m: int
    terms: int
    partial: float
    remainder_lo: float
    remainder_hi: float

    @property
    def converged(self) -> bool:
        return math.isfinite(self.remainder_hi)

    @property
    def sum_lo(self) -> float:
        return self.partial + self.remainder_lo

    @property
    def sum_hi(self) -> float:
        return self.partial + self.remainder_hi

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "m": self.m,
            "terms": self.terms,
            "partial": self.partial,
            "sum_lo": self.sum_lo,
            "sum_hi": self.sum_hi,
            "converged": self.converged,
        }


def tail_series(alpha: float, m: int, terms: int = 10_000) -> TailSeries:
    """Bracket sum_{n >= m} n**(1-alpha), the h0-volume sum of the level cover.

    Level n carries n pieces each of h0-value 1/|log r_n| = n**-alpha.  For
    alpha <= 2 the series diverges and the report says so instead of faking a
    number.
    """
    if not (alpha >= 1.0) or math.isinf(alpha):
        raise InvalidArgumentError(f"alpha must be a finite real >= 1, got {alpha!r}")
    if not isinstance(m, int) or m < 1:
        raise InvalidArgumentError(f"m must be an integer >= 1, got {m!r}")
    if not isinstance(terms, int) or terms < 1:
        raise InvalidArgumentError(f"terms must be a positive integer, got {terms!r}")
    last = m + terms - 1
    partial = math.fsum(float(n) ** (1.0 - alpha) for n in range(m, last + 1))
    if alpha > 2.0:
        lo = float(last + 1) ** (2.0 - alpha) / (alpha - 2.0)
        hi = float(last) ** (2.0 - alpha) / (alpha - 2.0)
        return TailSeries(alpha, m, terms, partial, lo, hi)
    # divergent: [partial, inf] is the degenerate-but-true bracket, and a
    # finite sum_lo keeps downstream reports serializable
    return TailSeries(alpha, m, terms, partial, 0.0, math.inf)


# -- bound reports -------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """Energy lower bound and capacity upper bound from a cover or series.

    ``capacity_upper`` uses the conservative (large) end of the series
    bracket, so it is a true bound even before the series converges;
    ``capacity_bracket`` shows how much the truncation still matters.  A
    divergent series yields the vacuous bound 1.0 with converged=False.
    """

    series_lo: float
    series_hi: float
    energy_lower: float
    capacity_upper: float
    capacity_bracket: Tuple[float, float]
    converged: bool
    source: str

    def to_dict(self) -> dict:
        return {
            "series_lo": self.series_lo,
            "series_hi": self.series_hi,
            "energy_lower_bound": self.energy_lower,
            "capacity_upper_bound": self.capacity_upper,
            "capacity_bracket_lo": self.capacity_bracket[0],
            "capacity_bracket_hi": self.capacity_bracket[1],
            "converged": self.converged,
            "source": self.source,
        }


def capacity_upper_bound(source: Union[CoverDescription, TailSeries]) -> BoundReport:
    """Capacity upper bound exp(-1/S) from a finite cover or a level-tail series."""
    if isinstance(source, CoverDescription):
        s = math.fsum(mult / (-ll) for ll, mult in source.entries)
        s_lo = s_hi = s
        kind = "cover"
    elif isinstance(source, TailSeries):
        s_lo, s_hi = source.sum_lo, source.sum_hi
        kind = f"tail-series(alpha={source.alpha:g}, m={source.m})"
    else:
        raise InvalidArgumentError("pass a CoverDescription or a TailSeries")
    if math.isinf(s_hi):
        return BoundReport(s_lo, s_hi, 0.0, 1.0, (math.exp(-1.0 / s_lo), 1.0), False, kind)
    energy_lower = 1.0 / s_hi
    bracket = (math.exp(-1.0 / s_lo), math.exp(-1.0 / s_hi))
    return BoundReport(s_lo, s_hi, energy_lower, bracket[1], bracket, True, kind)


# -- phase classification -------------------------------------------------------

class PhaseLabel(Enum):
    ZERO_CAPACITY = "zero-capacity"
    FULL_CAPACITY = "full-capacity"
    OPEN_BOUNDARY = "open-boundary"


def phase_classify(alpha: float) -> PhaseLabel:
    """Side of the alpha = 2 transition a exp(-n**alpha) schedule falls on."""
    if not (alpha >= 1.0) or math.isinf(alpha) or math.isnan(alpha):
        raise InvalidArgumentError(f"alpha must be a finite real >= 1, got {alpha!r}")
    if alpha > 2.0:
        return PhaseLabel.ZERO_CAPACITY
    if alpha < 2.0:
        return PhaseLabel.FULL_CAPACITY
    return PhaseLabel.OPEN_BOUNDARY


# -- measuring functions ---------------------------------------------------------

@dataclass(frozen=True)
class MeasuringFunction:
    """A gauge h(r) applied to cover pieces, carried in log/loglog domain.

    ``log_h`` maps log r -> log h(r) for desk-scale radii.  ``loglog_log_h``
    maps lam = log|log r| -> log h(r) for radii whose log already overflows;
    ``mp_log_h`` is the same map in mpmath arithmetic, used when schedule rows
    must be certified at thousands of digits.
    """

    name: str
    log_h: Callable[[float], float]
    loglog_log_h: Optional[Callable[[float], float]] = None
    mp_log_h: Optional[Callable] = None

    @classmethod
    def reciprocal_log(cls) -> "MeasuringFunction":
        """h0(r) = 1/|log r|, the gauge whose volume sums drive the CS bound."""
        return cls(
            name="1/|log r|",
            log_h=lambda lr: -math.log(-lr),
            loglog_log_h=lambda lam: -lam,
            mp_log_h=lambda lam: -lam,
        )

    @classmethod
    def reciprocal_log_loglog(cls) -> "MeasuringFunction":
        """h(r) = 1/(|log r| log|log r|): barely smaller than h0."""
        return cls(
            name="1/(|log r| log|log r|)",
            log_h=lambda lr: -(math.log(-lr) + math.log(math.log(-lr))),
            loglog_log_h=lambda lam: -(lam + math.log(lam)),
            mp_log_h=lambda lam: -(lam + mp.log(lam)),
        )

    @classmethod
    def length(cls) -> "MeasuringFunction":
        """h(r) = r itself."""

        def _loglog(lam: float) -> float:
            return -math.exp(lam) if lam < 709.0 else -math.inf

        return cls(
            name="r",
            log_h=lambda lr: lr,
            loglog_log_h=_loglog,
            mp_log_h=lambda lam: -mp.e**lam,
        )

    @classmethod
    def from_callable(cls, name: str, log_h: Callable[[float], float]) -> "MeasuringFunction":
        return cls(name=name, log_h=log_h)

    def h_of_log_r(self, log_r: float) -> float:
        return math.exp(self.log_h(log_r))


def h_volume_upper(cover: CoverDescription, h: MeasuringFunction) -> float:
    """sum over cover pieces of h(length): the h-volume of the covered set."""
    return math.fsum(mult * h.h_of_log_r(ll) for ll, mult in cover.entries)


# -- witness schedules ------------------------------------------------------------

@dataclass(frozen=True)
class UrsellRow:
    """One certified row: level count n against radius described by lam = log|log r|."""

    j: int
    n: int
    lam: float
    log_r: float            # -exp(lam), or -inf once that overflows
    n_times_h: float
    log2_count_ratio: float  # log2(n / |log r|)

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "n": str(self.n),  # may exceed 64-bit integers by thousands of digits
            "lam": self.lam,
            "log_r": self.log_r,
            "n_times_h": self.n_times_h,
            "log2_count_ratio": self.log2_count_ratio,
        }


@dataclass(frozen=True)
class UrsellSchedule:
    """Rows (j, n_j, r_j) with n_j h(r_j) < 2**-j while n_j / |log r_j| > 2**j.

    Such a schedule shows the gauge h undercounts: the h-volume of the level
    pieces vanishes even though the pieces-per-log-unit count explodes, which
    is exactly the wedge between h and h0 = 1/|log r|.
    """

    rows: Tuple[UrsellRow, ...]
    h_name: str

    def to_dict(self) -> dict:
        return {"h": self.h_name, "rows": [r.to_dict() for r in self.rows]}


def doubly_exponential_witness(count: int = 5, base: float = 4.0) -> Tuple[float, ...]:
    """Canonical witness lam_j = base**(j+1), i.e. log r_j = -exp(base**(j+1))."""
    if count < 1:
        raise InvalidArgumentError("need at least one witness row")
    if not (base > 1.0):
        raise InvalidArgumentError("base must exceed 1")
    return tuple(base ** (j + 1) for j in range(1, count + 1))


def ursell_schedule(
    h: MeasuringFunction,
    witness_loglog: Sequence[float],
    rows: Optional[int] = None,
) -> UrsellSchedule:
    """Certify a measuring-function schedule row by row in extended precision.

    ``witness_loglog`` lists lam_j = log|log r_j| (the radii themselves are far
    below float range).  Row j requires the premise h(r_j) |log r_j| <= 4**-(j+1)
    -- non-strict, since the canonical witness for h = 1/(|log r| log|log r|)
    achieves it with equality -- and then certifies, with n_j = floor of
    sqrt(|log r_j| / h(r_j)) computed as an exact integer:

        n_j h(r_j) < 2**-j    and    n_j > 2**j |log r_j|.

    Violations raise WitnessError naming the offending j; in particular the
    gauge h0 = 1/|log r| fails the premise at j = 1, as it must.
    """
    if h.mp_log_h is None:
        raise InvalidArgumentError(
            f"measuring function {h.name!r} has no extended-precision form; "
            "schedule rows cannot be certified"
        )
    lams = [float(x) for x in witness_loglog]
    if rows is not None:
        if rows < 1 or rows > len(lams):
            raise InvalidArgumentError(f"rows must lie in 1..{len(lams)}")
        lams = lams[:rows]
    out = []
    for j, lam in enumerate(lams, start=1):
        if not math.isfinite(lam) or lam <= 0.0:
            raise WitnessError(j, f"witness row {j} needs a finite lam > 0, got {lam!r}")
        dps = max(60, int(lam * 0.4343) + 40)
        with mp.workdps(dps):
            big_l = mp.e**mp.mpf(lam)          # |log r_j|
            log_h = h.mp_log_h(mp.mpf(lam))
            h_val = mp.e**log_h
            # compare the premise in log domain with guard-digit slack: the
            # canonical witness meets it with exact equality, which linear
            # arithmetic can tip either way by one rounding
            log_premise = log_h + mp.mpf(lam)
            log_threshold = -(j + 1) * mp.log(4)
            if log_premise > log_threshold + mp.mpf(10) ** (-(dps // 2)):
                raise WitnessError(
                    j,
                    f"witness fails the volume premise at j={j}: "
                    f"h(r)|log r| = {mp.nstr(mp.e**log_premise, 8)} > "
                    f"4^-(j+1) = {mp.nstr(mp.e**log_threshold, 8)}",
                )
            n = int(mp.floor(mp.sqrt(big_l / h_val)))
            if n < 1:
                raise WitnessError(j, f"row j={j} collapses: derived level count is zero")
            nh = mp.mpf(n) * h_val
            if not nh < mp.mpf(2) ** (-j):
                raise WitnessError(
                    j, f"row j={j}: n h(r) = {mp.nstr(nh, 8)} is not below 2^-{j}"
                )
            ratio = mp.mpf(n) / big_l
            if not ratio > mp.mpf(2) ** j:
                raise WitnessError(
                    j, f"row j={j}: n/|log r| = {mp.nstr(ratio, 8)} is not above 2^{j}"
                )
            log_r = -math.exp(lam) if lam < 709.0 else -math.inf
            out.append(
                UrsellRow(
                    j=j,
                    n=n,
                    lam=lam,
                    log_r=log_r,
                    n_times_h=float(nh),
                    log2_count_ratio=float(mp.log(ratio) / mp.log(2)),
                )
            )
    return UrsellSchedule(tuple(out), h.name)
