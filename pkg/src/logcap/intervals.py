"""Intervals and finite interval unions with log-domain half-lengths.

An :class:`Interval` is stored as (center, half_length) rather than as a pair
of endpoints, because at the scales this package works at the endpoints are
usually not representable: a piece of length ``exp(-1024**1.5)`` centered at
9/22 has endpoints that differ from the center by far less than one ulp.  The
center is kept as an exact rational whenever it is one, so distances between
pieces are computed by exact subtraction and only then rounded once.

Set operations are measure-theoretic: all intervals are treated as open, and
results are reported up to finitely many points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DisjointnessError, InvalidArgumentError
from .logdomain import LN2, LogLength, Rational, log_of_fraction, log_sub

CenterLike = Union[Fraction, int, float]


def _as_fraction(x: CenterLike) -> Fraction:
    # Fraction(float) is the exact binary value, so this never loses information.
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Interval:
    """Open interval (center - h, center + h), h carried in log domain."""

    center: CenterLike
    half_length: LogLength

    def __post_init__(self):
        c = self.center
        if isinstance(c, float) and not math.isfinite(c):
            raise InvalidArgumentError(f"center must be finite, got {c!r}")
        if not isinstance(c, (int, float, Fraction)):
            raise InvalidArgumentError(f"center must be rational or float, got {type(c)!r}")
        if not isinstance(self.half_length, LogLength):
            raise InvalidArgumentError("half_length must be a LogLength")

    # -- representations -------------------------------------------------

    @property
    def center_fraction(self) -> Fraction:
        return _as_fraction(self.center)

    @property
    def center_float(self) -> float:
        return float(self.center)

    @property
    def log_half(self) -> float:
        return self.half_length.log_value

    @property
    def log_length(self) -> float:
        return self.half_length.log_value + LN2

    @property
    def length(self) -> LogLength:
        return LogLength(self.log_length, None if self.half_length.exact is None else self.half_length.exact * 2)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.center, (int, Fraction)) and self.half_length.exact is not None

    @property
    def exact_left(self) -> Optional[Fraction]:
        if not self.is_exact:
            return None
        return self.center_fraction - self.half_length.exact

    @property
    def exact_right(self) -> Optional[Fraction]:
        if not self.is_exact:
            return None
        return self.center_fraction + self.half_length.exact

    @property
    def float_left(self) -> float:
        return self.center_float - math.exp(self.log_half)

    @property
    def float_right(self) -> float:
        return self.center_float + math.exp(self.log_half)

    @property
    def has_representable_endpoints(self) -> bool:
        """True when endpoint arithmetic is meaningful (exact, or half >= ulp(center))."""
        if self.is_exact:
            return True
        c = self.center_float
        return self.float_left < c < self.float_right

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_endpoints(cls, left: CenterLike, right: CenterLike) -> "Interval":
        exact = isinstance(left, (int, Fraction)) and isinstance(right, (int, Fraction))
        if exact:
            l, r = Fraction(left), Fraction(right)
            if r <= l:
                raise InvalidArgumentError(f"need left < right, got [{l}, {r}]")
            return cls((l + r) / 2, LogLength.from_length((r - l) / 2))
        l, r = float(left), float(right)
        if not (r > l):
            raise InvalidArgumentError(f"need left < right, got [{l}, {r}]")
        half = (r - l) / 2.0
        return cls((l + r) / 2.0, LogLength.from_length(half))

    @classmethod
    def unit(cls) -> "Interval":
        return cls(Fraction(1, 2), LogLength.from_length(Fraction(1, 2)))

    def contains_point(self, x: CenterLike) -> bool:
        """Open-interval membership; requires representable endpoints."""
        if self.is_exact:
            q = _as_fraction(x)
            return self.exact_left < q < self.exact_right
        if not self.has_representable_endpoints:
            raise InvalidArgumentError("endpoints of a sub-ulp interval are not representable")
        return self.float_left < float(x) < self.float_right

    def to_dict(self) -> dict:
        c = self.center_fraction
        d = {
            "center_num": c.numerator,
            "center_den": c.denominator,
            "log_half_length": self.log_half,
        }
        if self.half_length.exact is not None:
            d["half_num"] = self.half_length.exact.numerator
            d["half_den"] = self.half_length.exact.denominator
        if self.is_exact:
            d["left"] = _rational_string(self.exact_left)
            d["right"] = _rational_string(self.exact_right)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Interval":
        center = Fraction(d["center_num"], d["center_den"])
        exact = Fraction(d["half_num"], d["half_den"]) if "half_num" in d else None
        half = LogLength(float(d["log_half_length"]), exact)
        return cls(center, half)


def _rational_string(q: Fraction) -> str:
    """Exact decimal string when the denominator is 2^a 5^b, else 'p/q'."""
    den = q.denominator
    a = 0
    while den % 2 == 0:
        den //= 2
        a += 1
    b = 0
    while den % 5 == 0:
        den //= 5
        b += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    k = max(a, b)
    scaled = q.numerator * 10**k // q.denominator
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(k + 1, "0")
    if k == 0:
        return sign + digits
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


# -- pairwise relations ---------------------------------------------------

DISJOINT = "disjoint"
INSIDE = "inside"     # first piece contained in second
COVERS = "covers"     # first piece contains second
PARTIAL = "partial"

def interval_relation(f: Interval, q: Interval) -> str:
    """Measure-level relation of two open intervals (containment up to endpoints).

    Exact when both pieces are exact; otherwise decided in log domain, where
    ties at shared endpoints resolve toward the measure-equivalent answer.
    """
    if f.is_exact and q.is_exact:
        d = abs(f.center_fraction - q.center_fraction)
        hf, hq = f.half_length.exact, q.half_length.exact
        if d >= hf + hq:
            return DISJOINT
        if d + hf <= hq:
            return INSIDE
        if d + hq <= hf:
            return COVERS
        return PARTIAL
    d = abs(f.center_fraction - q.center_fraction)
    lhf, lhq = f.log_half, q.log_half
    if d == 0:
        return INSIDE if lhf <= lhq else COVERS
    log_d = log_of_fraction(d)
    if log_d >= np.logaddexp(lhf, lhq):
        return DISJOINT
    if lhf < lhq and log_d <= log_sub(lhq, lhf):
        return INSIDE
    if lhq < lhf and log_d <= log_sub(lhf, lhq):
        return COVERS
    return PARTIAL


class IntervalUnion:
    """Finite union of pairwise-disjoint open intervals, sorted by center."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Sequence[Interval], *, validate: bool = True):
        ordered = tuple(sorted(pieces, key=lambda p: (p.center_float, p.log_half)))
        if validate:
            for a, b in zip(ordered, ordered[1:]):
                if interval_relation(a, b) != DISJOINT:
                    raise DisjointnessError(
                        f"pieces centered at {a.center_float:.17g} and "
                        f"{b.center_float:.17g} overlap"
                    )
        self.pieces = ordered

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        if len(self.pieces) != len(other.pieces):
            return False
        for a, b in zip(self.pieces, other.pieces):
            if a.center_fraction != b.center_fraction:
                return False
            if a.half_length.exact is not None and b.half_length.exact is not None:
                if a.half_length.exact != b.half_length.exact:
                    return False
            elif a.log_half != b.log_half:
                return False
        return True

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def total_log_length(self) -> float:
        if not self.pieces:
            return -math.inf
        return float(np.logaddexp.reduce([p.log_length for p in self.pieces]))

    @property
    def total_length(self) -> float:
        return math.exp(self.total_log_length)

    @property
    def exact_total_length(self) -> Optional[Fraction]:
        total = Fraction(0)
        for p in self.pieces:
            if p.half_length.exact is None:
                return None
            total += 2 * p.half_length.exact
        return total

    @classmethod
    def unit(cls) -> "IntervalUnion":
        return cls((Interval.unit(),), validate=False)

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls((), validate=False)

    def to_dict(self) -> dict:
        return {"pieces": [p.to_dict() for p in self.pieces]}

    @classmethod
    def from_dict(cls, d: dict) -> "IntervalUnion":
        return cls([Interval.from_dict(p) for p in d["pieces"]])


def make_uniform_level(n: int, r: LogLength) -> IntervalUnion:
    """n pieces of length r centered at (2j+1)/(2n), j = 0..n-1.

    Requires n * r < 1 so consecutive pieces are separated by gaps of
    (1 - n*r)/n > 0; violating that is a DisjointnessError, not a generic
    argument error, because it breaks every downstream energy identity.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidArgumentError(f"need an integer level n >= 1, got {n!r}")
    if not isinstance(r, LogLength):
        raise InvalidArgumentError("r must be a LogLength")
    if r.exact is not None:
        ok = n * r.exact < 1
    else:
        ok = r.log_value < -math.log(n)
    if not ok:
        raise DisjointnessError(
            f"n*r >= 1 at n={n} (log r = {r.log_value:.6g}): pieces would overlap"
        )
    half = r.half()
    pieces = [Interval(Fraction(2 * j + 1, 2 * n), half) for j in range(n)]
    return IntervalUnion(pieces, validate=False)


def uniform_level_centers(n: int) -> np.ndarray:
    """Float centers (2j+1)/(2n) as an array; each entry is correctly rounded."""
    j = np.arange(n, dtype=np.float64)
    return (2.0 * j + 1.0) / (2.0 * n)


# -- set operations --------------------------------------------------------

def _require_endpoints(piece: Interval, why: str) -> None:
    if not piece.has_representable_endpoints:
        raise InvalidArgumentError(
            f"{why} requires cutting a piece whose endpoints are not representable "
            f"(center {piece.center_float:.17g}, log half {piece.log_half:.6g}); "
            "supply exact rationals or avoid partial overlap at this scale"
        )


def _cut_piece(f: Interval, q: Interval, keep_inside: bool) -> List[Interval]:
    """Fragments of f inside q (keep_inside) or outside q, via endpoint arithmetic."""
    if f.is_exact and q.is_exact:
        fl, fr = f.exact_left, f.exact_right
        ql, qr = q.exact_left, q.exact_right
    else:
        _require_endpoints(f, "set operation")
        _require_endpoints(q, "set operation")
        fl, fr = f.float_left, f.float_right
        ql, qr = q.float_left, q.float_right
    out: List[Interval] = []
    if keep_inside:
        l, r = max(fl, ql), min(fr, qr)
        if r > l:
            out.append(Interval.from_endpoints(l, r))
    else:
        if ql > fl:
            out.append(Interval.from_endpoints(fl, min(ql, fr)))
        if qr < fr:
            out.append(Interval.from_endpoints(max(qr, fl), fr))
    return out


def set_difference_closed(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    """a minus the closure of b, up to sets of measure zero."""
    result: List[Interval] = []
    for piece in a.pieces:
        fragments = [piece]
        for q in b.pieces:
            if not fragments:
                break
            survivors: List[Interval] = []
            for f in fragments:
                rel = interval_relation(f, q)
                if rel == DISJOINT:
                    survivors.append(f)
                elif rel == INSIDE:
                    pass
                else:
                    survivors.extend(_cut_piece(f, q, keep_inside=False))
            fragments = survivors
        result.extend(fragments)
    return IntervalUnion(result, validate=False)


def set_intersection(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    result: List[Interval] = []
    for piece in a.pieces:
        for q in b.pieces:
            rel = interval_relation(piece, q)
            if rel == DISJOINT:
                continue
            if rel == INSIDE:
                result.append(piece)
            elif rel == COVERS:
                result.append(q)
            else:
                result.extend(_cut_piece(piece, q, keep_inside=True))
    return IntervalUnion(result, validate=False)


def complement_in_unit(a: IntervalUnion) -> IntervalUnion:
    """[0,1] minus the closure of a (measure-level)."""
    return set_difference_closed(IntervalUnion.unit(), a)


def disjointify(pieces: Iterable[Interval]) -> List[IntervalUnion]:
    """Pairwise-disjointify a sequence of intervals, preserving the union.

    Piece k is replaced by (piece k) minus the earlier pieces; the outputs are
    pairwise disjoint interval unions (some possibly empty) whose union equals
    the input union up to measure zero.
    """
    out: List[IntervalUnion] = []
    seen: List[Interval] = []
    for piece in pieces:
        current = IntervalUnion((piece,), validate=False)
        reduced = set_difference_closed(current, IntervalUnion(seen, validate=False))
        out.append(reduced)
        seen.append(piece)
    return out


# -- center arithmetic for pairs of uniform levels --------------------------

def shared_centers(p: int, q: int) -> Tuple[Fraction, ...]:
    """Exact common values of the center grids of levels p and q.

    For distinct coprime levels this is {1/2} when both are odd and empty
    otherwise; the general case is computed directly.
    """
    if p == q:
        raise InvalidArgumentError("levels must be distinct")
    if min(p, q) < 1:
        raise InvalidArgumentError("levels must be >= 1")
    small, large = (p, q) if p <= q else (q, p)
    found = []
    for i in range(small):
        num = (2 * i + 1) * large
        if num % small == 0:
            k = num // small
            if k % 2 == 1 and 1 <= k <= 2 * large - 1:
                found.append(Fraction(2 * i + 1, 2 * small))
    return tuple(found)


def min_center_gap(p: int, q: int) -> Rational:
    """Minimum positive distance between the center grids of levels p and q.

    Shared centers (gap zero) are excluded; for odd primes the answer is
    1/(p*q) because the integer (2i+1)q - (2j+1)p is even and nonzero.
    """
    if p == q or min(p, q) < 1:
        raise InvalidArgumentError("need two distinct levels >= 1")
    best_num = None
    for i in range(p):
        target = (2 * i + 1) * q  # compare against (2j+1) p
        j_mid = (target // p - 1) // 2
        for j in (j_mid - 1, j_mid, j_mid + 1, j_mid + 2):
            if 0 <= j < q:
                num = abs(target - (2 * j + 1) * p)
                if num != 0 and (best_num is None or num < best_num):
                    best_num = num
    if best_num is None:
        raise DisjointnessError(f"center grids of levels {p} and {q} coincide entirely")
    return Fraction(best_num, 2 * p * q)
