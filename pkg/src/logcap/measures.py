"""Step measures: finite sums of uniform charges on intervals.

A :class:`StepMeasure` is a list of slabs, each a piece with a constant
density carried in log domain.  Densities must live in logs: conditioning
Lebesgue measure on a level with radius exp(-n**alpha) multiplies the density
by exp(n**alpha)/n, which overflows any float.  Slab masses, by contrast, are
ordinary floats (a probability splits across pieces), and the energy engine
consumes (center, log length, mass) triples.

Slabs are allowed to overlap: a step measure is the *sum* of its slabs, which
is exactly what convex combinations of level measures produce (nested pieces
at a shared center).  Operations that need a set-like support validate and
merge explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    CutoffError,
    DisjointnessError,
    InvalidArgumentError,
    ZeroMassError,
)
from .intervals import (
    COVERS,
    DISJOINT,
    INSIDE,
    Interval,
    IntervalUnion,
    _cut_piece,
    interval_relation,
    make_uniform_level,
)
from .logdomain import LN2, log_of_fraction
from .primes import primes_in_window
from .schedules import RadiusSchedule, schedule_radius

MASS_LOG_FLOOR = -700.0  # slab masses must stay representable as floats


@dataclass(frozen=True)
class Slab:
    """A piece with constant density exp(log_density)."""

    interval: Interval
    log_density: float

    def __post_init__(self):
        if not isinstance(self.interval, Interval):
            raise InvalidArgumentError("slab needs an Interval")
        ld = self.log_density
        if not isinstance(ld, float) or math.isnan(ld) or math.isinf(ld):
            raise InvalidArgumentError(f"log_density must be a finite float, got {ld!r}")

    @property
    def log_mass(self) -> float:
        return self.log_density + self.interval.log_length


class StepMeasure:
    """Finite positive measure: sum of uniform slabs."""

    __slots__ = ("slabs",)

    def __init__(self, slabs: Sequence[Slab]):
        slabs = tuple(slabs)
        if not slabs:
            raise InvalidArgumentError("a step measure needs at least one slab")
        for s in slabs:
            if s.log_mass < MASS_LOG_FLOOR:
                raise InvalidArgumentError(
                    f"slab mass underflows doubles (log mass {s.log_mass:.3g}); "
                    "the energy engine cannot weight it"
                )
        self.slabs = slabs

    def __len__(self) -> int:
        return len(self.slabs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_pieces(
        cls,
        pieces: Sequence[Interval],
        log_densities: Sequence[float],
    ) -> "StepMeasure":
        if len(pieces) != len(log_densities):
            raise InvalidArgumentError("pieces and densities differ in length")
        return cls([Slab(p, float(ld)) for p, ld in zip(pieces, log_densities)])

    @classmethod
    def uniform_on(cls, support: IntervalUnion) -> "StepMeasure":
        """Probability measure with constant density on a disjoint union."""
        if support.is_empty:
            raise InvalidArgumentError("cannot put a measure on the empty set")
        ld = -support.total_log_length
        return cls([Slab(p, ld) for p in support.pieces])

    @classmethod
    def unit_lebesgue(cls) -> "StepMeasure":
        return cls([Slab(Interval.unit(), 0.0)])

    @classmethod
    def convex_combination(
        cls,
        weights: "WeightVector",
        measures: Sequence["StepMeasure"],
    ) -> "StepMeasure":
        if len(weights) != len(measures):
            raise InvalidArgumentError("one weight per measure, please")
        slabs: List[Slab] = []
        for w, mu in zip(weights.probabilities, measures):
            if w == 0.0:
                continue
            lw = math.log(w)
            slabs.extend(Slab(s.interval, s.log_density + lw) for s in mu.slabs)
        return cls(slabs)

    # -- mass --------------------------------------------------------------

    @property
    def log_total_mass(self) -> float:
        return float(np.logaddexp.reduce([s.log_mass for s in self.slabs]))

    @property
    def total_mass(self) -> float:
        return math.exp(self.log_total_mass)

    @property
    def is_probability(self) -> bool:
        return abs(self.log_total_mass) <= 1e-12

    def log_mass_of(self, target: IntervalUnion) -> float:
        """log mu(target); -inf when the intersection is null."""
        parts: List[float] = []
        for slab in self.slabs:
            for q in target.pieces:
                rel = interval_relation(slab.interval, q)
                if rel == DISJOINT:
                    continue
                if rel == INSIDE:
                    parts.append(slab.log_mass)
                elif rel == COVERS:
                    parts.append(slab.log_density + q.log_length)
                else:
                    for frag in _cut_piece(slab.interval, q, keep_inside=True):
                        parts.append(slab.log_density + frag.log_length)
        if not parts:
            return -math.inf
        return float(np.logaddexp.reduce(parts))

    # -- geometry ----------------------------------------------------------

    def support(self) -> IntervalUnion:
        """Merged support of the slabs; needs representable endpoints to merge
        genuinely overlapping (non-nested) pieces."""
        by_center = {}
        for s in self.slabs:
            key = s.interval.center_fraction
            prev = by_center.get(key)
            if prev is None or s.interval.log_half > prev.log_half:
                by_center[key] = s.interval
        pieces = sorted(by_center.values(), key=lambda p: (p.center_float, p.log_half))
        merged: List[Interval] = []
        for p in pieces:
            if not merged:
                merged.append(p)
                continue
            last = merged[-1]
            rel = interval_relation(last, p)
            if rel == DISJOINT:
                merged.append(p)
            elif rel == COVERS:
                continue
            elif rel == INSIDE:
                merged[-1] = p
            else:
                if last.is_exact and p.is_exact:
                    merged[-1] = Interval.from_endpoints(
                        min(last.exact_left, p.exact_left),
                        max(last.exact_right, p.exact_right),
                    )
                else:
                    for piece in (last, p):
                        if not piece.has_representable_endpoints:
                            raise InvalidArgumentError(
                                "cannot merge partially overlapping sub-ulp pieces"
                            )
                    merged[-1] = Interval.from_endpoints(
                        min(last.float_left, p.float_left),
                        max(last.float_right, p.float_right),
                    )
        return IntervalUnion(merged, validate=False)

    def is_disjoint(self) -> bool:
        try:
            return len(self.support()) == len(self.slabs)
        except InvalidArgumentError:
            return False

    # -- numerics ------------------------------------------------------------

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(centers, log lengths, masses) for the energy backends."""
        n = len(self.slabs)
        centers = np.empty(n)
        lls = np.empty(n)
        masses = np.empty(n)
        for i, s in enumerate(self.slabs):
            centers[i] = s.interval.center_float
            lls[i] = s.interval.log_length
            masses[i] = math.exp(s.log_mass)
        return centers, lls, masses

    def density_l2sq(self) -> float:
        """integral of f**2 for the density f; assumes disjoint slabs."""
        parts = [2.0 * s.log_density + s.interval.log_length for s in self.slabs]
        return math.exp(float(np.logaddexp.reduce(parts)))

    def scaled(self, log_factor: float) -> "StepMeasure":
        return StepMeasure([Slab(s.interval, s.log_density + log_factor) for s in self.slabs])

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "pieces": [s.interval.to_dict() for s in self.slabs],
            "log_density": [s.log_density for s in self.slabs],
            "density": [
                math.exp(s.log_density) if s.log_density < 700.0 else math.inf
                for s in self.slabs
            ],
            "log_mass": self.log_total_mass,
            "mass": self.total_mass,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StepMeasure":
        pieces = [Interval.from_dict(p) for p in d["pieces"]]
        if "log_density" in d:
            lds = [float(x) for x in d["log_density"]]
        else:
            lds = [math.log(float(x)) for x in d["density"]]
        return cls.from_pieces(pieces, lds)


@dataclass(frozen=True)
class WeightVector:
    """Convex weights: nonnegative, summing to 1 within 1e-12."""

    probabilities: Tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if not probs:
            raise InvalidArgumentError("need at least one weight")
        if any(p < 0.0 or math.isnan(p) for p in probs):
            raise InvalidArgumentError("weights must be nonnegative")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise InvalidArgumentError(f"weights sum to {math.fsum(probs)!r}, not 1")

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        if n < 1:
            raise InvalidArgumentError("need n >= 1 weights")
        return cls(tuple([1.0 / n] * n))

    def __len__(self) -> int:
        return len(self.probabilities)


def redistribute(mu: StepMeasure, target: IntervalUnion, *, snap_tiny: bool = False) -> StepMeasure:
    """Condition mu on target: restrict and renormalize to a probability.

    Pieces that straddle a boundary of ``target`` are cut, which requires
    representable endpoints.  ``snap_tiny=True`` instead assigns a straddling
    sub-ulp piece wholly to the side its center lies in; this changes the
    result by at most the piece's mass and is meant for phase-scan proxies,
    not for exact accounting.
    """
    if target.is_empty:
        raise ZeroMassError("conditioning on the empty set")
    kept: List[Slab] = []
    for slab in mu.slabs:
        for q in target.pieces:
            rel = interval_relation(slab.interval, q)
            if rel == DISJOINT:
                continue
            if rel == INSIDE:
                kept.append(slab)
            elif rel == COVERS:
                # the whole target piece sits inside the slab: no cut needed,
                # and this stays exact at any scale
                kept.append(Slab(q, slab.log_density))
            elif slab.interval.has_representable_endpoints and q.has_representable_endpoints:
                for frag in _cut_piece(slab.interval, q, keep_inside=True):
                    kept.append(Slab(frag, slab.log_density))
            elif snap_tiny:
                kept.extend(_snap_straddler(slab, q))
            else:
                raise InvalidArgumentError(
                    "a piece straddles a boundary of the target at sub-ulp scale; "
                    "pass snap_tiny=True to assign it by center"
                )
    if not kept:
        raise ZeroMassError("mu gives the target set no mass")
    log_mass = float(np.logaddexp.reduce([s.log_mass for s in kept]))
    if log_mass == -math.inf:
        raise ZeroMassError("mu gives the target set no mass")
    return StepMeasure([Slab(s.interval, s.log_density - log_mass) for s in kept])


def _snap_straddler(slab: Slab, q: Interval) -> List[Slab]:
    """Assign a sub-ulp straddling piece wholly by where its center lies.

    The thinner of the two pieces is snapped; the error is at most its mass.
    Used by phase-scan proxies, never by exact accounting paths.
    """
    if slab.interval.log_half <= q.log_half:
        if q.contains_point(slab.interval.center_fraction):
            return [slab]
        return []
    if slab.interval.contains_point(q.center_fraction):
        return [Slab(q, slab.log_density)]
    return []


def averaged_redistribute(
    mu: StepMeasure,
    m: int,
    schedule: RadiusSchedule,
    weights: Optional[WeightVector] = None,
    *,
    snap_tiny: bool = False,
) -> StepMeasure:
    """Average of mu conditioned on each uniform level with prime index in [m, 2m).

    Levels with distinct indices p, q can only meet at exactly shared grid
    centers (both odd: the midpoint 1/2), where the pieces nest concentrically;
    any other contact means the radii are too fat for the window, which raises
    DisjointnessError.  The check uses the exact bound: distinct centers of the
    p- and q-grids are at least 1/(2pq) apart.
    """
    window = primes_in_window(m)
    radii = {}
    for p in window.primes:
        radii[p] = schedule_radius(schedule, p)
    primes = window.primes
    for i, p in enumerate(primes):
        for q in primes[i + 1 :]:
            gap_log = -log_of_fraction(Fraction(2 * p * q))
            halves = np.logaddexp(radii[p].log_value - LN2, radii[q].log_value - LN2)
            if halves >= gap_log:
                raise DisjointnessError(
                    f"levels {p} and {q} overlap away from shared centers: "
                    f"half-length sum exp({halves:.3g}) exceeds the center gap 1/(2*{p}*{q})"
                )
    parts = [
        redistribute(mu, make_uniform_level(p, radii[p]), snap_tiny=snap_tiny)
        for p in primes
    ]
    w = weights if weights is not None else WeightVector.uniform(len(parts))
    if len(w) != len(parts):
        raise InvalidArgumentError(
            f"weight vector has {len(w)} entries for {len(parts)} levels"
        )
    return StepMeasure.convex_combination(w, parts)


# -- arcsine reference -------------------------------------------------------

@dataclass(frozen=True)
class ArcsineReference:
    """Equilibrium density on an interval: 1/(pi sqrt((x-a)(b-x))).

    Its logarithmic energy is log 4 - log(b - a), the smallest among all
    probability measures on the interval; it is the yardstick the capacity
    bounds and cutoff families are measured against.
    """

    interval: Interval

    def __post_init__(self):
        if not self.interval.has_representable_endpoints:
            raise InvalidArgumentError("arcsine reference needs desk-scale endpoints")

    @property
    def a(self) -> float:
        return self.interval.float_left

    @property
    def b(self) -> float:
        return self.interval.float_right

    @property
    def energy_value(self) -> float:
        """log 4 - log(b - a)."""
        return 2.0 * LN2 - self.interval.log_length

    def density(self, x: float) -> float:
        a, b = self.a, self.b
        if not (a < x < b):
            raise InvalidArgumentError(f"x={x!r} outside the open interval ({a}, {b})")
        return 1.0 / (math.pi * math.sqrt((x - a) * (b - x)))

    def to_dict(self) -> dict:
        return {"kind": "arcsine", "interval": self.interval.to_dict()}


def arcsine_reference(interval: Interval) -> ArcsineReference:
    return ArcsineReference(interval)


# -- cutoff families ---------------------------------------------------------

@dataclass(frozen=True)
class CutoffFamily:
    """Linear ramp-in of a base density over width delta at every support edge.

    The base is either a step density (slabs must form a disjoint union) or
    the arcsine reference; delta must be smaller than half the shortest
    support piece so the two ramps of a piece never meet.
    """

    delta: float
    base: Union[StepMeasure, ArcsineReference]

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0) or math.isnan(self.delta):
            raise CutoffError(f"delta must lie in (0, 1), got {self.delta!r}")
        if isinstance(self.base, StepMeasure):
            if len(self.base.support()) != len(self.base.slabs):
                raise CutoffError("cutoff base slabs must form a disjoint union")
            if any(s.log_density < MASS_LOG_FLOOR for s in self.base.slabs):
                raise CutoffError("cutoff base density underflows doubles")
        for piece in self._support_pieces():
            if not piece.has_representable_endpoints:
                raise CutoffError("cutoff families need desk-scale support pieces")
            length = piece.float_right - piece.float_left
            if self.delta >= 0.5 * length:
                raise CutoffError(
                    f"delta={self.delta:g} is at least half the shortest piece "
                    f"(length {length:g})"
                )

    def _support_pieces(self) -> Tuple[Interval, ...]:
        if isinstance(self.base, ArcsineReference):
            return (self.base.interval,)
        return self.base.support().pieces

    def continuous_value(self, x: float) -> float:
        """The ramped density at x (0 outside the support)."""
        for piece, f_edge, f_mid in self._piece_profiles():
            a, b = piece.float_left, piece.float_right
            if not (a < x < b):
                continue
            if x < a + self.delta:
                return (x - a) / self.delta * f_edge(a + self.delta)
            if x > b - self.delta:
                return (b - x) / self.delta * f_edge(b - self.delta)
            return f_mid(x)
        return 0.0

    def _piece_profiles(self):
        """(piece, edge-value function, interior function) triples."""
        out = []
        if isinstance(self.base, ArcsineReference):
            ref = self.base
            out.append((ref.interval, ref.density, ref.density))
        else:
            for slab in self.base.slabs:
                f = math.exp(slab.log_density)
                const = (lambda v: (lambda _x: v))(f)
                out.append((slab.interval, const, const))
        return out


def cutoff_raw_mass(family: CutoffFamily, resolution: int) -> float:
    """Mass Z_delta of the un-normalized step approximation."""
    slabs = _cutoff_slabs(family, resolution)
    return math.exp(float(np.logaddexp.reduce([s.log_mass for s in slabs])))


def cutoff_step_density(family: CutoffFamily, resolution: int) -> StepMeasure:
    """Step approximation of the ramped density, normalized to a probability.

    Each ramp is sampled at the midpoints of ``resolution`` equal substeps;
    non-constant interiors (the arcsine base) get 2*resolution midpoint cells,
    constant interiors a single slab.  Doubling the resolution halves the
    sup-norm error on the ramps exactly (the ramp is linear).
    """
    slabs = _cutoff_slabs(family, resolution)
    log_z = float(np.logaddexp.reduce([s.log_mass for s in slabs]))
    return StepMeasure([Slab(s.interval, s.log_density - log_z) for s in slabs])


def _cutoff_slabs(family: CutoffFamily, resolution: int) -> List[Slab]:
    if not isinstance(resolution, int) or isinstance(resolution, bool) or resolution < 1:
        raise InvalidArgumentError(f"resolution must be an integer >= 1, got {resolution!r}")
    delta = family.delta
    slabs: List[Slab] = []
    arcsine = isinstance(family.base, ArcsineReference)
    for piece, f_edge, f_mid in family._piece_profiles():
        a, b = piece.float_left, piece.float_right
        w = delta / resolution
        # ramp up
        up_target = f_edge(a + delta)
        for i in range(resolution):
            mid_frac = (i + 0.5) / resolution
            value = mid_frac * up_target
            slabs.append(Slab(Interval.from_endpoints(a + i * w, a + (i + 1) * w), math.log(value)))
        # interior
        lo, hi = a + delta, b - delta
        if arcsine:
            cells = 2 * resolution
            cw = (hi - lo) / cells
            for i in range(cells):
                x = lo + (i + 0.5) * cw
                slabs.append(Slab(Interval.from_endpoints(lo + i * cw, lo + (i + 1) * cw), math.log(f_mid(x))))
        else:
            slabs.append(Slab(Interval.from_endpoints(lo, hi), math.log(f_mid(0.5 * (lo + hi)))))
        # ramp down
        down_target = f_edge(b - delta)
        for i in range(resolution):
            mid_frac = (i + 0.5) / resolution
            value = mid_frac * down_target
            slabs.append(Slab(Interval.from_endpoints(b - (i + 1) * w, b - i * w), math.log(value)))
    return slabs
