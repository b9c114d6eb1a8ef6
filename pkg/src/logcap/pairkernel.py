"""Closed-form logarithmic energies of uniform charges on interval pairs.

Everything here is scalar reference code; the array backends re-implement the
same dispatch and are differential-tested against this module.

Notation: a pair of intervals with full lengths l1, l2 and center distance d
is reduced to the dimensionless ratios u = l1/d, v = l2/d and

    x_s = (u + v)/2,   x_t = |u - v|/2,

so the closures are disjoint iff x_s <= 1 (x_s is also the point-charge
separation ratio rho).  The mutual energy of the two uniform unit charges is

    M = -log d + (S(x_s) - S(x_t)) / (x_s**2 - x_t**2),

with S(x) = -(1-x)**2 log(1-x)/2 - (1+x)**2 log(1+x)/2 + 3 x**2 / 2, an even
function vanishing to fourth order at 0 (S'' (x) = -log(1 - x**2)).  The
rearrangement matters: the textbook four-term antiderivative difference loses
~(d**2/(l1*l2)) * eps of relative precision, which is catastrophic exactly in
the far-separated regime this package lives in, while the form above is stable
at any separation.  For x < 1/2 both S and the divided difference are summed
as series with positive terms, so there is no cancellation at all.
"""

from __future__ import annotations

import math

from .errors import GeometryError, InvalidArgumentError, PolicyError
from .logdomain import LN2

# Policy mode tags shared with the array backends (kept as ints so the Cython
# code can switch on them without object overhead).
MODE_EXACT = 0
MODE_POINT_CHARGE = 1
MODE_AUTO = 2

EXACT_LOG_RANGE = 30.0       # |log length| admitted by the Exact policy
OVERLAP_LOG_RANGE = 30.0     # |log length| admitted by the overlap formula
ERROR_CAP = 2.0              # certified-error cap for point-charge evaluation

S_AT_ONE = 1.5 - 2.0 * LN2   # S(1), where (1-x)^2 log(1-x) -> 0

# Series S(x) = sum_{k>=2} x^(2k) / (2k (k-1) (2k-1)), valid for |x| < 1,
# used below x = 1/2 where ~30 terms reach double precision.
_S_COEFFS = tuple(1.0 / (2.0 * k * (k - 1) * (2 * k - 1)) for k in range(2, 42))

# Series phi(b) = 1/2 + sum_{k>=1} b^(2k) / ((2k-1) 2k (2k+1)); phi(1) = log 2.
_PHI_COEFFS = tuple(1.0 / ((2 * k - 1) * 2.0 * k * (2 * k + 1)) for k in range(1, 42))


def kernel_antiderivative(t: float) -> float:
    """G(t) = (t^2/2) log|t| - 3 t^2 / 4, the second antiderivative of log|t|.

    G is even, G(0) = 0, and the mutual integral of log|x - y| over a pair of
    intervals is the alternating four-corner sum of G.  Only safe at desk
    scale; the stable routines below are preferred whenever closures are
    disjoint.
    """
    if t == 0.0:
        return 0.0
    a = abs(t)
    return 0.5 * a * a * math.log(a) - 0.75 * a * a


def s_function(x: float) -> float:
    """S(x) on [0, 1]; series below 1/2, closed form above."""
    if x < 0.0 or x > 1.0 or math.isnan(x):
        raise InvalidArgumentError(f"S is defined on [0, 1], got {x!r}")
    if x < 0.5:
        y = x * x
        acc = 0.0
        for c in reversed(_S_COEFFS):
            acc = (acc + c) * y
        return acc * y  # one extra factor: series starts at y^2
    if x == 1.0:
        return S_AT_ONE
    return (
        -0.5 * (1.0 - x) ** 2 * math.log1p(-x)
        - 0.5 * (1.0 + x) ** 2 * math.log1p(x)
        + 1.5 * x * x
    )


def s_derivative(x: float) -> float:
    """S'(x) = (1-x) log(1-x) - (1+x) log(1+x) + 2x."""
    if x == 1.0:
        return 2.0 - 2.0 * LN2
    return (1.0 - x) * math.log1p(-x) - (1.0 + x) * math.log1p(x) + 2.0 * x


def _divided_s_series(a: float, b: float) -> float:
    """(S(x_s) - S(x_t)) / (a - b) for a = x_s^2, b = x_t^2, both < 1/4.

    Sums c_k * (a^k - b^k)/(a - b) via the recursion q_1 = 1,
    q_{k+1} = a q_k + b^k, all terms positive: no cancellation even when
    a == b to machine precision.
    """
    qk = a + b          # q_2
    bk = b              # b^1
    total = 0.0
    for c in _S_COEFFS:
        term = c * qk
        total += term
        if term <= total * 1e-18:
            break
        bk *= b
        qk = a * qk + bk
    return total


def mutual_correction(u: float, v: float) -> float:
    """(S(x_s) - S(x_t)) / (u v) for disjoint closures (x_s <= 1).

    This is the exact, positive amount by which the true mutual energy
    exceeds the point-charge value -log d.  Relative accuracy is ~1e-16 for
    x_s < 1/2; above that the closed forms cancel to ~eps * S(x_s)/(u v),
    which stays below 1e-13 for length ratios up to ~1e4.
    """
    xs = 0.5 * (u + v)
    xt = 0.5 * abs(u - v)
    if xs == 0.0:
        return 0.0
    a = xs * xs
    b = xt * xt
    if xs < 0.5:
        return _divided_s_series(a, b)
    if a == b:
        # one ratio underflowed relative to the other; take the limit
        return s_derivative(xs) / (xs + xt)
    return (s_function(xs) - s_function(xt)) / (a - b)


def phi_function(beta: float) -> float:
    """phi(b) on (0, 1]: concentric shape factor with phi(0+) = 1/2, phi(1) = log 2."""
    if not (0.0 <= beta <= 1.0):
        raise InvalidArgumentError(f"beta must lie in [0, 1], got {beta!r}")
    if beta < 0.5:
        y = beta * beta
        acc = 0.0
        for c in reversed(_PHI_COEFFS):
            acc = (acc + c) * y
        return 0.5 + acc
    if beta == 1.0:
        return LN2
    num = (1.0 + beta) ** 2 * math.log1p(beta) - (1.0 - beta) ** 2 * math.log1p(-beta)
    return num / (4.0 * beta)


def self_energy_log(log_length: float) -> float:
    """Energy of the uniform unit charge on a single interval: -log l + 3/2."""
    return 1.5 - log_length


def concentric_energy(ll1: float, ll2: float) -> float:
    """Mutual energy of uniform charges on exactly co-centered intervals.

    Log-domain safe: only the difference of log lengths enters the shape
    factor.  Reduces to the self energy when the lengths coincide and to the
    centered point-charge value -log(l/2) + 1 as the inner length -> 0.
    """
    ll_big = max(ll1, ll2)
    beta = math.exp(-abs(ll1 - ll2))
    return -ll_big + LN2 + 1.5 - phi_function(beta)


def overlap_energy(d: float, ll1: float, ll2: float) -> float:
    """Mutual energy for arbitrarily overlapping intervals, desk scale only.

    Uses the four-corner antiderivative sum, which is fine here because
    overlap forces d to be comparable to the lengths.
    """
    if min(ll1, ll2) < -OVERLAP_LOG_RANGE:
        raise PolicyError(
            "overlapping pieces below length exp(-30) are outside the "
            "closed-form overlap range"
        )
    l1 = math.exp(ll1)
    l2 = math.exp(ll2)
    s = 0.5 * (l1 + l2)
    t = 0.5 * abs(l1 - l2)
    raw = (
        kernel_antiderivative(d + s)
        + kernel_antiderivative(d - s)
        - kernel_antiderivative(d + t)
        - kernel_antiderivative(d - t)
    )
    return -raw / (l1 * l2)


def point_charge_error(rho: float) -> float:
    """Certified width of the point-charge sandwich: min(2, -log(1 - rho)).

    The true mutual energy lies strictly between -log d and -log d + this
    bound whenever 0 < rho < 1.  Underflows to 0.0 for rho below ~1e-308,
    where the enclosure is tighter than one ulp anyway.
    """
    if rho >= 1.0:
        raise GeometryError(f"separation ratio rho = {rho!r} >= 1: closures intersect")
    if rho <= 0.0:
        return 0.0
    return min(ERROR_CAP, -math.log1p(-rho))


def mutual_energy_pair(
    d: float,
    ll1: float,
    ll2: float,
    mode: int = MODE_AUTO,
    rho_threshold: float = 1e-8,
) -> tuple:
    """Mutual energy of two uniform unit charges plus a certified error bound.

    ``d`` is the (exact) center distance, ``ll1``/``ll2`` the log lengths.
    Dispatch:

    * d == 0: concentric closed form (PolicyError under point-charge mode);
    * rho >= 1: overlap closed form (GeometryError under point-charge mode);
    * otherwise point-charge or stable exact evaluation per the mode, with
      Auto switching at ``rho_threshold``.

    The returned error is 0.0 for every closed-form branch and the sandwich
    width for point-charge evaluation.
    """
    if not (d >= 0.0) or math.isinf(d):
        raise InvalidArgumentError(f"center distance must be finite and >= 0, got {d!r}")
    if mode == MODE_EXACT and max(abs(ll1), abs(ll2)) > EXACT_LOG_RANGE:
        raise PolicyError(
            f"Exact policy admits |log length| <= {EXACT_LOG_RANGE:g}; "
            "use Auto for extreme scales"
        )
    if d == 0.0:
        if mode == MODE_POINT_CHARGE:
            raise PolicyError("point-charge policy cannot evaluate co-centered pieces")
        return concentric_energy(ll1, ll2), 0.0
    ln_d = math.log(d)
    e1 = ll1 - ln_d
    e2 = ll2 - ln_d
    if e1 > 690.0 or e2 > 690.0:
        rho = math.inf
        u = v = math.inf
    else:
        u = math.exp(e1)
        v = math.exp(e2)
        rho = 0.5 * (u + v)
    if rho >= 1.0 and mode == MODE_POINT_CHARGE:
        raise GeometryError(f"rho = {rho:g} >= 1: closures intersect")
    if rho > 1.0:
        return overlap_energy(d, ll1, ll2), 0.0
    if mode == MODE_POINT_CHARGE or (mode == MODE_AUTO and rho < rho_threshold):
        return -ln_d, point_charge_error(rho)
    return -ln_d + mutual_correction(u, v), 0.0


# -- truncated kernel -------------------------------------------------------

def _xlogx(t: float) -> float:
    return t * math.log(t) if t > 0.0 else 0.0


def _log_antider(alpha: float, beta: float, t: float) -> float:
    """Antiderivative of (alpha + beta u) * (-log u) at u = t > 0."""
    return -(alpha * (_xlogx(t) - t) + beta * (0.5 * t * t * math.log(t) - 0.25 * t * t)) if t > 0.0 else 0.0


def truncated_rect_avg(d_signed: float, ll1: float, ll2: float, cap: float) -> float:
    """Average of min(-log|x - y|, cap) over J x J', any overlap, desk scale.

    Integrates the capped kernel against the trapezoidal overlap density of
    the difference x - y.  ``d_signed`` is c1 - c2 (sign irrelevant by
    symmetry but accepted signed).
    """
    if cap <= 0.0 or not math.isfinite(cap):
        raise InvalidArgumentError(f"cap must be a positive real, got {cap!r}")
    if min(ll1, ll2) < -OVERLAP_LOG_RANGE:
        raise PolicyError("truncated kernel averages are desk-scale only (log length >= -30)")
    l1 = math.exp(ll1)
    l2 = math.exp(ll2)
    d = abs(d_signed)
    s = 0.5 * (l1 + l2)
    t = 0.5 * abs(l1 - l2)
    tau = math.exp(-cap)

    # Breakpoints of the trapezoid lambda(u) on [d - s, d + s] plus the cap
    # radius and the origin; lambda is linear between consecutive points.
    points = sorted({d - s, d - t, d + t, d + s, -tau, tau, 0.0})
    lo, hi = d - s, d + s
    total = 0.0
    lmin = min(l1, l2)
    for p, q in zip(points, points[1:]):
        a = max(p, lo)
        b = min(q, hi)
        if b <= a:
            continue
        # lambda(u) = alpha + beta*u on [a, b]
        mid = 0.5 * (a + b)
        if mid < d - t:
            alpha, beta = s - d, 1.0
        elif mid > d + t:
            alpha, beta = s + d, -1.0
        else:
            alpha, beta = lmin, 0.0
        if -tau <= a and b <= tau:
            # fully capped cell: integrand is cap * lambda(u)
            total += cap * (alpha * (b - a) + 0.5 * beta * (b * b - a * a))
        elif a >= 0.0:
            total += _log_antider(alpha, beta, b) - _log_antider(alpha, beta, a)
        else:
            # u < 0: substitute w = -u, flipping the slope
            total += _log_antider(alpha, -beta, -a) - _log_antider(alpha, -beta, -b)
    return total / (l1 * l2)
