"""Energy engine: exact constants, the discrete equilibrium oracle, policy
behavior, the O(n) fast path, and the bilinear-form properties."""

import math
from fractions import Fraction

import numpy as np
import pytest

from logcap.energy import (
    EvalPolicy,
    TruncationLevel,
    energy,
    mutual_energy,
    mutual_energy_const,
    self_energy_const,
    truncated_energy,
    uniform_level_energy_fast,
)
from logcap.errors import GeometryError, PolicyError
from logcap.intervals import Interval, make_uniform_level
from logcap.logdomain import LogLength
from logcap.measures import StepMeasure, WeightVector, redistribute

LOG4 = math.log(4.0)


def iv(left, right):
    return Interval.from_endpoints(Fraction(left), Fraction(right))


def _random_measure(rng, max_pieces=6, min_len=1e-3, lo=0.0, hi=1.0):
    """Random disjoint step probability measure on [lo, hi]."""
    n = int(rng.integers(1, max_pieces + 1))
    cuts = np.sort(rng.uniform(lo, hi, size=2 * n))
    while np.min(np.diff(cuts)) < min_len * (hi - lo):
        cuts = np.sort(rng.uniform(lo, hi, size=2 * n))
    pieces = [
        Interval.from_endpoints(cuts[2 * i], cuts[2 * i + 1]) for i in range(n)
    ]
    dens = rng.uniform(0.2, 3.0, size=n)
    mu = StepMeasure.from_pieces(pieces, np.log(dens))
    return mu.scaled(-math.log(mu.total_mass))


# -- exact constants -------------------------------------------------------------

def test_lebesgue_energy_exact():
    assert energy(StepMeasure.unit_lebesgue()).total == pytest.approx(1.5, abs=1e-12)


def test_self_energy_constants():
    assert self_energy_const(Interval.unit()) == pytest.approx(1.5, abs=1e-15)
    assert self_energy_const(LogLength(-1000.0)) == 1001.5
    assert self_energy_const(iv(0, Fraction(1, 2))) == pytest.approx(
        math.log(2) + 1.5, rel=1e-15
    )


# -- discrete equilibrium oracle ---------------------------------------------------

def _four_corner_avg(a, b, c, d):
    """Average of -log|x-y| over [a,b]x[c,d], independent corner formula."""

    def G(t):
        t = abs(t)
        return 0.0 if t == 0.0 else 0.5 * t * t * math.log(t) - 0.75 * t * t

    return -(G(d - a) + G(c - b) - G(c - a) - G(d - b)) / ((b - a) * (d - c))


def _equilibrium_min(edges):
    n = len(edges) - 1
    A = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            A[i, j] = _four_corner_avg(edges[i], edges[i + 1], edges[j], edges[j + 1])
    x = np.linalg.solve(A, np.ones(n))
    return 1.0 / x.sum()


def test_equilibrium_oracle_converges_to_log4_from_above():
    prev = math.inf
    for n in (4, 16, 64, 256):
        val = _equilibrium_min(np.linspace(0.0, 1.0, n + 1))
        assert LOG4 < val < prev
        prev = val
    assert prev - LOG4 < 2e-3  # n = 256 lands within a millinat


def test_equilibrium_oracle_rescaling_identity():
    # shrinking the interval by L shifts every matrix entry by -log L, so the
    # discrete minimum shifts by exactly -log L
    unit = _equilibrium_min(np.linspace(0.0, 1.0, 129))
    half = _equilibrium_min(np.linspace(0.0, 0.5, 129))
    assert half - unit == pytest.approx(math.log(2.0), abs=1e-12)


def test_engine_matches_four_corner_oracle_on_random_measure():
    rng = np.random.default_rng(3)
    mu = _random_measure(rng, max_pieces=5, min_len=5e-3)
    total = 0.0
    slabs = mu.slabs
    for s in slabs:
        for t in slabs:
            total += (
                math.exp(s.log_mass + t.log_mass)
                * _four_corner_avg(
                    s.interval.float_left,
                    s.interval.float_right,
                    t.interval.float_left,
                    t.interval.float_right,
                )
            )
    assert energy(mu, EvalPolicy.exact()).total == pytest.approx(total, rel=1e-9)


# -- policies --------------------------------------------------------------------

def test_exact_policy_refuses_deep_measures():
    mu = redistribute(StepMeasure.unit_lebesgue(), make_uniform_level(4, LogLength(-40.0)))
    with pytest.raises(PolicyError):
        energy(mu, EvalPolicy.exact())
    assert energy(mu, EvalPolicy.auto()).total > 0  # auto handles it


def test_point_charge_policy_refuses_fat_measures():
    # two overlapping slabs: rho > 1 for the cross pair
    mu = StepMeasure.from_pieces(
        [iv(0, Fraction(3, 5)), iv(Fraction(2, 5), 1)], [0.0, 0.0]
    ).scaled(-math.log(1.2))
    with pytest.raises(GeometryError):
        energy(mu, EvalPolicy.point_charge())


def test_deep_level_point_charge_certificate():
    # two pieces of log-length -1000 at 1/4 and 3/4: cross term is log 2 exactly
    mu = redistribute(StepMeasure.unit_lebesgue(), make_uniform_level(2, LogLength(-1000.0)))
    brk = energy(mu, EvalPolicy.point_charge())
    assert brk.cross_part == pytest.approx(0.5 * math.log(2.0), rel=1e-14)
    assert brk.certified_error < 1e-300
    # log-domain normalization costs ~eps * |log r| of relative accuracy
    assert brk.self_part == pytest.approx(0.5 * 1001.5, rel=1e-12)


def test_point_charge_within_certificate_random_measures():
    rng = np.random.default_rng(17)
    policy_pc = EvalPolicy.point_charge()
    policy_ex = EvalPolicy.exact()
    for _ in range(200):
        # separated supports keep every cross pair point-charge eligible
        mu = _random_measure(rng, max_pieces=3, min_len=1e-3, lo=0.0, hi=0.45)
        nu = _random_measure(rng, max_pieces=3, min_len=1e-3, lo=0.55, hi=1.0)
        pc, delta = mutual_energy(mu, nu, policy_pc)
        exact, _ = mutual_energy(mu, nu, policy_ex)
        assert abs(exact - pc) <= delta


def test_auto_certificate_on_deep_level():
    brk = energy(
        redistribute(StepMeasure.unit_lebesgue(), make_uniform_level(64, LogLength(-400.0)))
    )
    # every cross pair point-charged: certificate tiny but nonzero
    assert 0 < brk.certified_error < 1e-100


# -- bilinear form properties ---------------------------------------------------

def test_mutual_energy_of_measure_with_itself_is_total():
    rng = np.random.default_rng(5)
    for _ in range(100):
        mu = _random_measure(rng)
        v, _ = mutual_energy(mu, mu)
        assert v == pytest.approx(energy(mu).total, rel=1e-12)


def test_mutual_energy_symmetry_bit_exact():
    rng = np.random.default_rng(6)
    for _ in range(50):
        mu = _random_measure(rng)
        nu = _random_measure(rng)
        assert mutual_energy(mu, nu) == mutual_energy(nu, mu)


def test_mutual_energy_linearity():
    rng = np.random.default_rng(8)
    for _ in range(20):
        mu, nu, tau = (_random_measure(rng) for _ in range(3))
        a = float(rng.uniform(0.1, 0.9))
        mix = StepMeasure.convex_combination(WeightVector((a, 1.0 - a)), [mu, nu])
        lhs, _ = mutual_energy(mix, tau)
        rhs = a * mutual_energy(mu, tau)[0] + (1 - a) * mutual_energy(nu, tau)[0]
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_energy_form_positivity():
    # I(mu - nu, mu - nu) >= 0 for probability measures
    rng = np.random.default_rng(9)
    for _ in range(100):
        mu = _random_measure(rng)
        nu = _random_measure(rng)
        imm = energy(mu).total
        inn = energy(nu).total
        imn, _ = mutual_energy(mu, nu)
        assert imm + inn - 2 * imn >= -1e-10


def test_energy_above_interval_minimum():
    # log 4 is the least possible energy for a probability measure on [0,1]
    rng = np.random.default_rng(10)
    for _ in range(50):
        assert energy(_random_measure(rng)).total >= LOG4 - 1e-12


def test_mutual_energy_const_pair():
    v, err = mutual_energy_const(
        iv(Fraction(1, 8), Fraction(2, 8)), iv(Fraction(5, 8), Fraction(6, 8)), EvalPolicy.exact()
    )
    want = _four_corner_avg(1 / 8, 2 / 8, 5 / 8, 6 / 8)
    assert v == pytest.approx(want, rel=1e-12)
    assert err == 0.0


# -- fast path --------------------------------------------------------------------

def test_fast_path_small_n_matches_quadratic_path():
    r = LogLength(math.log(0.01))
    fast = uniform_level_energy_fast(3, r)
    mu = redistribute(StepMeasure.unit_lebesgue(), make_uniform_level(3, r))
    slow = energy(mu)
    assert fast.total == pytest.approx(slow.total, rel=1e-12)
    assert fast.self_part == pytest.approx(slow.self_part, rel=1e-12)


def test_fast_path_n1_is_self_term_only():
    r = LogLength(-7.0)
    brk = uniform_level_energy_fast(1, r)
    assert brk.cross_part == 0.0
    assert brk.total == pytest.approx(7.0 + 1.5, rel=1e-15)


def test_fast_path_differential_against_slow_path():
    r = LogLength(-44.0)
    for n in (17, 256, 2000):
        fast = uniform_level_energy_fast(n, r)
        mu = redistribute(StepMeasure.unit_lebesgue(), make_uniform_level(n, r))
        slow = energy(mu)
        assert fast.total == pytest.approx(slow.total, rel=1e-12)


def test_breakdown_dict():
    d = uniform_level_energy_fast(5, LogLength(-10.0)).to_dict()
    assert set(d) == {"self", "cross", "total", "certified_error", "policy"}
    assert d["total"] == pytest.approx(d["self"] + d["cross"])


# -- truncated energy ----------------------------------------------------------------

def test_truncated_energy_saturates_at_large_cap():
    leb = StepMeasure.unit_lebesgue()
    v = truncated_energy(leb, TruncationLevel(40.0))
    assert v == pytest.approx(1.5, abs=1e-12)


def test_truncated_energy_tiny_cap():
    rng = np.random.default_rng(12)
    for _ in range(10):
        mu = _random_measure(rng)
        v = truncated_energy(mu, TruncationLevel(1e-4))
        assert 0.0 <= v <= 1e-4 + 1e-15


def test_truncated_energy_monotone_in_cap_below_total():
    rng = np.random.default_rng(13)
    for _ in range(50):
        mu = _random_measure(rng, max_pieces=3)
        total = energy(mu, EvalPolicy.exact()).total
        prev = 0.0
        for cap in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0):
            v = truncated_energy(mu, TruncationLevel(cap))
            assert prev - 1e-12 <= v <= total + 1e-10
            prev = v
