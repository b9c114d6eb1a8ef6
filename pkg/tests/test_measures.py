import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from logcap.errors import CutoffError, DisjointnessError, InvalidArgumentError, ZeroMassError
from logcap.intervals import Interval, IntervalUnion, make_uniform_level
from logcap.logdomain import LogLength
from logcap.measures import (
    ArcsineReference,
    CutoffFamily,
    Slab,
    StepMeasure,
    WeightVector,
    arcsine_reference,
    averaged_redistribute,
    cutoff_raw_mass,
    cutoff_step_density,
    redistribute,
)
from logcap.schedules import GeometricDyadic, PowerExp


def iv(left, right):
    return Interval.from_endpoints(Fraction(left), Fraction(right))


def test_unit_lebesgue():
    leb = StepMeasure.unit_lebesgue()
    assert leb.total_mass == 1.0
    assert leb.is_probability


def test_redistribute_identity():
    leb = StepMeasure.unit_lebesgue()
    out = redistribute(leb, IntervalUnion.unit())
    assert out.is_probability
    assert len(out.slabs) == 1
    assert out.slabs[0].log_density == 0.0


def test_redistribute_onto_level_two():
    # conditioning on V_2 with r = 1/10 gives density 5 on each piece
    leb = StepMeasure.unit_lebesgue()
    level = make_uniform_level(2, LogLength.from_length(Fraction(1, 10)))
    out = redistribute(leb, level)
    assert len(out.slabs) == 2
    for slab in out.slabs:
        assert slab.log_density == pytest.approx(math.log(5), rel=1e-14)
    assert out.total_mass == pytest.approx(1.0, rel=1e-14)


def test_redistribute_partial_cut():
    # density 2 on [0, 1/2]; conditioning on (0.4, 0.6) keeps only (0.4, 0.5]
    mu = StepMeasure.from_pieces([iv(0, Fraction(1, 2))], [math.log(2.0)])
    target = IntervalUnion((iv(Fraction(2, 5), Fraction(3, 5)),))
    out = redistribute(mu, target)
    assert len(out.slabs) == 1
    slab = out.slabs[0]
    assert slab.interval.exact_left == Fraction(2, 5)
    assert slab.interval.exact_right == Fraction(1, 2)
    assert slab.log_density == pytest.approx(math.log(10.0), rel=1e-13)
    # quadrature mass oracle: density height times width integrates to 1
    height = math.exp(slab.log_density)
    mass, _ = quad(lambda x: height, 0.4, 0.5)
    assert mass == pytest.approx(out.total_mass, rel=1e-12)


def test_redistribute_keeps_pieces_covered_by_slab():
    # a deep level inside one coarse slab: the COVERS branch, no cutting
    leb = StepMeasure.unit_lebesgue()
    level = make_uniform_level(5, LogLength(-40.0))
    out = redistribute(leb, level)
    assert len(out.slabs) == 5
    assert out.is_probability
    # each piece holds 1/5 of the mass: log density = -log(5 r)
    for slab in out.slabs:
        assert slab.log_mass == pytest.approx(math.log(0.2), rel=1e-12)


def test_redistribute_zero_mass():
    mu = StepMeasure.from_pieces([iv(0, Fraction(1, 4))], [0.0])
    far = IntervalUnion((iv(Fraction(1, 2), Fraction(3, 4)),))
    with pytest.raises(ZeroMassError):
        redistribute(mu, far)


def test_weight_vector():
    w = WeightVector.uniform(4)
    assert w.probabilities == (0.25, 0.25, 0.25, 0.25)
    with pytest.raises(InvalidArgumentError):
        WeightVector((0.5, 0.6))
    with pytest.raises(InvalidArgumentError):
        WeightVector((-0.1, 1.1))


def test_convex_combination_masses():
    leb = StepMeasure.unit_lebesgue()
    a = redistribute(leb, make_uniform_level(2, LogLength.from_length(Fraction(1, 10))))
    b = redistribute(leb, make_uniform_level(3, LogLength.from_length(Fraction(1, 20))))
    mix = StepMeasure.convex_combination(WeightVector((0.25, 0.75)), [a, b])
    assert mix.total_mass == pytest.approx(1.0, rel=1e-13)
    assert len(mix.slabs) == 5


def test_averaged_redistribute_m2_matches_manual_mix():
    from logcap.schedules import CustomTable

    leb = StepMeasure.unit_lebesgue()
    # thin enough that V_2 and V_3 stay disjoint (dyadic 1/4, 1/8 would not)
    sched = CustomTable({2: math.log(1 / 64), 3: math.log(1 / 128)})
    avg = averaged_redistribute(leb, 2, sched)
    a = redistribute(leb, make_uniform_level(2, sched.log_radius(2)))
    b = redistribute(leb, make_uniform_level(3, sched.log_radius(3)))
    manual = StepMeasure.convex_combination(WeightVector.uniform(2), [a, b])
    got = sorted((s.interval.center_fraction, s.log_mass) for s in avg.slabs)
    want = sorted((s.interval.center_fraction, s.log_mass) for s in manual.slabs)
    assert [c for c, _ in got] == [c for c, _ in want]
    np.testing.assert_allclose([m for _, m in got], [m for _, m in want], rtol=1e-13)


def test_averaged_redistribute_m10_piece_count():
    leb = StepMeasure.unit_lebesgue()
    avg = averaged_redistribute(leb, 10, PowerExp(1.5))
    assert len(avg.slabs) == 11 + 13 + 17 + 19
    assert avg.is_probability


def test_averaged_degenerate_weights_equal_plain_redistribution():
    leb = StepMeasure.unit_lebesgue()
    sched = PowerExp(1.5)
    avg = averaged_redistribute(leb, 10, sched, weights=WeightVector((1.0, 0.0, 0.0, 0.0)))
    plain = redistribute(leb, make_uniform_level(11, sched.log_radius(11)))
    assert len(avg.slabs) == len(plain.slabs)
    for s, t in zip(avg.slabs, plain.slabs):
        assert s.interval.center_fraction == t.interval.center_fraction
        assert s.log_mass == pytest.approx(t.log_mass, rel=1e-13)


def test_averaged_redistribute_rejects_colliding_grids():
    # consecutive integers share no centers but their pieces overlap when fat
    leb = StepMeasure.unit_lebesgue()
    fat = {n: math.log(0.4 / n) for n in range(2, 10)}
    from logcap.schedules import CustomTable

    with pytest.raises(DisjointnessError):
        averaged_redistribute(leb, 2, CustomTable(fat))


def test_mass_of_queries():
    leb = StepMeasure.unit_lebesgue()
    assert math.exp(leb.log_mass_of(IntervalUnion((iv(Fraction(1, 4), Fraction(3, 4)),)))) == pytest.approx(0.5)
    level = make_uniform_level(2, LogLength.from_length(Fraction(1, 10)))
    mu = redistribute(leb, level)
    assert math.exp(mu.log_mass_of(IntervalUnion((iv(0, Fraction(1, 2)),)))) == pytest.approx(0.5, rel=1e-12)


def test_support_merges_and_as_arrays():
    mu = StepMeasure.from_pieces(
        [iv(0, Fraction(1, 4)), iv(Fraction(1, 2), 1)], [0.0, math.log(2.0)]
    )
    supp = mu.support()
    assert len(supp.pieces) == 2
    c, ll, w = mu.as_arrays()
    assert c.shape == ll.shape == w.shape == (2,)
    assert w.sum() == pytest.approx(mu.total_mass)


def test_scaled_density():
    mu = StepMeasure.unit_lebesgue().scaled(math.log(0.5))
    assert mu.total_mass == pytest.approx(0.5)


# -- arcsine reference ---------------------------------------------------------

def test_arcsine_energy_constants():
    ref = arcsine_reference(Interval.unit())
    assert ref.energy_value == pytest.approx(math.log(4.0), rel=1e-15)
    assert ref.density(0.5) == pytest.approx(2.0 / math.pi, rel=1e-15)
    half = arcsine_reference(iv(0, Fraction(1, 2)))
    assert half.energy_value == pytest.approx(math.log(4.0) + math.log(2.0), rel=1e-15)


def test_arcsine_density_integrates_to_one():
    ref = arcsine_reference(Interval.unit())
    mass, _ = quad(ref.density, 0.0, 1.0)
    assert mass == pytest.approx(1.0, rel=1e-9)


# -- cutoff families ------------------------------------------------------------

def test_cutoff_flat_base_resolution_one():
    base = StepMeasure.unit_lebesgue()
    fam = CutoffFamily(0.1, base)
    stepped = cutoff_step_density(fam, 1)
    # ramp cell, flat middle, ramp cell; ramp midpoint value 0.5 * f(edge)
    assert len(stepped.slabs) == 3
    z = cutoff_raw_mass(fam, 1)
    assert z == pytest.approx(0.1 * 0.5 + 0.8 + 0.1 * 0.5, rel=1e-12)
    assert stepped.total_mass == pytest.approx(1.0, rel=1e-12)
    mid = sorted(stepped.slabs, key=lambda s: s.interval.center_float)[1]
    assert mid.log_density == pytest.approx(math.log(1.0 / z), rel=1e-12)


def test_cutoff_ramp_resolution_refinement():
    # each step cell matches the ramp at its midpoint, so the sup-norm gap is
    # slope * cell/2 and doubling the resolution halves it (first order)
    base = StepMeasure.unit_lebesgue()
    fam = CutoffFamily(0.1, base)

    def ramp_sup_gap(res):
        stepped = cutoff_step_density(fam, res)
        z = cutoff_raw_mass(fam, res)
        gap = 0.0
        for slab in stepped.slabs:
            l, r = slab.interval.float_left, slab.interval.float_right
            if r <= 0.1 + 1e-12:  # left ramp region
                got = math.exp(slab.log_density) * z
                gap = max(gap, abs(got - l / 0.1), abs(got - r / 0.1))
        return gap

    g1, g2 = ramp_sup_gap(4), ramp_sup_gap(8)
    assert g1 == pytest.approx(1 / 8, rel=1e-9)
    assert g2 == pytest.approx(g1 / 2, rel=1e-9)


def test_cutoff_arcsine_mass_converges():
    fam = CutoffFamily(1e-3, arcsine_reference(Interval.unit()))
    z = cutoff_raw_mass(fam, 64)
    # chopping delta-tails of the arcsine law removes O(sqrt(delta)) mass
    assert z == pytest.approx(1.0, abs=0.1)
    stepped = cutoff_step_density(fam, 64)
    assert stepped.is_probability


def test_cutoff_rejects_bad_delta():
    with pytest.raises(CutoffError):
        CutoffFamily(0.6, StepMeasure.unit_lebesgue())
    with pytest.raises(CutoffError):
        CutoffFamily(0.0, StepMeasure.unit_lebesgue())


def test_step_measure_dict_roundtrip():
    mu = redistribute(
        StepMeasure.unit_lebesgue(),
        make_uniform_level(3, LogLength.from_length(Fraction(1, 30))),
    )
    d = mu.to_dict()
    back = StepMeasure.from_dict(d)
    assert len(back.slabs) == len(mu.slabs)
    assert back.total_mass == pytest.approx(mu.total_mass, rel=1e-14)
