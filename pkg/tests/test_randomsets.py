import math

import numpy as np
import pytest

from indicatorlab.critical import zero_set_type
from indicatorlab.errors import MeasureError, MomentConditionError, PreconditionError
from indicatorlab.fixtures import fixture_multipliers
from indicatorlab.measures import AngularMeasure, Order, uniform_measure
from indicatorlab.randomsets import (classify, dyadic_oscillations,
                                     empirical_density_table,
                                     lindelof_partial_sums, power_radii,
                                     randomize, tail_spread)

PI = math.pi


class TestRadii:
    def test_fourth_modulus(self):
        r = power_radii(Order(2.0), 1.0, 10)
        assert r.radii[3] == pytest.approx(2.0)

    def test_matches_sqrt_profile(self):
        D = 2.5
        r = power_radii(Order(2.0), D, 50)
        k = np.arange(1, 51)
        assert r.radii == pytest.approx(np.sqrt(k / D))

    def test_counting_exact_at_round_radius(self):
        r = power_radii(Order(1.0), 3.0, 300)
        assert r.count_at(10.0) / 10.0 == pytest.approx(3.0)

    def test_density_settles(self):
        r = power_radii(Order(2.0), 1.0, 10_000)
        assert r.density_settling_radius(tol=0.1) < 5.0

    def test_positive_density_required(self):
        with pytest.raises(PreconditionError):
            power_radii(Order(1.0), 0.0, 10)


class TestRandomize:
    def test_point_mass_angles(self):
        radial = power_radii(Order(0.75), 1.0, 20)
        m = AngularMeasure(atoms=((PI, 1.0),))
        rset = randomize(radial, m, Order(0.75), seed=2)
        assert np.all(rset.angles == PI)
        assert np.all(rset.points().real < 0)

    def test_zero_moment_admitted(self, example3):
        radial = power_radii(Order(2.0), 1.0, 100)
        rset = randomize(radial, example3.scale(1 / 3), Order(2.0), seed=0)
        assert len(rset.angles) == 100

    def test_moment_violation_rejected(self):
        radial = power_radii(Order(2.0), 1.0, 10)
        with pytest.raises(MomentConditionError):
            randomize(radial, AngularMeasure(atoms=((0.0, 1.0),)), Order(2.0), seed=0)

    def test_seed_determinism(self, example3):
        radial = power_radii(Order(2.0), 1.0, 500)
        a = randomize(radial, example3, Order(2.0), seed=4)
        b = randomize(radial, example3, Order(2.0), seed=4)
        assert np.array_equal(a.angles, b.angles)


class TestEmpiricalDensity:
    def test_uniform_half_circle(self):
        o = Order(2.0)
        radial = power_radii(o, 1.0, 50_000)
        rset = randomize(radial, uniform_measure(1.0), o, seed=8)
        cells = empirical_density_table(rset, [(0.0, PI)], [150.0, 200.0])
        for c in cells:
            n = rset.moduli.searchsorted(c.R, side="right")
            band = 3.0 * math.sqrt(0.25 / n)
            assert abs(c.ratio - 0.5) <= band
            assert c.predicted == pytest.approx(0.5)

    def test_arc_missing_atoms_is_empty(self, example3):
        o = Order(2.0)
        radial = power_radii(o, 1.0, 10_000)
        rset = randomize(radial, example3.scale(1 / 3), o, seed=3)
        cells = empirical_density_table(rset, [(PI / 3 - 0.1, PI / 3 + 0.1)], [90.0])
        assert cells[0].predicted == 0.0
        assert cells[0].ratio == 0.0

    def test_single_atom_arc_prediction(self, example3):
        o = Order(2.0)
        D = 1.0
        radial = power_radii(o, D, 30_000)
        rset = randomize(radial, example3.scale(1 / 3), o, seed=3)
        cells = empirical_density_table(rset, [(-0.1, 0.1)], [150.0])
        c = cells[0]
        assert c.predicted == pytest.approx(D / 3)
        n = rset.moduli.searchsorted(c.R, side="right")
        band = 3.0 * D * math.sqrt((1 / 3) * (2 / 3) / n)
        assert abs(c.deviation) <= band


class TestPartialSums:
    def test_divergent_configuration_flagged(self):
        # all angles at pi with rho = 2 gives the harmonic series: the tail
        # spread keeps growing instead of settling
        o = Order(2.0)
        radial = power_radii(o, 1.0, 200_000)
        rset = randomize(radial, AngularMeasure(atoms=((PI, 1.0),)), Order(0.9), seed=1)
        rset = type(rset)(moduli=rset.moduli, angles=rset.angles, seed=1,
                          base_measure=rset.base_measure, order=o, density=1.0)
        cps = [10.0, 40.0, 160.0, 440.0]
        sums = lindelof_partial_sums(rset, cps)
        assert abs(sums[-1]) > abs(sums[0]) + 1.0  # grows like log R^2
        assert tail_spread(sums, start=1) > 0.5

    def test_randomized_sums_settle(self, example3):
        o = Order(2.0)
        radial = power_radii(o, 1.0, 100_000)
        rset = randomize(radial, example3.scale(1 / 3), o, seed=12)
        cps = [10.0, 20.0, 40.0, 80.0, 160.0, 315.0]
        sums = lindelof_partial_sums(rset, cps)
        osc = dyadic_oscillations(sums)
        assert osc[-1] < osc[0]
        assert tail_spread(sums, start=3) < 0.2

    def test_finite_set_constant_tail(self):
        o = Order(2.0)
        radial = power_radii(o, 1.0, 100)
        rset = randomize(radial, uniform_measure(1.0), o, seed=5)
        rmax = float(rset.moduli.max())
        sums = lindelof_partial_sums(rset, [rmax, rmax + 5, rmax + 50])
        assert sums[0] == sums[1] == sums[2]


@pytest.fixture(scope="module")
def prob_measure(example3):
    return example3.scale(1.0 / 3.0)


@pytest.fixture(scope="module")
def multipliers():
    return [k.scaled(1 / 3) for k in fixture_multipliers("fixture:example3", 2.0)]


class TestClassify:
    def test_zero_set_band(self, prob_measure, multipliers):
        c = classify(prob_measure, Order(2.0), 0.7, multipliers=multipliers)
        assert c.label == "as_zero_set"
        assert c.sigma_z == pytest.approx(0.7 * 2 * PI / (3 * math.sqrt(3)), rel=1e-6)

    def test_middle_band(self, prob_measure, multipliers):
        c = classify(prob_measure, Order(2.0), 0.9, multipliers=multipliers)
        assert c.label == "as_not_zero_not_uniqueness"
        assert c.sigma_u_upper == pytest.approx(0.9 * PI / 3, abs=1e-6)

    def test_uniqueness_band(self, prob_measure, multipliers):
        c = classify(prob_measure, Order(2.0), 1.0, multipliers=multipliers)
        assert c.label == "as_uniqueness"
        assert c.sigma_u_lower == pytest.approx(PI / 3, abs=1e-6)

    def test_critical_when_threshold_hit(self, prob_measure, multipliers):
        D = 3 * math.sqrt(3) / (2 * PI)
        c = classify(prob_measure, Order(2.0), D, multipliers=multipliers)
        assert c.zero_verdict == "critical"

    def test_mass_must_be_one(self, example3):
        with pytest.raises(MeasureError):
            classify(example3, Order(2.0), 1.0)

    def test_scaling_covariance(self, example3):
        o = Order(2.0)
        base = zero_set_type(example3, o)
        for c in (0.5, 2.0, 3.7):
            assert zero_set_type(example3.scale(c), o) == pytest.approx(
                c * base, rel=1e-9)
