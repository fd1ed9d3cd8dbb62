import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from indicatorlab.errors import MeasureError
from indicatorlab.measures import TWO_PI, AngularMeasure, Order, uniform_measure

PI = math.pi


class TestConstruction:
    def test_atom_positions_reduced_mod_2pi(self):
        m = AngularMeasure(atoms=((2 * PI + 1.0, 0.5), (-1.0, 0.25)))
        positions = [t for t, _ in m.atoms]
        assert positions == pytest.approx([1.0, TWO_PI - 1.0])

    def test_duplicate_atoms_merge(self):
        m = AngularMeasure(atoms=((1.0, 0.5), (1.0 + TWO_PI, 0.25)))
        assert len(m.atoms) == 1
        assert m.atoms[0][1] == pytest.approx(0.75)

    def test_negative_mass_rejected(self):
        with pytest.raises(MeasureError):
            AngularMeasure(atoms=((0.0, -1.0),))

    def test_overlapping_pieces_rejected(self):
        with pytest.raises(MeasureError):
            AngularMeasure(pieces=((0.0, 2.0, 1.0), (1.0, 3.0, 1.0)))

    def test_piece_bounds_checked(self):
        with pytest.raises(MeasureError):
            AngularMeasure(pieces=((3.0, 1.0, 1.0),))

    def test_json_round_trip(self):
        m = AngularMeasure(atoms=((1.0, 0.5),), pieces=((2.0, 3.0, 0.1),))
        again = AngularMeasure.loads(m.dumps())
        assert again.atoms == m.atoms
        assert again.pieces == m.pieces

    def test_malformed_json_rejected(self):
        with pytest.raises(MeasureError):
            AngularMeasure.loads("not json")
        with pytest.raises(MeasureError):
            AngularMeasure.from_dict({"atoms": [{"mass": 1.0}]})


class TestTotalMass:
    def test_three_unit_atoms(self, example3):
        assert example3.total_mass == pytest.approx(3.0)

    def test_empty_measure(self):
        assert AngularMeasure().total_mass == 0.0

    def test_uniform_of_mass_rho(self):
        rho = 2.0
        m = AngularMeasure(pieces=((0.0, TWO_PI, rho / TWO_PI),))
        assert m.total_mass == pytest.approx(rho)


class TestRhoMoment:
    def test_example3_vanishes_at_two(self, example3):
        assert abs(example3.rho_moment(Order(2.0))) < 1e-12

    def test_single_atom_at_zero(self):
        m = AngularMeasure(atoms=((0.0, 1.0),))
        assert m.rho_moment(Order(2.0)) == pytest.approx(1.0)

    def test_uniform_full_period(self):
        m = uniform_measure(1.0)
        assert abs(m.rho_moment(Order(1.0))) < 1e-12

    @given(st.lists(st.tuples(st.floats(0, TWO_PI - 1e-9),
                              st.floats(0.01, 2.0)), min_size=1, max_size=5),
           st.lists(st.tuples(st.floats(0, TWO_PI - 1e-9),
                              st.floats(0.01, 2.0)), min_size=1, max_size=5))
    def test_linearity(self, atoms1, atoms2):
        m1 = AngularMeasure(atoms=tuple(atoms1))
        m2 = AngularMeasure(atoms=tuple(atoms2))
        o = Order(1.7)
        lhs = (m1 + m2).rho_moment(o)
        rhs = m1.rho_moment(o) + m2.rho_moment(o)
        assert abs(lhs - rhs) < 1e-12


class TestScale:
    def test_normalizes_example3(self, example3):
        m = example3.scale(1.0 / 3.0)
        assert m.total_mass == pytest.approx(1.0)
        assert all(mass == pytest.approx(1.0 / 3.0) for _, mass in m.atoms)

    def test_identity(self, example3):
        m = example3.scale(1.0)
        assert m.atoms == example3.atoms

    def test_mass_scales_linearly(self):
        m = uniform_measure(1.0).scale(2.5)
        assert m.total_mass == pytest.approx(2.5, abs=1e-12)

    @pytest.mark.parametrize("c", [0.0, -1.0])
    def test_nonpositive_rejected(self, example3, c):
        with pytest.raises(MeasureError):
            example3.scale(c)


class TestSample:
    def test_point_mass(self):
        m = AngularMeasure(atoms=((PI, 1.0),))
        draws = m.sample(seed=3, n=5)
        assert np.all(draws == PI)

    def test_uniform_kolmogorov_distance(self, unit_uniform):
        n = 100_000
        draws = np.sort(unit_uniform.sample(seed=1, n=n))
        ecdf = np.arange(1, n + 1) / n
        ks = np.abs(ecdf - draws / TWO_PI).max()
        assert ks < 0.01

    def test_atom_fractions_concentrate(self, example3):
        m = example3.scale(1.0 / 3.0)
        n = 30_000
        draws = m.sample(seed=5, n=n)
        for pos, _ in m.atoms:
            frac = np.mean(draws == pos)
            assert frac == pytest.approx(1.0 / 3.0, abs=0.01)

    def test_seed_determinism(self, example3):
        a = example3.sample(seed=11, n=100)
        b = example3.sample(seed=11, n=100)
        assert np.array_equal(a, b)

    def test_zero_mass_rejected(self):
        with pytest.raises(MeasureError):
            AngularMeasure().sample(seed=0, n=1)

    def test_arc_histogram_matches_measure(self):
        # mixed atoms + density, arc endpoints away from the atoms
        m = AngularMeasure(atoms=((1.0, 0.4),), pieces=((2.0, 5.0, 0.2),))
        n = 100_000
        draws = m.sample(seed=9, n=n)
        alpha, beta = 2.5, 4.5
        p = m.arc_mass(alpha, beta) / m.total_mass
        frac = np.mean((draws > alpha) & (draws < beta))
        assert abs(frac - p) <= 3.0 * math.sqrt(p * (1 - p) / n)


class TestArcMass:
    def test_wrapping_arc_catches_atom_at_zero(self, example3):
        assert example3.arc_mass(-0.1, 0.1) == pytest.approx(1.0)

    def test_arc_missing_all_atoms(self, example3):
        assert example3.arc_mass(PI / 3 - 0.1, PI / 3 + 0.1) == 0.0

    def test_density_overlap(self):
        m = AngularMeasure(pieces=((0.0, TWO_PI, 1.0 / TWO_PI),))
        assert m.arc_mass(0.0, PI) == pytest.approx(0.5)
        assert m.arc_mass(-PI / 2, PI / 2) == pytest.approx(0.5)


class TestOrder:
    def test_positive_required(self):
        with pytest.raises(MeasureError):
            Order(0.0)

    def test_integer_detection_tolerance(self):
        assert Order(2.0 + 5e-13).is_integer
        assert not Order(2.0 + 1e-9).is_integer
        assert Order(3.0).int_value == 3
