import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import symmetrized_measure
from indicatorlab.balance import (IntervalSet, balanced_modification,
                                  build_h_star, circumcenter,
                                  coverable_by_sparse_intervals, is_balanced,
                                  is_locally_balanced, max_set, superlevel_set,
                                  trig_shift_minimax)
from indicatorlab.errors import PreconditionError
from indicatorlab.indicator import build_indicator, from_callable
from indicatorlab.measures import TWO_PI, AngularMeasure, Order

PI = math.pi


def _points(*ts):
    return IntervalSet([(t, t) for t in ts])


class TestHStar:
    def test_constant_stays_constant(self, unit_uniform):
        h = build_indicator(unit_uniform, Order(2.0), 1024)
        hs = build_h_star(h)
        assert hs.grid == pytest.approx(np.full(1024, 0.5), abs=1e-12)

    def test_example3_support_max(self, example3):
        h = build_indicator(example3, Order(2.0))
        hs = build_h_star(h)
        assert hs.refined_max()[1] == pytest.approx(2 * PI / math.sqrt(3), rel=1e-9)

    def test_example1_support_max(self):
        n = 4
        m = AngularMeasure(atoms=tuple(((2 * j + 1) * PI / n, 1.0 / n)
                                       for j in range(1, n + 1)))
        hs = build_h_star(build_indicator(m, Order(2.0)))
        assert hs.refined_max()[1] == pytest.approx(PI / 4, rel=1e-6)

    def test_non_integer_rejected(self):
        m = AngularMeasure(atoms=((PI, 1.0),))
        h = build_indicator(m, Order(0.75))
        with pytest.raises(PreconditionError):
            build_h_star(h)


class TestCircumcenter:
    def test_unit_disk(self):
        hs = from_callable(Order(1.0), lambda t: np.ones_like(t), 1024)
        data = circumcenter(hs)
        assert abs(data.center) < 1e-6
        assert data.radius == pytest.approx(1.0, abs=1e-8)

    def test_example3_symmetric_center(self, example3):
        h = build_indicator(example3, Order(2.0))
        data = circumcenter(build_h_star(h))
        assert abs(data.center) < 1e-9
        assert data.radius == pytest.approx(2 * PI / math.sqrt(3), rel=1e-9)

    def test_contact_set_is_balanced_order_one(self, example3):
        h = build_indicator(example3, Order(2.0))
        data = circumcenter(build_h_star(h))
        assert is_balanced(data.contact_set, Order(1.0))

    def test_certified_radius_dominates_grid(self, example3):
        h = build_indicator(example3, Order(2.0))
        data = circumcenter(build_h_star(h), check=False)
        hs = build_h_star(h)
        centered = hs.grid - data.center.real * np.cos(hs.theta) \
            - data.center.imag * np.sin(hs.theta)
        assert centered.max() <= data.radius + 1e-6 * (1 + data.radius)

    def test_radius_invariant_under_trig_shift(self):
        rng = np.random.default_rng(21)
        for rho in (1.0, 2.0):
            o = Order(rho)
            m = symmetrized_measure(rng, o)
            h = build_indicator(m, o)
            r0 = circumcenter(build_h_star(h), check=False).radius
            a0, b0 = rng.uniform(-1, 1, 2)
            r1 = circumcenter(build_h_star(h.with_trig(a0, b0)), check=False).radius
            assert r1 == pytest.approx(r0, abs=1e-6 * (1 + abs(r0)))

    def test_non_convex_input_rejected(self):
        bogus = from_callable(Order(1.0),
                              lambda t: np.minimum(-np.cos(t), 0.2), 2048)
        with pytest.raises(PreconditionError):
            circumcenter(bogus)


class TestBalancedModification:
    def test_non_integer_identity(self):
        m = AngularMeasure(atoms=((PI, 1.0),))
        h = build_indicator(m, Order(0.75))
        h_hat, corr = balanced_modification(h)
        assert corr.is_zero
        assert h_hat is h

    def test_example3_needs_no_correction(self, example3):
        h = build_indicator(example3, Order(2.0))
        _, corr = balanced_modification(h)
        assert corr.A == pytest.approx(0.0, abs=1e-9)
        assert corr.B == pytest.approx(0.0, abs=1e-9)

    def test_recovery_after_random_shift(self):
        rng = np.random.default_rng(5)
        for rho in (1.0, 2.0, 3.0):
            o = Order(rho)
            m = symmetrized_measure(rng, o)
            h = build_indicator(m, o)
            h_hat, _ = balanced_modification(h)
            a0, b0 = rng.uniform(-2, 2, 2)
            h_hat2, _ = balanced_modification(h.with_trig(a0, b0))
            t = np.linspace(0, TWO_PI, 733)
            assert np.abs(h_hat(t) - h_hat2(t)).max() < 1e-6


class TestMaxSet:
    def test_example3_three_points(self, example3):
        h = build_indicator(example3, Order(2.0))
        M = max_set(h)
        assert len(M.arcs) == 3
        centers = sorted(0.5 * (s + e) for s, e in M.arcs)
        assert centers == pytest.approx([PI / 3, PI, 5 * PI / 3], abs=1e-3)
        assert all(e - s < 2e-3 for s, e in M.arcs)

    def test_constant_gives_full_circle(self, unit_uniform):
        h = build_indicator(unit_uniform, Order(2.0), 512)
        assert max_set(h).is_full

    def test_example2_two_points(self, example2_rho3):
        h = build_indicator(example2_rho3, Order(3.0))
        M = max_set(h)
        centers = sorted(0.5 * (s + e) for s, e in M.arcs)
        assert centers == pytest.approx([PI / 2, 3 * PI / 2], abs=1e-3)

    def test_superlevel_of_example3_at_pi(self, example3):
        h = build_indicator(example3, Order(2.0))
        S = superlevel_set(h, PI)
        expected = [(PI / 4, 5 * PI / 12), (11 * PI / 12, 13 * PI / 12),
                    (19 * PI / 12, 21 * PI / 12)]
        assert len(S.arcs) == 3
        for (s, e), (xs, xe) in zip(S.arcs, expected):
            assert s == pytest.approx(xs, abs=1e-6)
            assert e == pytest.approx(xe, abs=1e-6)


class TestBalanced:
    def test_example3_maximizers(self):
        assert is_balanced(_points(PI / 3, PI, 5 * PI / 3), Order(2.0))

    def test_single_direction_unbalanced(self):
        assert not is_balanced(_points(0.0), Order(1.0))
        assert not is_balanced(_points(0.0), Order(3.0))

    def test_antipodal_pair(self):
        for rho in (1.0, 2.0, 3.0):
            pts = _points(3 * PI / (2 * rho), 9 * PI / (2 * rho))
            assert is_balanced(pts, Order(rho))

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            is_balanced(IntervalSet(), Order(1.0))


class TestLocallyBalanced:
    def test_example3_superlevel_intervals(self):
        S = IntervalSet([(PI / 4, 5 * PI / 12), (11 * PI / 12, 13 * PI / 12),
                         (19 * PI / 12, 21 * PI / 12)])
        ok, witness = is_locally_balanced(S, Order(2.0))
        assert ok
        assert witness is not None

    def test_short_single_interval(self):
        S = IntervalSet([(0.0, 0.4 * PI / 2)])
        ok, _ = is_locally_balanced(S, Order(2.0))
        assert not ok

    def test_degenerate_pair(self):
        rho = 2.0
        S = _points(1.0, 1.0 + PI / rho)
        ok, witness = is_locally_balanced(S, Order(rho))
        assert ok
        a, b, g = witness
        assert g - a == pytest.approx(PI / rho, abs=1e-9)

    def test_small_order_always_balanced(self):
        ok, witness = is_locally_balanced(_points(1.3), Order(0.4))
        assert ok
        assert witness is not None

    def test_isolated_points_far_apart(self):
        S = _points(PI / 3, PI, 5 * PI / 3)
        ok, _ = is_locally_balanced(S, Order(2.0))
        assert not ok

    @given(st.lists(st.tuples(st.floats(0, TWO_PI - 1e-6), st.floats(0, 1.0)),
                    min_size=1, max_size=6),
           st.sampled_from([0.7, 1.0, 1.6, 2.0, 3.0]))
    @settings(max_examples=200)
    def test_agrees_with_covering_test(self, raw, rho):
        arcs = [(s, s + min(l, TWO_PI - 1e-6)) for s, l in raw]
        S = IntervalSet(arcs)
        o = Order(rho)
        triple = is_locally_balanced(S, o)[0]
        cover = coverable_by_sparse_intervals(S, o)
        assert triple == (not cover)


class TestMinimaxOracle:
    def test_matches_circumradius_small_ensemble(self):
        rng = np.random.default_rng(99)
        for rho in (1.0, 2.0, 3.0):
            o = Order(rho)
            for _ in range(10):
                m = symmetrized_measure(rng, o)
                h = build_indicator(m, o)
                h_hat, _ = balanced_modification(h)
                r_star = h_hat.refined_max()[1]
                val, _ = trig_shift_minimax(h_hat)
                assert val == pytest.approx(r_star, rel=2e-3)
                assert is_balanced(max_set(h_hat), o)
