import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fogfed import (
    CentralInterval,
    Empirical,
    Normal,
    PointMass,
    central_interval,
    convolve,
    fit_normal,
    intervals_overlap,
    success_probability,
)
from fogfed.errors import InsufficientData, InvalidSample


class TestFitNormal:
    def test_hand_arithmetic(self):
        d = fit_normal([2, 4, 6])
        assert d.mean == pytest.approx(4.0)
        assert d.stddev == pytest.approx(2.0)

    def test_constant_data(self):
        d = fit_normal([5, 5, 5, 5])
        assert d.mean == 5.0
        assert d.stddev == 0.0

    def test_monte_carlo_mean_recovery(self):
        rng = np.random.default_rng(11)
        x = rng.normal(100, 15, size=30)
        d = fit_normal(x)
        assert abs(d.mean - 100) < 15 * 3 / math.sqrt(30)

    def test_too_few_samples(self):
        with pytest.raises(InsufficientData):
            fit_normal([1.0])

    def test_non_finite_sample(self):
        with pytest.raises(InvalidSample):
            fit_normal([1.0, float("nan"), 2.0])


class TestConvolve:
    def test_normal_pair_analytic(self):
        d = convolve(Normal(100, 15), Normal(50, 20))
        assert d.mean == pytest.approx(150.0, abs=1e-12)
        assert d.stddev == pytest.approx(25.0, abs=1e-12)

    def test_point_mass_identity(self):
        d = convolve(PointMass(0), Normal(7, 2))
        assert d == Normal(7, 2)

    def test_point_mass_shifts_empirical(self):
        d = convolve(PointMass(3), Empirical([1, 2]))
        assert np.allclose(d.samples, [4, 5])

    def test_empirical_pair_matches_enumeration(self):
        # Oracle: enumerate all outcome pairs of {1,2} + {10,20}.
        sums = sorted(a + b for a in (1, 2) for b in (10, 20))
        d = convolve(Empirical([1, 2]), Empirical([10, 20]))
        # Equal mass near each enumerated sum; CDF exact between atoms.
        pitch = (22 - 11) / 2047
        for expect, atom in zip([0.25, 0.5, 0.75, 1.0], sums):
            assert d.cdf(atom + pitch) == pytest.approx(expect)
        assert d.cdf(sums[0] - pitch) == 0.0
        # Atom locations survive gridding to within one pitch.
        assert np.all(np.abs(np.sort(d.samples) - sums) <= pitch)

    def test_normal_empirical_grid_vs_monte_carlo(self):
        rng = np.random.default_rng(5)
        emp = Empirical(rng.lognormal(0.5, 0.4, size=40))
        d = convolve(Normal(2.0, 0.5), emp)
        draws = Normal(2.0, 0.5).sample(rng, 200_000) + emp.sample(rng, 200_000)
        qs = np.linspace(d.samples.min(), d.samples.max(), 500)
        mc_cdf = np.searchsorted(np.sort(draws), qs, side="right") / draws.size
        assert np.max(np.abs(d.cdf(qs) - mc_cdf)) < 0.01

    def test_commutes_for_normals(self):
        assert convolve(Normal(1, 2), Normal(3, 4)) == convolve(Normal(3, 4), Normal(1, 2))

    def test_commutes_for_empirical(self):
        a = Empirical([1.0, 2.5, 4.0])
        b = Empirical([0.5, 3.0])
        ab, ba = convolve(a, b), convolve(b, a)
        assert np.array_equal(ab.samples, ba.samples)
        assert np.array_equal(ab.weights, ba.weights)

    def test_commutes_for_mixed_kinds(self):
        n, e = Normal(1.0, 0.3), Empirical([0.2, 0.9, 1.4])
        ne, en = convolve(n, e), convolve(e, n)
        assert np.array_equal(ne.samples, en.samples)
        assert np.array_equal(ne.weights, en.weights)

    def test_degenerate_normal_acts_as_shift(self):
        d = convolve(Normal(5.0, 0.0), Empirical([1, 2]))
        assert np.allclose(d.samples, [6, 7])


class TestSuccessProbability:
    def test_median_of_symmetric(self):
        assert success_probability(Normal(100, 10), 100) == pytest.approx(0.5)

    def test_1960_sigma_quantile(self):
        assert success_probability(Normal(100, 10), 119.6) == pytest.approx(0.975, abs=1e-3)

    def test_empirical_counting_oracle(self):
        rng = np.random.default_rng(3)
        x = rng.exponential(4.0, size=30)
        d = Empirical(x)
        delta = float(np.sort(x)[9])  # 10th order statistic
        expect = np.count_nonzero(x <= delta) / 30
        assert success_probability(d, delta) == pytest.approx(expect)

    def test_monotone_in_deadline(self):
        rng = np.random.default_rng(4)
        for d in (Normal(5, 2), Empirical(rng.normal(5, 2, 25)), PointMass(5)):
            deltas = np.linspace(-1, 12, 50)
            probs = [success_probability(d, t) for t in deltas]
            assert all(a <= b + 1e-15 for a, b in zip(probs, probs[1:]))

    def test_untruncated_below_zero(self):
        # A normal fitted to latency data keeps its mass below zero.
        assert success_probability(Normal(1.0, 1.0), -1.0) == pytest.approx(
            float(0.5 * (1 + math.erf(-2 / math.sqrt(2)))), abs=1e-12
        )


class TestCentralInterval:
    def test_standard_normal_95(self):
        ci = central_interval(Normal(0, 1), 0.95)
        assert ci.lower == pytest.approx(-1.959964, abs=1e-3)
        assert ci.upper == pytest.approx(1.959964, abs=1e-3)

    def test_point_mass_degenerate(self):
        ci = central_interval(PointMass(5), 0.5)
        assert (ci.lower, ci.upper) == (5.0, 5.0)

    def test_empirical_interpolated_quantiles(self):
        ci = central_interval(Empirical(np.arange(1, 101)), 0.9)
        assert ci.lower == pytest.approx(5.95)
        assert ci.upper == pytest.approx(95.05)

    def test_single_sample_degenerate_interval(self):
        ci = central_interval(Empirical([7.0]), 0.95)
        assert (ci.lower, ci.upper) == (7.0, 7.0)

    def test_level_to_one_contains_all_samples(self):
        rng = np.random.default_rng(9)
        x = rng.normal(10, 3, size=50)
        ci = central_interval(Empirical(x), 1 - 1e-12)
        assert ci.lower <= x.min() + 1e-6 and ci.upper >= x.max() - 1e-6


class TestIntervalsOverlap:
    def test_plain_overlap(self):
        assert intervals_overlap(CentralInterval(1, 3, 0.9), CentralInterval(2, 4, 0.9))

    def test_disjoint(self):
        assert not intervals_overlap(CentralInterval(1, 2, 0.9), CentralInterval(3, 4, 0.9))

    def test_touching_counts_as_overlap(self):
        assert intervals_overlap(CentralInterval(1, 2, 0.9), CentralInterval(2, 3, 0.9))

    @given(
        st.tuples(st.floats(-100, 100), st.floats(0, 50)),
        st.tuples(st.floats(-100, 100), st.floats(0, 50)),
    )
    def test_symmetric(self, a, b):
        ia = CentralInterval(a[0], a[0] + a[1], 0.9)
        ib = CentralInterval(b[0], b[0] + b[1], 0.9)
        assert intervals_overlap(ia, ib) == intervals_overlap(ib, ia)


class TestInvariants:
    @given(
        st.floats(0.1, 1e3),
        st.floats(0, 100),
        st.floats(0.1, 1e3),
        st.floats(0, 100),
    )
    def test_normal_sum_moments_exact(self, m1, s1, m2, s2):
        d = convolve(Normal(m1, s1), Normal(m2, s2))
        assert d.mean == m1 + m2
        assert d.stddev == pytest.approx(math.hypot(s1, s2), rel=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(0.1, 50), min_size=2, max_size=20), st.integers(0, 2**31))
    def test_empirical_convolution_vs_monte_carlo(self, xs, seed):
        # Grid snapping displaces atoms by up to half a pitch, so the CDFs are
        # compared at midpoints between atoms, where displacement cancels out
        # and the only residual error is Monte Carlo noise.
        rng = np.random.default_rng(seed)
        a = Empirical(xs)
        b = Empirical(rng.uniform(0.1, 20, size=7))
        d = convolve(a, b)
        draws = a.sample(rng, 100_000) + b.sample(rng, 100_000)
        qs = (d.samples[:-1] + d.samples[1:]) / 2
        mc = np.searchsorted(np.sort(draws), qs, side="right") / draws.size
        assert np.max(np.abs(d.cdf(qs) - mc)) < 0.01

    def test_invalid_constructions(self):
        with pytest.raises(InvalidSample):
            Normal(0, -1)
        with pytest.raises(InvalidSample):
            PointMass(-0.5)
        with pytest.raises(InvalidSample):
            Empirical([])
        with pytest.raises(InvalidSample):
            Empirical([1.0, float("inf")])
