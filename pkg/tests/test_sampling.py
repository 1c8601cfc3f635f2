"""Spacings simulation: determinism, keyed substreams, and distribution."""

import math

import numpy as np
import pytest

from kspacings import gammaint, sampling
from kspacings.errors import DomainError, ResourceLimitError


class TestStreamKeys:
    def test_deterministic(self):
        a = sampling.sample_spacings(2, 50, seed=9, replicate=3)
        b = sampling.sample_spacings(2, 50, seed=9, replicate=3)
        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.d, b.d)
        assert a.mu == b.mu

    def test_substreams_disjoint(self):
        # first draw differs across every (k, N, replicate) key; a collision
        # would mean two replicates share a stream
        draws = {}
        for k in (1, 2, 3):
            for n_spacings in (10, 11, 50):
                for rep in range(10):
                    g = sampling.stream_generator(7, k, n_spacings, rep)
                    val = g.random()
                    key = (k, n_spacings, rep)
                    assert val not in draws.values(), (key, draws)
                    draws[key] = val
        assert len(draws) == 90

    def test_replicates_differ(self):
        a = sampling.sample_spacings(2, 100, seed=1, replicate=0)
        b = sampling.sample_spacings(2, 100, seed=1, replicate=1)
        assert not np.array_equal(a.y, b.y)

    def test_seeds_differ(self):
        a = sampling.sample_spacings(2, 100, seed=1)
        b = sampling.sample_spacings(2, 100, seed=2)
        assert not np.array_equal(a.y, b.y)


class TestSampleStructure:
    def test_fields_consistent(self):
        s = sampling.sample_spacings(3, 40, seed=5)
        assert s.k == 3 and s.N == 40 and s.n == 3 * 40 - 1
        assert s.y.shape == (40,) and s.d.shape == (40,)
        assert np.all(s.y > 0.0)
        assert s.s_total == pytest.approx(float(np.sum(s.y)), rel=0.0)
        assert s.mu == pytest.approx(s.s_total / (40 * 3), rel=1e-15)
        assert np.sum(s.d) == pytest.approx(1.0, abs=1e-12)

    def test_from_exponentials_hand_case(self):
        # k=1, N=2, E = (1, 3): Y = (1, 3), S = 4, D = (1/4, 3/4), mu = 2
        s = sampling.from_exponentials(1, 2, np.array([1.0, 3.0]))
        np.testing.assert_allclose(s.y, [1.0, 3.0])
        assert s.s_total == 4.0
        np.testing.assert_allclose(s.d, [0.25, 0.75])
        assert s.mu == 2.0

    def test_from_exponentials_block_sums(self):
        # k=2, N=2, E = (1, 2, 3, 4): Y = (3, 7)
        s = sampling.from_exponentials(2, 2, np.array([1.0, 2.0, 3.0, 4.0]))
        np.testing.assert_allclose(s.y, [3.0, 7.0])
        assert s.mu == pytest.approx(10.0 / 4.0)

    def test_from_exponentials_validation(self):
        with pytest.raises(DomainError):
            sampling.from_exponentials(2, 3, np.ones(5))  # wrong length
        with pytest.raises(DomainError):
            sampling.from_exponentials(1, 2, np.array([1.0, -2.0]))
        with pytest.raises(DomainError):
            sampling.from_exponentials(1, 2, np.array([1.0, math.inf]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            sampling.sample_spacings(0, 10, seed=1)
        with pytest.raises(DomainError):
            sampling.sample_spacings(2, 1, seed=1)
        with pytest.raises(ResourceLimitError):
            sampling.sample_spacings(10**6, 10**6, seed=1)


class TestUniformize:
    def test_sorted_unit_interval(self):
        s = sampling.sample_spacings(2, 500, seed=11)
        u = sampling.uniformize(s)
        assert u.w.shape == (500,)
        assert np.all(np.diff(u.w) >= 0.0)
        assert np.all((u.w >= 0.0) & (u.w <= 1.0))

    def test_matches_direct_transform(self):
        s = sampling.sample_spacings(3, 64, seed=21)
        u = sampling.uniformize(s)
        direct = np.sort(
            np.array(
                [gammaint.cdf(3, 64 * 3 * float(di)) for di in s.d]
            )
        )
        np.testing.assert_allclose(u.w, direct, rtol=1e-13, atol=1e-15)

    def test_path_round_trip(self):
        s = sampling.sample_spacings(2, 100, seed=3)
        path = sampling.uniformize(s).to_path()
        assert path.N == 100
        np.testing.assert_array_equal(path.points, sampling.uniformize(s).w)

    def test_uniform_fit_ks(self):
        # W is distributed as N sorted uniforms: KS distance stays at the
        # 1/sqrt(N) scale across replicates
        n_spacings = 400
        crit = 1.95 / math.sqrt(n_spacings)
        exceed = 0
        for rep in range(100):
            s = sampling.sample_spacings(2, n_spacings, seed=77, replicate=rep)
            w = sampling.uniformize(s).w
            if sampling.ks_statistic(w) > crit:
                exceed += 1
        assert exceed <= 1

    def test_mu_concentration(self):
        # sd(mu) tracks (Nk)^{-1/2}
        n_spacings, k = 1000, 2
        mus = np.array(
            [
                sampling.sample_spacings(k, n_spacings, seed=13, replicate=r).mu
                for r in range(300)
            ]
        )
        expected = 1.0 / math.sqrt(n_spacings * k)
        assert np.std(mus) == pytest.approx(expected, rel=0.25)
        assert np.mean(mus) == pytest.approx(1.0, abs=5.0 * expected)


class TestKsStatistic:
    def test_hand_case(self):
        # two points 0.25, 0.75: sup |i/N - v| over both one-sided parts
        v = np.array([0.25, 0.75])
        # D+ = max(i/N - v_i) = max(0.25, 0.25) = 0.25
        # D- = max(v_i - (i-1)/N) = max(0.25, 0.25) = 0.25
        assert sampling.ks_statistic(v) == pytest.approx(0.25, rel=1e-15)

    def test_extremes(self):
        assert sampling.ks_statistic(np.array([0.0, 1.0])) == pytest.approx(0.5)
