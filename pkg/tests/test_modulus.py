"""Oscillation modulus: hand cases, brute-force parity, backend parity."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from kspacings import _modcore_py, modulus
from kspacings.errors import DomainError, ResourceLimitError
from kspacings.modulus import (
    EmpiricalPath,
    backend_name,
    brute_force_modulus,
    grid_witness,
    lil_normalizer,
    normalized_modulus,
    one_sided_increment,
    oscillation_modulus,
)

TWO_POINT = EmpiricalPath(np.array([0.25, 0.75]))


class TestHandCases:
    def test_two_points_wide_window(self):
        # capture (0.25, 0.75] has count 2/2 - span 0.5 = 0.5; the empty
        # half-open interval argument gives the same 0.5 on the gap side
        rep = oscillation_modulus(TWO_POINT, 0.5)
        assert rep.lam == math.sqrt(2.0) * 0.5
        assert rep.pos_window == (1, 1)
        assert rep.neg_window == ("gap", 1, 2)

    def test_two_points_narrow_window(self):
        # single capture 1/2 dominates; the gap families reach only a = 0.1
        rep = oscillation_modulus(TWO_POINT, 0.1)
        assert rep.lam == math.sqrt(2.0) * 0.5
        assert rep.b_n == pytest.approx(
            math.sqrt(0.2 * math.log(math.log(10.0))), rel=1e-15
        )
        assert rep.k_n == pytest.approx(1.7313247259742344, rel=1e-13)
        assert rep.theta == pytest.approx(math.sqrt(2.0) * 0.4, rel=1e-14)

    def test_single_point(self):
        rep = oscillation_modulus(EmpiricalPath(np.array([0.3])), 0.2)
        assert rep.lam == 1.0

    def test_theta_two_points(self):
        # width 0.6 captures both points: sqrt(2) (1 - 0.6)
        path = TWO_POINT
        assert one_sided_increment(path, 0.6) == pytest.approx(
            math.sqrt(2.0) * 0.4, rel=1e-15
        )
        # width 0.1 captures one: sqrt(2) (1/2 - 0.1)
        assert one_sided_increment(path, 0.1) == pytest.approx(
            math.sqrt(2.0) * 0.4, rel=1e-15
        )

    def test_theta_matches_count_formula(self):
        rng = np.random.default_rng(5)
        v = np.sort(rng.random(40))
        path = EmpiricalPath(v)
        for a in (0.03, 0.2, 0.55):
            c_max = _modcore_py.max_count_width(v, a)
            want = math.sqrt(40.0) * (c_max / 40.0 - a)
            assert one_sided_increment(path, a) == pytest.approx(want, rel=1e-15)


class TestBruteForceParity:
    @pytest.mark.parametrize("seed", range(12))
    def test_random_paths(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 51))
        v = np.sort(rng.random(n))
        path = EmpiricalPath(v)
        for a in (0.01, 0.05, 0.2, 1.0 / math.e, 0.5, 0.9):
            fast = oscillation_modulus(path, a).lam
            slow = brute_force_modulus(path, a)
            assert fast == pytest.approx(slow, abs=1e-12), (seed, n, a)

    def test_ties_and_endpoints(self):
        for pts in (
            [0.2, 0.2, 0.2, 0.8],
            [0.0, 0.0, 1.0, 1.0],
            [0.0, 0.5, 1.0],
            [0.37] * 6,
        ):
            path = EmpiricalPath(np.array(pts))
            for a in (0.1, 0.4, 0.8):
                fast = oscillation_modulus(path, a).lam
                assert fast == pytest.approx(
                    brute_force_modulus(path, a), abs=1e-12
                ), (pts, a)

    def test_brute_force_cap(self):
        path = EmpiricalPath(np.linspace(0.0, 1.0, 201))
        with pytest.raises(ResourceLimitError):
            brute_force_modulus(path, 0.1)


class TestWitness:
    def test_witness_bounds_modulus(self):
        rng = np.random.default_rng(17)
        path = EmpiricalPath(np.sort(rng.random(50)))
        for a in (0.05, 0.2):
            lam = oscillation_modulus(path, a).lam
            w = grid_witness(path, a)
            assert w <= lam + 1e-12
            assert w >= 0.8 * lam


class TestReportWindows:
    def test_windows_reconstruct_modulus(self):
        rng = np.random.default_rng(23)
        v = np.sort(rng.random(30))
        path = EmpiricalPath(v)
        for a in (0.04, 0.15, 0.3):
            rep = oscillation_modulus(path, a)
            i, j = rep.pos_window
            cands = [(j - i + 1) / 30.0 - (v[j - 1] - v[i - 1])]
            if rep.neg_window[0] == "gap":
                vx = np.concatenate(([0.0], v, [1.0]))
                gi, gj = rep.neg_window[1], rep.neg_window[2]
                cands.append((vx[gj] - vx[gi]) - (gj - gi - 1) / 30.0)
            elif rep.neg_window[0] == "width":
                cands.append(a - rep.neg_window[1] / 30.0)
            assert math.sqrt(30.0) * max(cands) == pytest.approx(
                rep.lam, rel=1e-13
            )


class TestNormalizer:
    def test_value(self):
        assert lil_normalizer(0.1) == pytest.approx(0.40841950130912114, rel=1e-15)

    def test_undefined_region(self):
        assert lil_normalizer(1.0 / math.e) is None
        assert lil_normalizer(0.5) is None
        assert lil_normalizer(math.nextafter(1.0 / math.e, 0.0)) is not None

    def test_normalized_modulus_none(self):
        assert normalized_modulus(TWO_POINT, 0.5) is None
        assert normalized_modulus(TWO_POINT, 0.1) == pytest.approx(
            1.7313247259742344, rel=1e-13
        )

    @pytest.mark.parametrize("a", [0.0, 1.0, -0.1, math.nan])
    def test_bandwidth_domain(self, a):
        with pytest.raises(DomainError):
            lil_normalizer(a)
        with pytest.raises(DomainError):
            oscillation_modulus(TWO_POINT, a)


class TestPathValidation:
    def test_rejects_bad_paths(self):
        with pytest.raises(DomainError):
            EmpiricalPath(np.array([]))
        with pytest.raises(DomainError):
            EmpiricalPath(np.array([[0.1, 0.2]]))
        with pytest.raises(DomainError):
            EmpiricalPath(np.array([0.5, 0.4]))
        with pytest.raises(DomainError):
            EmpiricalPath(np.array([-0.1, 0.4]))
        with pytest.raises(DomainError):
            EmpiricalPath(np.array([0.1, 1.4]))
        with pytest.raises(DomainError):
            EmpiricalPath(np.array([0.1, math.nan]))

    def test_size(self):
        assert EmpiricalPath(np.array([0.1, 0.2, 0.3])).N == 3


class TestBackends:
    def test_backend_reported(self):
        assert backend_name() in ("compiled", "pure")

    def test_kernel_parity(self):
        try:
            from kspacings import _modcore
        except ImportError:
            pytest.skip("compiled extension not built")
        rng = np.random.default_rng(41)
        for n in (1, 2, 7, 64, 500):
            v = np.sort(rng.random(n))
            for a in (0.01, 0.2, 0.7):
                assert _modcore.pos_scan(v, a) == _modcore_py.pos_scan(v, a)
                assert _modcore.gap_scan(v, a) == _modcore_py.gap_scan(v, a)
                assert _modcore.min_count_width(v, a) == _modcore_py.min_count_width(v, a)
                assert _modcore.max_count_width(v, a) == _modcore_py.max_count_width(v, a)

    def test_pure_fallback_import(self):
        code = (
            "from kspacings import modulus\n"
            "import numpy as np\n"
            "assert modulus.backend_name() == 'pure'\n"
            "p = modulus.EmpiricalPath(np.array([0.25, 0.75]))\n"
            "print(repr(modulus.oscillation_modulus(p, 0.1).lam))\n"
        )
        env = dict(os.environ, KSPACINGS_PURE="1")
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        here = oscillation_modulus(TWO_POINT, 0.1).lam
        assert float(out.stdout.strip()) == here
