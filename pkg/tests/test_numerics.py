from math import factorial

import numpy as np
import pytest
from scipy.special import binom, eval_genlaguerre

from ptnorm.errors import Diverged, MaxIterations, NoSignChange
from ptnorm.numerics import (
    Bracket,
    composite_rule,
    find_root_1d,
    gauss_legendre,
    laguerre_eval,
    newton_complex,
    tolerance_from_env,
)
from ptnorm.squarewell import matching_residual


class TestLaguerre:
    def test_degree_zero_is_one(self):
        assert laguerre_eval(0, 0.7 - 0.2j, 3.0 + 1j) == 1

    def test_degree_one(self):
        a, z = 0.4 + 0.1j, -1.5 + 2j
        assert laguerre_eval(1, a, z) == pytest.approx(1 + a - z, abs=1e-15)

    def test_explicit_degree_two(self):
        assert laguerre_eval(2, 0.5, 1.0) == pytest.approx(-0.125, abs=1e-15)

    def test_matches_closed_series(self):
        # L_n^(a)(z) = sum_k (-1)^k binom(n+a, n-k) z^k / k!
        a, z = 0.3, 0.8
        for n in range(8):
            ref = sum((-1) ** k * binom(n + a, n - k) * z**k / factorial(k) for k in range(n + 1))
            assert laguerre_eval(n, a, z) == pytest.approx(ref, rel=1e-12)

    def test_against_scipy(self):
        z = np.linspace(-2, 6, 17)
        for n, a in [(3, 0.5), (9, -0.4), (16, 2.0)]:
            np.testing.assert_allclose(laguerre_eval(n, a, z), eval_genlaguerre(n, a, z), rtol=1e-10, atol=1e-10)

    def test_array_argument_keeps_shape(self):
        z = np.linspace(0, 2, 12).reshape(3, 4)
        out = laguerre_eval(3, 0.0, z)
        assert out.shape == (3, 4)
        assert out[0, 0] == pytest.approx(1.0)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            laguerre_eval(-1, 0.0, 1.0)


class TestQuadrature:
    def test_one_point(self):
        r = gauss_legendre(1)
        assert r.nodes.tolist() == [0.0]
        assert r.weights.tolist() == pytest.approx([2.0])

    def test_two_point(self):
        r = gauss_legendre(2)
        assert sorted(r.nodes) == pytest.approx([-1 / np.sqrt(3), 1 / np.sqrt(3)], abs=1e-15)
        assert r.weights.tolist() == pytest.approx([1.0, 1.0], abs=1e-15)

    def test_sixteen_point_x30(self):
        assert gauss_legendre(16).integrate(lambda x: x**30) == pytest.approx(2 / 31, abs=1e-12)

    @pytest.mark.parametrize("m", [1, 3, 8, 20])
    def test_exact_to_degree_2m_minus_1(self, m):
        r = gauss_legendre(m)
        for k in range(2 * m):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            assert abs(r.integrate(lambda x: x**k) - exact) <= 1e-10 * max(1.0, exact)

    def test_mapped_interval(self):
        assert gauss_legendre(10).integrate(np.exp, 0.0, 1.0) == pytest.approx(np.e - 1, rel=1e-14)

    def test_composite(self):
        x, w = composite_rule(-3.0, 5.0, 4, gauss_legendre(6))
        assert x.size == w.size == 24
        assert np.sum(w) == pytest.approx(8.0)
        assert np.sum(w * np.cos(x)) == pytest.approx(np.sin(5.0) + np.sin(3.0), rel=1e-12)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            gauss_legendre(0)


class TestFindRoot:
    def test_sqrt2(self):
        f = lambda x: x * x - 2  # noqa: E731
        assert find_root_1d(f, Bracket.of(f, 1.0, 2.0), tol=1e-12) == pytest.approx(np.sqrt(2), abs=1e-12)

    def test_oval_endpoint(self):
        f = lambda p: np.sin(2 * p)  # noqa: E731
        root = find_root_1d(f, Bracket.of(f, 0.9 * np.pi / 2, 1.1 * np.pi / 2))
        assert root == pytest.approx(np.pi / 2, abs=1e-12)

    def test_transcendental_against_scan(self):
        f = lambda q: q * np.sinh(2 * q) - 1  # noqa: E731
        root = find_root_1d(f, Bracket.of(f, 0.1, 1.0))
        assert abs(f(root)) < 1e-10
        scan = np.linspace(0.1, 1.0, 200001)
        assert root == pytest.approx(scan[np.argmin(np.abs(f(scan)))], abs=1e-5)

    def test_residual_within_lipschitz_bound(self):
        f = lambda x: np.cos(x) - x  # noqa: E731
        tol = 1e-13
        root = find_root_1d(f, Bracket.of(f, 0.0, 1.0), tol=tol)
        lipschitz = abs(-np.sin(root) - 1)
        assert abs(f(root)) < 10 * tol * lipschitz

    def test_exact_endpoint(self):
        f = lambda x: x - 1.0  # noqa: E731
        assert find_root_1d(f, Bracket.of(f, 1.0, 3.0)) == 1.0

    def test_no_sign_change(self):
        f = lambda x: x * x + 1  # noqa: E731
        with pytest.raises(NoSignChange):
            find_root_1d(f, Bracket.of(f, -1.0, 1.0))

    def test_max_iterations(self):
        f = lambda x: x**3 - 0.3  # noqa: E731
        with pytest.raises(MaxIterations):
            find_root_1d(f, Bracket.of(f, 0.0, 1.0), tol=1e-15, maxiter=2)


class TestNewton:
    def test_upper_root(self):
        res = newton_complex(lambda z: z * z + 1, 0.1 + 0.9j)
        assert res.root == pytest.approx(1j, abs=1e-12)
        assert res.iterations > 0

    def test_conjugate_basin(self):
        assert newton_complex(lambda z: z * z + 1, 0.1 - 0.9j).root == pytest.approx(-1j, abs=1e-12)

    def test_square_well_pair_matches_grid_scan(self):
        F = lambda E: matching_residual(E, 5.0)  # noqa: E731
        re, im = np.meshgrid(np.linspace(5.5, 7.5, 401), np.linspace(0.5, 3.0, 401))
        vals = np.abs(np.vectorize(F)(re + 1j * im))
        k = np.unravel_index(np.argmin(vals), vals.shape)
        scan = re[k] + 1j * im[k]
        res = newton_complex(F, scan)
        assert abs(res.root - scan) < 0.01
        assert abs(F(res.root)) < 1e-10
        assert newton_complex(F, np.conj(scan)).root == pytest.approx(np.conj(res.root), abs=1e-8)

    def test_diverged_on_long_step(self):
        with pytest.raises(Diverged):
            newton_complex(lambda z: z * z + 1, 1e-9 + 0j, radius=1.0)

    def test_max_iterations(self):
        with pytest.raises(MaxIterations):
            newton_complex(lambda z: np.exp(z) - 2, 10.0 + 0j, maxiter=2)


class TestTolerance:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("PTNORM_TOL", raising=False)
        assert tolerance_from_env() == 1e-13

    def test_override(self, monkeypatch):
        monkeypatch.setenv("PTNORM_TOL", "1e-9")
        assert tolerance_from_env() == 1e-9

    @pytest.mark.parametrize("raw", ["abc", "-1", "0", "nan"])
    def test_rejects(self, monkeypatch, raw):
        monkeypatch.setenv("PTNORM_TOL", raw)
        with pytest.raises(ValueError):
            tolerance_from_env()
