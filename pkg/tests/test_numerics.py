import math

import numpy as np
import pytest

from zerorange.errors import InvalidInputError, NumericalFailureError, SingularCoefficientError
from zerorange.numerics import (
    RealInterval,
    c2x2,
    det2,
    find_roots,
    propagate,
    quadrature,
    tridiag_eigs,
)
from zerorange.regularized import v_eps


def rk4_endpoint(p, q, k, y0, a, b, n):
    """Fixed-step classical RK4 oracle in the (psi, p psi') variables."""
    h = (b - a) / n

    def rhs(x, v):
        return np.array([v[1] / p(x), (q(x) - k * k) * v[0]])

    v = np.array([y0[0], p(a) * y0[1]], dtype=float)
    x = a
    for _ in range(n):
        k1 = rhs(x, v)
        k2 = rhs(x + 0.5 * h, v + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h, v + 0.5 * h * k2)
        k4 = rhs(x + h, v + h * k3)
        v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        x += h
    return v[0], v[1] / p(b)


class TestRealInterval:
    def test_validates_order(self):
        with pytest.raises(InvalidInputError):
            RealInterval(1.0, 1.0)
        with pytest.raises(InvalidInputError):
            RealInterval(2.0, 1.0)

    def test_validates_grid(self):
        with pytest.raises(InvalidInputError):
            RealInterval(0.0, 1.0, grid_n=1)


class TestMatrixHelpers:
    def test_det_closed_form(self):
        m = c2x2(1.0, 2.0, 3.0, 4.0)
        assert det2(m) == pytest.approx(-2.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInputError):
            c2x2(1.0, math.inf, 0.0, 1.0)


class TestFindRoots:
    def test_sine_roots(self):
        roots = find_roots(math.sin, RealInterval(0.1, 10.0), 1e-12)
        assert len(roots) == 3
        for got, want in zip(roots, (math.pi, 2 * math.pi, 3 * math.pi)):
            assert abs(got - want) < 1e-11

    def test_k_tan_k(self):
        f = lambda k: k * math.tan(k) - 1.0
        roots = find_roots(f, RealInterval(1e-8, math.pi / 2), 1e-12)
        assert len(roots) == 1
        assert abs(roots[0] - 0.8603335890193797) < 1e-10

    def test_cos_level_crossings(self):
        # cos(2k) = 0.8 has three solutions below 4: arccos(0.8)/2, pi minus
        # that value, and pi plus that value.
        f = lambda k: math.cos(2.0 * k) - 0.8
        roots = find_roots(f, RealInterval(1e-8, 4.0), 1e-12)
        half = math.acos(0.8) / 2.0
        expected = [half, math.pi - half, math.pi + half]
        assert len(roots) == 3
        for got, want in zip(roots, expected):
            assert abs(got - want) < 1e-10

    def test_scaling_invariance(self):
        f = lambda k: math.cos(2.0 * k) - 0.8
        g = lambda k: -3.7 * f(k)
        interval = RealInterval(1e-8, 4.0)
        r1 = find_roots(f, interval, 1e-12)
        r2 = find_roots(g, interval, 1e-12)
        assert len(r1) == len(r2)
        assert max(abs(a - b) for a, b in zip(r1, r2)) < 1e-12

    def test_declared_pole_not_reported(self):
        # tan has a pole at pi/2 where the sign flips without a root.
        roots = find_roots(math.tan, RealInterval(0.5, 4.0, 401), 1e-12,
                           poles=(math.pi / 2,))
        assert len(roots) == 1
        assert abs(roots[0] - math.pi) < 1e-11

    def test_extra_points_bracket_tight_pairs(self):
        # Roots at 1 +- 5e-4 sit inside one cell of a grid that does not
        # sample x = 1 itself.
        f = lambda x: (x - 0.9995) * (x - 1.0005)
        coarse = RealInterval(0.0, 2.0, 12)
        assert find_roots(f, coarse, 1e-12) == []
        roots = find_roots(f, coarse, 1e-12, extra_points=(1.0,))
        assert len(roots) == 2

    def test_invalid_tol(self):
        with pytest.raises(InvalidInputError):
            find_roots(math.sin, RealInterval(0.0, 1.0), 0.0)


class TestQuadrature:
    def test_mollifier_normalization(self):
        interval = RealInterval(-10.0, 10.0)
        for eps in (1.0, 0.3, 0.1, 0.03):
            value = quadrature(lambda x: v_eps(x, eps), interval, 1e-10)
            assert abs(value - 1.0) < 1e-10

    def test_constant(self):
        assert quadrature(lambda x: 1.0, RealInterval(0.0, 2.0), 1e-12) == pytest.approx(2.0, abs=1e-12)

    def test_half_gaussian(self):
        value = quadrature(lambda x: math.exp(-x * x) / math.sqrt(math.pi),
                           RealInterval(0.0, 8.0), 1e-12)
        assert abs(value - 0.5) < 1e-11

    def test_nonfinite_integrand(self):
        f = lambda x: 1.0 / x if x != 0.0 else math.inf
        with pytest.raises(NumericalFailureError):
            quadrature(f, RealInterval(-1.0, 1.0), 1e-10)


class TestPropagate:
    def test_cosine_solution(self):
        psi, dpsi = propagate(lambda x: 1.0, lambda x: 0.0, 1.0, (1.0, 0.0),
                              RealInterval(0.0, math.pi), 1e-10)
        assert abs(psi + 1.0) < 1e-9
        assert abs(dpsi) < 1e-9

    def test_linear_solution_at_zero_energy(self):
        psi, dpsi = propagate(lambda x: 1.0, lambda x: 0.0, 0.0, (0.0, 1.0),
                              RealInterval(0.0, 3.0), 1e-12)
        assert abs(psi - 3.0) < 1e-10
        assert abs(dpsi - 1.0) < 1e-10

    def test_against_fixed_step_oracle(self):
        eps = 0.1
        p = lambda x: 1.0 + v_eps(x, eps)
        q = lambda x: 0.0
        got = propagate(p, q, 1.0, (1.0, 0.0), RealInterval(-1.0, 1.0), 1e-10)
        want = rk4_endpoint(p, q, 1.0, (1.0, 0.0), -1.0, 1.0, 50000)
        assert abs(got[0] - want[0]) < 1e-8
        assert abs(got[1] - want[1]) < 1e-8

    def test_wronskian_conservation(self):
        eps = 0.1
        p = lambda x: 1.0 + v_eps(x, eps)
        q = lambda x: 0.5 * v_eps(x, eps)
        tol = 1e-10
        interval = RealInterval(-1.0, 1.0)
        y1 = propagate(p, q, 1.3, (1.0, 0.0), interval, tol)
        y2 = propagate(p, q, 1.3, (0.0, 1.0), interval, tol)
        # p (psi1 psi2' - psi2 psi1') equals its initial value p(-1) * 1.
        w_end = p(1.0) * (y1[0] * y2[1] - y2[0] * y1[1])
        assert abs(w_end - p(-1.0)) < 10.0 * tol

    def test_singular_coefficient(self):
        with pytest.raises(SingularCoefficientError):
            propagate(lambda x: x, lambda x: 0.0, 1.0, (1.0, 0.0),
                      RealInterval(-1.0, 1.0), 1e-10)


class TestTridiagEigs:
    def test_identity(self):
        w = tridiag_eigs(np.ones(3), np.zeros(2), 3)
        assert np.allclose(w, 1.0, atol=1e-14)

    def test_discrete_laplacian_closed_form(self):
        # Dirichlet second-difference matrix on n interior points of [0, 1].
        n = 200
        h = 1.0 / (n + 1)
        diag = np.full(n, 2.0 / h**2)
        off = np.full(n - 1, -1.0 / h**2)
        got = tridiag_eigs(diag, off, 5)
        j = np.arange(1, 6)
        want = (2.0 - 2.0 * np.cos(np.pi * j * h)) / h**2
        assert np.max(np.abs(got - want) / want) < 1e-10

    def test_two_by_two(self):
        w = tridiag_eigs([0.0, 0.0], [1.0], 2)
        assert np.allclose(w, [-1.0, 1.0], atol=1e-14)

    def test_nondecreasing(self):
        rng = np.random.default_rng(7)
        d = rng.normal(size=40)
        e = rng.normal(size=39)
        w = tridiag_eigs(d, e, 40)
        assert np.all(np.diff(w) >= -1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            tridiag_eigs([1.0, 2.0], [1.0, 1.0], 2)
        with pytest.raises(InvalidInputError):
            tridiag_eigs([1.0, 2.0], [1.0], 3)
