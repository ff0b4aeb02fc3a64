import math

import numpy as np
import pytest

from zerorange.boundary import (
    FluxParam,
    MassRatio,
    balian_bc,
    boundary_matrix,
    custom_boundary_matrix,
    flux_to_x3,
    mass_ratio_to_x2,
    x1,
    x2,
    x2_x3_reparam,
    x3,
    x4,
)
from zerorange.circle import (
    CircleSpec,
    circle_spectrum,
    closed_form_residual,
    degeneracy_report,
    secular_value,
    zeeman_levels,
)
from zerorange.errors import InvalidInputError
from zerorange.numerics import RealInterval, find_roots


def ring(kind, length=2.0):
    return CircleSpec(length, boundary_matrix(kind))


def analytic_roots(kind, k_max):
    """Closed-form spectrum on the circumference-2 ring, independent oracle."""
    roots = set()
    if kind.kind in ("x1", "x4"):
        n = 1
        while n * math.pi <= k_max:
            roots.add(n * math.pi)
            n += 1
        if kind.kind == "x1":
            shifted = lambda k: 2.0 * k * math.sin(k) - kind.param * math.cos(k)
        else:
            shifted = lambda k: kind.param * k * math.cos(k) - 2.0 * math.sin(k)
        grid = RealInterval(1e-9, k_max, 4001)
        roots.update(find_roots(shifted, grid, 1e-13))
    else:
        if kind.kind == "x2":
            mu = ((2.0 + kind.param) / (2.0 - kind.param)) ** 2
            c = 2.0 * math.sqrt(mu) / (1.0 + mu)
        else:
            gamma = math.atan2(kind.param, 2.0) / math.pi
            c = math.cos(2.0 * math.pi * gamma)
        half = math.acos(min(c, 1.0)) / 2.0
        n = 0
        while n * math.pi - half <= k_max:
            for k in (n * math.pi - half, n * math.pi + half):
                if 0.0 < k <= k_max:
                    roots.add(k)
            n += 1
    return np.array(sorted(roots))


def spectrum_ks(result):
    return np.array([r.k for r in result.roots])


class TestSecularValue:
    def test_free_ring_levels(self):
        spec = CircleSpec(2.0, custom_boundary_matrix(np.eye(2)))
        assert abs(secular_value(spec, math.pi)) < 1e-12

    def test_jump_level(self):
        spec = ring(x2(mass_ratio_to_x2(4.0)))
        assert abs(secular_value(spec, 0.32175055439664213)) < 1e-6

    def test_flux_level(self):
        spec = ring(x3(flux_to_x3(0.25)))
        assert abs(secular_value(spec, math.pi / 4.0)) < 1e-12

    def test_reduces_to_trace_for_unimodular(self):
        spec = ring(x1(2.0))
        for k in (0.7, 1.9, 4.4):
            m = spec.bc.matrix
            c, s = math.cos(k * 2.0), math.sin(k * 2.0)
            p = np.array([[c, s / k], [-k * s, c]])
            trace = np.trace(m.real @ p)
            assert abs(secular_value(spec, k) - (2.0 - trace)) < 1e-12


class TestCircleSpectrum:
    def test_strong_delta_reaches_dirichlet_limit(self):
        result = circle_spectrum(ring(x1(1e6)), 10.0)
        shifted = [r.k for r in result.roots if r.branch == "shifted"]
        for k in shifted:
            offset = min(abs(k - (math.pi / 2 + n * math.pi)) for n in range(4))
            assert offset < 1e-3

    def test_delta_lowest_shifted_root(self):
        result = circle_spectrum(ring(x1(2.0)), 10.0)
        shifted = [r.k for r in result.roots if r.branch == "shifted"]
        assert abs(shifted[0] - 0.8603335890193797) < 1e-9

    def test_bump_lowest_shifted_root(self):
        result = circle_spectrum(ring(x4(2.0)), 10.0)
        shifted = [r.k for r in result.roots if r.branch == "shifted"]
        assert abs(shifted[0] - 4.493409457909064) < 1e-9

    def test_transparent_jump_gives_free_doublets(self):
        result = circle_spectrum(ring(x2(mass_ratio_to_x2(1.0))), 10.0)
        assert [r.multiplicity for r in result.roots] == [2, 2, 2]
        for n, root in enumerate(result.roots, start=1):
            assert root.k == n * math.pi
            assert root.energy == root.k * root.k

    def test_transparent_limits_all_kinds(self):
        for kind in (x1(0.0), x4(0.0), x2(0.0), x3(0.0)):
            result = circle_spectrum(ring(kind), 10.0)
            assert [r.k for r in result.roots] == [math.pi, 2 * math.pi, 3 * math.pi]
            assert all(r.multiplicity == 2 for r in result.roots)

    def test_unshifted_roots_exact(self):
        for kind in (x1(1.0), x1(2.0), x1(10.0), x4(0.5), x4(2.0)):
            result = circle_spectrum(ring(kind), 20.0)
            unshifted = [r.k for r in result.roots if r.branch == "unshifted"]
            assert len(unshifted) == 6
            for n, k in enumerate(unshifted, start=1):
                assert k == n * math.pi

    def test_flux_branch_labels(self):
        gamma = 0.1
        result = circle_spectrum(ring(x3(flux_to_x3(gamma))), 10.0)
        for root in result.roots:
            nu = root.k / math.pi
            frac = nu - round(nu)
            want = "plus" if frac > 0 else "minus"
            assert root.branch == want
            assert abs(abs(frac) - gamma) < 1e-12

    def test_pi_phase_ring_is_antiperiodic(self):
        # Explicit phase composition standing in for the half-integer flux.
        result = circle_spectrum(CircleSpec(2.0, custom_boundary_matrix(-np.eye(2))), 10.0)
        assert all(r.multiplicity == 2 for r in result.roots)
        ks = [r.k for r in result.roots]
        want = [(n + 0.5) * math.pi for n in range(3)]
        assert np.allclose(ks, want, atol=1e-12)

    def test_rejects_non_unimodular(self):
        spec = CircleSpec(2.0, balian_bc(4.0, scaled=False))
        with pytest.raises(InvalidInputError):
            circle_spectrum(spec, 5.0)

    def test_rejects_generic_complex_matrix(self):
        m = np.array([[1.0, 0.4j], [0.0, 1.0]])
        spec = CircleSpec(2.0, custom_boundary_matrix(m))
        with pytest.raises(InvalidInputError):
            circle_spectrum(spec, 5.0)


PARAMETER_GRID = (
    [x1(v) for v in (1.0, 2.0, 10.0)]
    + [x2(mass_ratio_to_x2(mu)) for mu in (0.25, 1.0, 4.0)]
    + [x3(flux_to_x3(g)) for g in (0.1, 0.25)]
    + [x3(0.0)]
    + [x4(v) for v in (0.5, 2.0)]
)


class TestGenericAgainstClosedForm:
    @pytest.mark.parametrize("kind", PARAMETER_GRID, ids=lambda k: f"{k.kind}({k.param:g})")
    def test_root_sets_match_analytic(self, kind):
        got = spectrum_ks(circle_spectrum(ring(kind), 20.0))
        want = analytic_roots(kind, 20.0)
        assert len(got) == len(want), f"{len(got)} roots vs {len(want)} expected"
        assert np.max(np.abs(got - want)) < 1e-10

    @pytest.mark.parametrize("kind", PARAMETER_GRID, ids=lambda k: f"{k.kind}({k.param:g})")
    def test_residual_vanishes_on_spectrum(self, kind):
        for k in spectrum_ks(circle_spectrum(ring(kind), 20.0)):
            assert abs(closed_form_residual(kind, k)) < 1e-8


class TestClosedFormResidual:
    def test_delta_free_levels(self):
        for strength in (0.5, 2.0, -3.0):
            assert abs(closed_form_residual(x1(strength), math.pi)) < 1e-12

    def test_jump_level(self):
        assert abs(closed_form_residual(MassRatio(4.0), 0.32175055439664213)) < 1e-6

    def test_bump_level(self):
        assert abs(closed_form_residual(x4(2.0), 4.493409457909064)) < 1e-6

    def test_parameter_forms_agree(self):
        for k in (0.3, 1.1, 2.6):
            via_kind = closed_form_residual(x2(mass_ratio_to_x2(4.0)), k)
            via_mu = closed_form_residual(MassRatio(4.0), k)
            assert abs(via_kind - via_mu) < 1e-12
            via_x3 = closed_form_residual(x3(flux_to_x3(0.2)), k)
            via_gamma = closed_form_residual(FluxParam(0.2), k)
            assert abs(via_x3 - via_gamma) < 1e-12

    def test_rejects_nonpositive_k(self):
        with pytest.raises(InvalidInputError):
            closed_form_residual(x1(1.0), 0.0)


class TestReparametrization:
    @pytest.mark.parametrize("mu", (0.25, 4.0, 9.0))
    def test_jump_and_flux_spectra_coincide(self, mu):
        jump = spectrum_ks(circle_spectrum(ring(x2(mass_ratio_to_x2(mu))), 20.0))
        gamma = x2_x3_reparam(mu)
        flux = spectrum_ks(circle_spectrum(ring(x3(flux_to_x3(gamma))), 20.0))
        assert len(jump) == len(flux)
        assert np.max(np.abs(jump - flux)) < 1e-10


class TestZeeman:
    def test_zero_flux_degenerate(self):
        levels = zeeman_levels(0.0, 4, 2.0 * math.pi)
        for lvl in levels:
            assert lvl.splitting == 0.0
            assert lvl.e_plus == lvl.e_minus

    def test_splitting_values_unit_ring(self):
        levels = zeeman_levels(0.1, 3, 2.0 * math.pi)
        assert abs(levels[0].e_plus - 1.1**2) < 1e-9
        assert abs(levels[0].e_minus - 0.9**2) < 1e-9
        assert abs(levels[0].splitting - 0.4) < 1e-9
        assert abs(levels[2].splitting - 1.2) < 1e-9

    def test_splitting_linear_in_m_and_gamma(self):
        for gamma in (0.05, 0.1, 0.25):
            for lvl in zeeman_levels(gamma, 10, 2.0 * math.pi):
                assert abs(lvl.splitting - 4.0 * lvl.m * gamma) < 1e-10

    def test_general_circumference(self):
        length = 3.0
        unit = 2.0 * math.pi / length
        for lvl in zeeman_levels(0.2, 3, length):
            assert abs(lvl.e_plus - (unit * (lvl.m + 0.2)) ** 2) < 1e-9
            assert abs(lvl.e_minus - (unit * (lvl.m - 0.2)) ** 2) < 1e-9

    def test_integer_flux_hidden(self):
        levels = zeeman_levels(1.0, 3, 2.0 * math.pi)
        for lvl in levels:
            assert lvl.splitting == 0.0
        assert levels[0].gamma == 1.0

    def test_invalid_inputs(self):
        with pytest.raises(InvalidInputError):
            zeeman_levels(0.1, 0, 2.0)
        with pytest.raises(InvalidInputError):
            zeeman_levels(0.5, 2, 2.0)


class TestDegeneracyReport:
    def test_zero_flux_all_degenerate(self):
        report = degeneracy_report(circle_spectrum(ring(x3(0.0)), 20.0))
        assert len(report.split_pairs) == 0
        assert len(report.degenerate_pairs) == 6
        assert report.max_split == 0.0

    def test_delta_ring_has_no_magnetic_pairs(self):
        result = circle_spectrum(ring(x1(2.0)), 20.0)
        report = degeneracy_report(result)
        assert len(report.split_pairs) == 0
        assert report.max_split == 0.0
        branches = {r.branch for r in result.roots}
        assert branches == {"unshifted", "shifted"}

    def test_flux_ring_splits_every_doublet(self):
        gamma = 0.1
        result = circle_spectrum(ring(x3(flux_to_x3(gamma))), 20.0)
        report = degeneracy_report(result)
        assert len(report.degenerate_pairs) == 0
        assert len(report.split_pairs) == 6
        # Splittings grow linearly: (pi (m + g))^2 - (pi (m - g))^2.
        want_max = math.pi**2 * 4.0 * gamma * 6.0
        assert abs(report.max_split - want_max) < 1e-9

    def test_tolerance_validation(self):
        result = circle_spectrum(ring(x3(0.0)), 5.0)
        with pytest.raises(InvalidInputError):
            degeneracy_report(result, tol=0.0)
