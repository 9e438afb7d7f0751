import math

import numpy as np
import pytest

from fbminimal.errors import BranchPointError, DomainError, PoleError, RepresentationError
from fbminimal.numeric import LaurentPoly, curvatures, surface_jet
from fbminimal.weierstrass import (WeierstrassData, analytic_jet, apply_schottky, boundary_curvature,
                                   boundary_tangents, free_boundary_report, gauss_curvature, gauss_map,
                                   hopf_quantity, lambda_theta, log_polar_chart, metric_lambda, phi,
                                   plane_data, sample, surface_point, surface_points)

ALPHA = 1.199678640257734
NECK = math.sqrt(ALPHA**2 - 1) / ALPHA**2


@pytest.fixture(scope="module")
def perturbed():
    # catenoid-like data with a small quadratic term in the Gauss map
    return WeierstrassData(LaurentPoly({-2: 1.0}), LaurentPoly({1: 1.0, 2: 0.1}), 0.3)


class TestExamples:
    def test_phi_by_substitution(self):
        d = WeierstrassData(LaurentPoly({-2: 1.0}), LaurentPoly({1: 1.0}), 0.5)
        assert np.allclose(phi(d, 1.0), [0, 1j, 1])
        assert np.allclose(phi(d, 1j), [-1, 0, -1j])
        P = phi(d, 0.7 * np.exp(0.3j))
        assert abs(np.sum(P * P)) <= 1e-14
        assert metric_lambda(d, 1.0) == pytest.approx(1.0)
        r = 0.6
        assert metric_lambda(d, r * 1j) == pytest.approx((1 + r * r) ** 2 / (4 * r**4))
        assert np.allclose(gauss_map(d, 1.0), [1, 0, 0])

    def test_log_height(self):
        c = 0.8
        d = WeierstrassData(LaurentPoly({-2: c}), LaurentPoly({1: 1.0}), 0.4)
        z = 0.55 * np.exp(2.1j)
        assert surface_point(d, z)[2] - d.u0[2] == pytest.approx(c * math.log(0.55), abs=1e-13)
        assert np.all(np.abs(d.real_period()) <= 1e-10)

    def test_half_plane_data(self):
        d = WeierstrassData(LaurentPoly({0: 1.0}), LaurentPoly(), 0.5, z_ref=0.8j)
        z = 0.3 - 0.6j
        w = z - 0.8j
        assert np.allclose(surface_point(d, z), [w.real / 2, -w.imag / 2, 0], atol=1e-14)
        assert metric_lambda(d, z) == pytest.approx(0.25)

    def test_plane_phi(self):
        d = plane_data()
        assert np.allclose(phi(d, 0.7 + 0.1j), [1, 1j, 0])

    def test_plane_point(self):
        d = plane_data()
        assert np.allclose(surface_point(d, 0.6 + 0.3j), [0.6, -0.3, 0], atol=1e-14)
        assert np.allclose(gauss_map(d, 0.8), [0, 0, -1])
        assert metric_lambda(d, 0.8) == pytest.approx(1.0)
        assert gauss_curvature(d, 0.8) == 0
        assert hopf_quantity(d, 0.8) == 0

    def test_basepoint(self, critical_data):
        assert np.allclose(surface_point(critical_data, 1.0), critical_data.u0)

    def test_gauss_map_pole(self):
        d = WeierstrassData(LaurentPoly({-2: 1.0}), LaurentPoly({-1: 1.0}), 0.5)
        assert np.allclose(gauss_map(d, 1.0), [1, 0, 0])

    def test_critical_neck(self, critical_data):
        z = math.exp(-ALPHA)  # s = 0
        assert np.allclose(gauss_map(critical_data, z), [1, 0, 0], atol=1e-14)
        assert np.allclose(surface_point(critical_data, z), [NECK, 0, 0], atol=1e-13)
        assert gauss_curvature(critical_data, z) == pytest.approx(-1 / NECK**2, rel=1e-12)

    def test_critical_hopf_constant(self, critical_data):
        z = 0.6 * np.exp(1j * np.linspace(0, 6, 9))
        assert np.allclose(hopf_quantity(critical_data, z), NECK**2 / 4, atol=1e-15)

    def test_critical_boundary_curvature(self, critical_data):
        th = np.linspace(0, 2 * np.pi, 7)
        assert np.allclose(boundary_curvature(critical_data, "outer", th), ALPHA, rtol=1e-12)
        assert np.allclose(boundary_curvature(critical_data, "inner", th), ALPHA, rtol=1e-12)
        with pytest.raises(ValueError):
            boundary_curvature(critical_data, "middle", th)

    def test_boundary_tangents_plane(self):
        u1, u2 = boundary_tangents(plane_data(), np.exp(0.4j))
        # u(theta) = (cos, -sin, 0)
        assert np.allclose(u1, [-math.sin(0.4), -math.cos(0.4), 0])
        assert np.allclose(u2, [-math.cos(0.4), math.sin(0.4), 0])

    def test_sample(self, critical_data):
        s = sample(critical_data, 0.5j)
        assert s.z == 0.5j and s.K < 0 and s.Lambda > 0
        assert abs(s.hopf - NECK**2 / 4) < 1e-15

    def test_pole_at_origin(self, critical_data):
        with pytest.raises(PoleError):
            surface_point(critical_data, 0)
        with pytest.raises(PoleError):
            hopf_quantity(critical_data, 0)


class TestValidation:
    def test_rho_range(self):
        for rho in (0.0, 1.0, -0.2):
            with pytest.raises(DomainError):
                WeierstrassData(LaurentPoly({0: 1.0}), LaurentPoly(), rho)

    def test_zero_mu(self):
        with pytest.raises(DomainError):
            WeierstrassData(LaurentPoly(), LaurentPoly(), 0.5)

    def test_boundary_branch_point(self):
        with pytest.raises(BranchPointError):
            WeierstrassData(LaurentPoly({0: -1.0, 1: 1.0}), LaurentPoly(), 0.5)

    def test_interior_zero_warns(self):
        with pytest.warns(UserWarning, match="branch"):
            WeierstrassData(LaurentPoly({0: -0.7, 1: 1.0}), LaurentPoly(), 0.5)

    def test_branch_point_curvature(self):
        with pytest.warns(UserWarning):
            d = WeierstrassData(LaurentPoly({0: -0.7, 1: 1.0}), LaurentPoly({1: 1.0}), 0.5)
        with pytest.raises(BranchPointError):
            gauss_curvature(d, 0.7)

    def test_real_period_rejected(self):
        with pytest.raises(RepresentationError):
            WeierstrassData(LaurentPoly({-1: 1.0}), LaurentPoly(), 0.5)

    def test_basepoint_outside(self):
        with pytest.raises(DomainError):
            WeierstrassData(LaurentPoly({0: 1.0}), LaurentPoly(), 0.5, z_ref=0.2)


class TestFreeBoundary:
    def test_critical(self, critical_data):
        rep = free_boundary_report(critical_data, 64)
        assert rep.is_free_boundary(1e-10)
        assert rep.mean_curvature <= 1e-12

    def test_plane_fails_on_inner_circle(self):
        rep = free_boundary_report(plane_data(rho=0.5), 32)
        assert rep.sphere == pytest.approx(0.5, abs=1e-14)
        assert rep.orthogonality <= 1e-14
        assert not rep.is_free_boundary()

    def test_perturbed_fails(self, perturbed):
        rep = free_boundary_report(perturbed, 32)
        assert rep.mean_curvature <= 1e-12
        assert rep.hopf_imag > 1e-3 and rep.lambda_theta > 1e-3
        assert not rep.is_free_boundary()

    def test_small_grid(self, critical_data):
        with pytest.raises(ValueError):
            free_boundary_report(critical_data, 4)


class TestSchottky:
    def test_identity(self, critical_data):
        d = apply_schottky(critical_data, 1.0, 1)
        assert d.mu == critical_data.mu and d.nu == critical_data.nu

    def test_inversion_curvature(self, critical_data):
        rho = critical_data.rho
        d = apply_schottky(critical_data, rho, -1)
        w = np.array([0.5 + 0.2j, 0.8j, -0.4])
        assert np.allclose(gauss_curvature(d, w), gauss_curvature(critical_data, rho / w), rtol=1e-12)
        assert np.allclose(surface_point(d, w[0]), surface_point(critical_data, rho / w[0]), atol=1e-12)

    def test_rotation_pullback(self, perturbed):
        lam = np.exp(0.7j)
        d = apply_schottky(perturbed, lam, 1)
        for w in (0.5 + 0.2j, -0.6j):
            assert np.allclose(surface_point(d, w), surface_point(perturbed, w / lam), atol=1e-12)

    def test_bad_parameters(self, critical_data):
        with pytest.raises(RepresentationError):
            apply_schottky(critical_data, 0.5, 1)
        with pytest.raises(RepresentationError):
            apply_schottky(critical_data, 1.0, -1)
        with pytest.raises(RepresentationError):
            apply_schottky(critical_data, 1.0, 2)


@pytest.mark.parametrize("which", ["critical", "perturbed"])
def test_log_polar_invariants(which, critical_data, perturbed):
    d = critical_data if which == "critical" else perturbed
    sig = np.linspace(math.log(d.rho) * 0.9, -0.05, 5)[:, None]
    th = np.linspace(0, 2 * np.pi, 4, endpoint=False)[None, :]
    j = surface_jet(log_polar_chart(d), sig, th, h=1e-3)
    z = np.exp(sig + 1j * th)
    e = np.sum(j.p_s**2, -1)
    scale = np.max(e)
    # conformal, harmonic, and the conformal factor matches |z|^2 Lambda
    assert np.max(np.abs(e - np.sum(j.p_t**2, -1))) <= 1e-8 * scale
    assert np.max(np.abs(np.sum(j.p_s * j.p_t, -1))) <= 1e-8 * scale
    assert np.max(np.abs(j.p_ss + j.p_tt)) <= 1e-6 * math.sqrt(scale)
    assert np.allclose(e, np.abs(z) ** 2 * metric_lambda(d, z), rtol=1e-8)
    rec = curvatures(j)
    assert np.max(np.abs(rec.H)) <= 1e-5
    K = gauss_curvature(d, z)
    assert np.max(np.abs(rec.K - K)) <= 1e-5 * np.max(np.abs(K))


def test_analytic_jet_matches_fd(perturbed):
    z0 = 0.55 * np.exp(1.3j)

    def F(x, y):
        x, y = np.broadcast_arrays(x, y)
        return surface_points(perturbed, x + 1j * y)

    fd = surface_jet(F, z0.real, z0.imag, h=1e-3)
    ex = analytic_jet(perturbed, z0)
    for name in ("p", "p_s", "p_t", "p_ss", "p_st", "p_tt"):
        assert np.allclose(getattr(fd, name), getattr(ex, name), atol=1e-7), name


def test_lambda_theta_matches_fd(perturbed):
    z0 = 0.5 * np.exp(0.4j)
    h = 1e-5
    fd = (metric_lambda(perturbed, z0 * np.exp(1j * h)) - metric_lambda(perturbed, z0 * np.exp(-1j * h))) / (2 * h)
    assert lambda_theta(perturbed, z0) == pytest.approx(fd, rel=1e-7)
