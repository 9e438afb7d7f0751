import math

import numpy as np
import pytest

from fbminimal import catenoid as cat
from fbminimal.errors import DomainError
from fbminimal.numeric import curvatures, surface_jet
from fbminimal.weierstrass import surface_points

# frozen from scipy.optimize.brentq on the stated scalar equations
ALPHA = 1.199678640257734
NECK = 0.46048508825013
SQRT_TANH_ROOT = 1.3262590186281902


def test_solve_critical(critical):
    assert critical.alpha == pytest.approx(ALPHA, abs=1e-12)
    assert critical.a == pytest.approx(NECK, abs=1e-12)
    r1, r2 = cat.critical_residual(critical.a, critical.alpha)
    assert abs(r1) <= 1e-13 and abs(r2) <= 1e-13


def test_closed_form(critical):
    cf = cat.closed_form_critical(critical.alpha)
    assert cf["a"] == pytest.approx(critical.a, abs=1e-12)
    assert cf["boundary_radius"] == pytest.approx(critical.boundary_radius, abs=1e-12)
    assert cf["boundary_radius"] == pytest.approx(math.tanh(ALPHA), abs=1e-12)
    assert cf["boundary_height"] == pytest.approx(critical.boundary_height, abs=1e-12)
    assert cf["boundary_K"] == pytest.approx(float(cat.gauss_curvature(critical, critical.alpha)), abs=1e-12)
    assert cf["boundary_kappa"] == pytest.approx(1 / critical.boundary_radius, abs=1e-12)


def test_boundary_on_unit_sphere(critical):
    th = np.linspace(0, 2 * np.pi, 9)
    for s in (critical.alpha, -critical.alpha):
        p = cat.point(critical, s, th)
        assert np.allclose(np.linalg.norm(p, axis=-1), 1, atol=1e-13)
        # orthogonal intersection: the normal is tangent to the sphere
        assert np.allclose(np.sum(p * cat.normal(critical, s, th), -1), 0, atol=1e-13)


def test_roots():
    assert cat.aperture_root() == pytest.approx(ALPHA, abs=1e-12)
    r = cat.sqrt_tanh_root()
    assert r == pytest.approx(SQRT_TANH_ROOT, abs=1e-12)
    assert math.sqrt(r) * math.tanh(r) == pytest.approx(1, abs=1e-13)


def test_aperture(critical):
    ap = cat.normal_cone_aperture(critical)
    assert ap == pytest.approx(2 * math.acos(1 / ALPHA), abs=1e-12)
    angles = cat.boundary_normal_angles(critical, 32)
    assert np.ptp(angles) <= 1e-14
    assert angles[0] == pytest.approx(ap / 2, abs=1e-14)


def test_params_validation():
    with pytest.raises(DomainError):
        cat.CatenoidParams(0.0, 1.0)
    with pytest.raises(DomainError):
        cat.critical_residual(-1.0, 1.0)


@pytest.mark.parametrize("s", [0.0, 0.4, -1.1])
def test_normal_and_curvature(critical, s):
    jet = surface_jet(cat.chart(critical), s, 0.8)
    rec = curvatures(jet)
    n = cat.normal(critical, s, 0.8)
    assert np.allclose(rec.N, -n, atol=1e-9)
    assert abs(rec.H) <= 1e-7
    assert rec.K == pytest.approx(float(cat.gauss_curvature(critical, s)), rel=1e-7)


def test_weierstrass_reproduces_chart(critical, critical_data):
    S, T = np.meshgrid(np.linspace(-ALPHA, ALPHA, 9), np.linspace(0, 2 * np.pi, 8), indexing="ij")
    z = cat.chart_to_annulus(critical, S, T)
    assert np.all(np.abs(z) <= 1 + 1e-15) and np.all(np.abs(z) >= critical_data.rho - 1e-15)
    err = np.max(np.abs(surface_points(critical_data, z) - cat.point(critical, S, T)))
    assert err <= 1e-12


def test_general_catenoid_residual_nonzero():
    # a unit-neck catenoid cut at s=1 is not critical
    r1, r2 = cat.critical_residual(1.0, 1.0)
    assert abs(r1) > 0.1 and abs(r2) > 0.1
