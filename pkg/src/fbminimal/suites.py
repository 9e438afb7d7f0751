"""Verification suites behind the CLI commands.

Each suite returns a :class:`VerificationReport`.  Tolerances come from
``DEFAULT_TOLERANCES`` and can be overridden by name.
"""
from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from . import catenoid as cat
from . import cone
from . import weierstrass as ws
from .numeric import hausdorff_distance
from .report import Check, VerificationReport

ALPHA_REFERENCE = 1.19967864

DEFAULT_TOLERANCES: dict[str, float] = {
    # critical catenoid
    "alpha_reference": 1e-8,
    "critical_sphere": 1e-10,
    "critical_orthogonality": 1e-10,
    "neck_closed_form": 1e-12,
    "radius_identity": 1e-10,
    "boundary_kappa_closed_form": 1e-10,
    # free boundary suite on the Weierstrass data
    "fb_sphere": 1e-8,
    "fb_orthogonality": 1e-8,
    "fb_hopf_imag": 1e-8,
    "fb_lambda_theta": 1e-8,
    "fb_mean_curvature": 1e-6,
    "hopf_constancy": 1e-12,
    "hopf_plane": 0.0,
    "boundary_kappa_numeric": 1e-6,
    "chart_reproduction": 1e-8,
    # one-phase cones
    "q1_root_identity": 1e-10,
    "boundary_gradient": 1e-10,
    "aperture_match": 1e-10,
    "neck_match": 1e-9,
    "cap_gradient_fd": 1e-8,
    "cap_angle_spread": 1e-8,
    # herisson
    "hausdorff": 1e-4,
    "gauss_inversion": 1e-6,
    "radii_sum": 1e-4,
    "minimality": 1e-5,
    "negative_control": 0.01,
    "duality_spread": 1e-8,
    "harmonicity_fd": 1e-6,
    "eigen_identity": 1e-8,
    "euler_degeneracy": 1e-8,
    # spectral disks
    "spectral_closed_form": 1e-12,
    "spectral_pde": 1e-5,
    "spectral_boundary_spread": 1e-8,
    "spectral_boundary_gradient": 1e-8,
    # export
    "obj_roundtrip": 1e-8,
}


class _Builder:
    def __init__(self, command: str, tol: Mapping[str, float] | None):
        self.report = VerificationReport(command)
        self.tol = {**DEFAULT_TOLERANCES, **(tol or {})}

    def check(self, name: str, measured: float, provenance: str, key: str | None = None,
              compare: str = "le"):
        self.report.records.append(Check(name, float(measured), self.tol[key or name], provenance, compare))


def critical_catenoid(grid_n: int = 64, tol=None) -> VerificationReport:
    b = _Builder("critical-catenoid", tol)
    c = cat.solve_critical()
    closed = cat.closed_form_critical(c.alpha)
    r_sphere, r_orth = cat.critical_residual(c.a, c.alpha)
    b.check("alpha_reference", abs(c.alpha - ALPHA_REFERENCE), "critical catenoid aperture constant")
    b.check("critical_sphere", abs(r_sphere), "boundary circle on the unit sphere")
    b.check("critical_orthogonality", abs(r_orth), "catenoid meets the sphere orthogonally")
    b.check("neck_closed_form", abs(c.a - closed["a"]), "neck radius sqrt(alpha^2-1)/alpha^2")
    b.check("radius_identity", abs(c.boundary_radius - math.tanh(c.alpha))
            + abs(c.boundary_radius - 1 / c.alpha), "boundary radius 1/alpha = tanh alpha")
    K_b = float(cat.gauss_curvature(c, c.alpha))
    k_b = 1.0 / c.boundary_radius
    b.check("boundary_kappa_closed_form", abs(k_b - math.sqrt(1 - K_b)) + abs(K_b - closed["boundary_K"])
            + abs(k_b - c.alpha), "boundary circle curvature sqrt(1-K)")

    d = cat.to_weierstrass(c)
    fb = ws.free_boundary_report(d, grid_n)
    b.check("fb_sphere", fb.sphere, "free boundary: boundary on the sphere")
    b.check("fb_orthogonality", fb.orthogonality, "free boundary: u_r parallel to u")
    b.check("fb_hopf_imag", fb.hopf_imag, "free boundary: hopf quantity real on the boundary")
    b.check("fb_lambda_theta", fb.lambda_theta, "free boundary: conformal factor constant along boundary")
    b.check("fb_mean_curvature", fb.mean_curvature, "minimality of the immersion")

    zs = _annulus_grid(d.rho, grid_n)
    hopf = ws.hopf_quantity(d, zs)
    b.check("hopf_constancy", np.max(np.abs(hopf - c.a**2 / 4)), "hopf quantity constant over the annulus")
    plane = ws.plane_data(rho=d.rho)
    b.check("hopf_plane", np.max(np.abs(ws.hopf_quantity(plane, zs))), "hopf quantity of the plane")

    theta = 2 * np.pi * np.arange(grid_n) / grid_n
    worst = 0.0
    for comp, radius in (("outer", 1.0), ("inner", d.rho)):
        k = ws.boundary_curvature(d, comp, theta)
        K = ws.gauss_curvature(d, radius * np.exp(1j * theta))
        worst = max(worst, float(np.max(np.abs(k - np.sqrt(1 - K)) / np.sqrt(1 - K))))
    b.check("boundary_kappa_numeric", worst, "boundary circle curvature sqrt(1-K), numerically")

    n = min(grid_n, 20)
    S, T = np.meshgrid(np.linspace(-c.alpha, c.alpha, n), 2 * np.pi * np.arange(n) / n, indexing="ij")
    err = np.max(np.abs(ws.surface_points(d, cat.chart_to_annulus(c, S, T)) - cat.point(c, S, T)))
    b.check("chart_reproduction", err, "Weierstrass data reproduce the catenoid chart")

    b.report.constants.update({
        "alpha": c.alpha, "a": c.a, "boundary_radius": c.boundary_radius,
        "boundary_height": c.boundary_height, "boundary_K": K_b, "boundary_kappa": k_b,
        "aperture": cat.normal_cone_aperture(c), "hopf_constant": c.a**2 / 4,
        "sqrt_tanh_root": cat.sqrt_tanh_root(),
    })
    return b.report


def _annulus_grid(rho: float, n: int) -> np.ndarray:
    radii = rho ** np.linspace(0.0, 1.0, n)
    theta = 2 * np.pi * np.arange(n) / n
    return radii[:, None] * np.exp(1j * theta)[None, :]


def one_phase(kind: str = "double_cone", alpha_bc: float = 0.5, grid_n: int = 64,
              tol=None) -> VerificationReport:
    b = _Builder("one-phase", tol)
    if kind == "cap":
        sol = cone.solve_pr2_cap(alpha_bc)
    else:
        sol = cone.solve_one_phase(kind)
    b.check("boundary_gradient", np.max(np.abs(sol.boundary_gradient_norms() - 1.0)),
            "unit gradient on the cone boundary")
    b.report.constants.update({"c": sol.c, "theta_lo": sol.domain.theta_lo,
                               "theta_hi": sol.domain.theta_hi})
    if kind == "double_cone":
        x1 = cone.q1_root()
        c = cat.solve_critical()
        b.check("q1_root_identity", abs(x1 - math.tanh(c.alpha)) + abs(x1 * math.atanh(x1) - 1),
                "Q1 root equals tanh of the aperture root")
        aperture = 2 * sol.domain.theta_lo
        b.check("aperture_match", abs(aperture - cat.normal_cone_aperture(c)),
                "cone aperture equals catenoid normal-cone aperture")
        b.check("neck_match", abs(sol.c - c.a), "normalization equals the critical neck radius")
        b.report.constants.update({"q1_root": x1, "aperture": aperture})
    else:
        theta0 = sol.domain.theta_hi
        phi = 2 * np.pi * np.arange(grid_n) / grid_n
        X = cone.sphere_point(theta0, phi)
        fd = np.linalg.norm(cone.fd_gradient(sol.v, X), axis=-1)
        b.check("cap_gradient_fd", np.max(np.abs(fd - 1.0)), "finite-difference |grad v| on the boundary")
        mean, spread = cone.boundary_angle_spread(sol, grid_n)
        b.check("cap_angle_spread", spread + abs(mean - math.acos(sol.boundary_value)),
                "fixed angle between grad v and x along the boundary")
        b.report.constants.update({"boundary_value": sol.boundary_value, "angle": mean})
    return b.report


def herisson_inputs() -> list[tuple[str, cone.AxisymmetricProfile, cone.ConeDomain]]:
    sol = cone.solve_one_phase("double_cone")
    return [
        ("double_cone", sol.v, sol.domain),
        ("generic_a", cone.AxisymmetricHarmonic(1.0, 0.5), cone.ConeDomain(0.8, math.pi - 0.8)),
        ("generic_b", cone.AxisymmetricHarmonic(-0.3, 2.0), cone.ConeDomain(0.5, math.pi - 0.5)),
    ]


def double_cone_image(grid_n: int):
    """Herisson of the double-cone solution on the grid matched to the catenoid chart.

    Matching uses ``cos(theta) = tanh(s)``; the two clouds are returned
    as ``(herisson_points, catenoid_points)``.
    """
    sol = cone.solve_one_phase("double_cone")
    c = cat.solve_critical()
    s = np.linspace(-c.alpha, c.alpha, grid_n)
    thetas = np.arccos(np.tanh(s))
    surf = cone.herisson_surface(sol.v, thetas=thetas, n_phi=grid_n)
    phi = 2 * np.pi * np.arange(grid_n) / grid_n
    S, P = np.meshgrid(s, phi, indexing="ij")
    return surf, cat.point(c, S, P)


def herisson(grid_n: int = 64, tol=None) -> VerificationReport:
    b = _Builder("herisson", tol)
    surf, cloud = double_cone_image(grid_n)
    b.check("hausdorff", hausdorff_distance(surf.y, cloud), "herisson of the double cone is the critical catenoid")

    for name, fn, dom in herisson_inputs():
        s = cone.herisson_surface(fn, dom, grid_n, grid_n)
        p1, p2 = cone.verify_prop1(s), cone.verify_prop2(s)
        b.check(f"gauss_inversion[{name}]", p1.normal_deviation, "image Gauss map inverts grad v", "gauss_inversion")
        b.check(f"radii_sum[{name}]", p1.radii_mismatch, "sum of curvature radii equals Hessian trace", "radii_sum")
        b.check(f"minimality[{name}]", p2.max_abs_H, "herisson of a harmonic function is minimal", "minimality")

        theta = dom.interior_grid(16)
        phi = np.linspace(0.1, 2 * np.pi, 16, endpoint=False)
        T, P = np.meshgrid(theta, phi, indexing="ij")
        for radius in (1.0, 1.7):
            X = radius * cone.sphere_point(T, P)
            lap = cone.fd_laplacian(fn, X)
            hess = cone.fd_hessian(fn, X)
            b.check(f"harmonicity_fd[{name},r={radius}]", np.max(np.abs(lap)), "v is harmonic", "harmonicity_fd")
            b.check(f"euler_degeneracy[{name},r={radius}]",
                    np.max(np.abs(np.einsum("...ij,...j->...i", hess, X))) / radius,
                    "Hessian annihilates the radial direction", "euler_degeneracy")
        b.check(f"eigen_identity[{name}]", np.max(np.abs(cone.sphere_eigen_residual(fn, theta))),
                "spherical profile has eigenvalue 2", "eigen_identity")

    sanity = cone.herisson_surface(cone.norm_profile(), cone.ConeDomain(0.3, math.pi - 0.3), grid_n, grid_n)
    p1 = cone.verify_prop1(sanity)
    b.check("radii_sum[norm]", p1.radii_mismatch, "unit sphere radii sum 2", "radii_sum")
    b.check("gauss_inversion[norm]", p1.normal_deviation, "unit sphere normal", "gauss_inversion")

    control = cone.herisson_surface(cone.cos2_profile(), cone.ConeDomain(0.9, math.pi - 0.9), grid_n, grid_n)
    b.check("negative_control[cos2]", cone.verify_prop2(control).max_abs_H,
            "non-harmonic profile is not minimal", "negative_control", compare="gt")

    sol = cone.solve_one_phase("double_cone")
    angles = cone.boundary_normal_angles(sol, grid_n)
    b.check("duality_spread", np.ptp(angles) + abs(float(np.mean(angles)) - sol.domain.theta_lo),
            "boundary normals of the image follow the cone boundary")
    b.report.constants.update({"double_cone_degenerate": float(surf.n_degenerate)})
    return b.report


SPECTRAL_CASES = [(k, t) for k in (1.0, 4.0) for t in (math.pi / 6, math.pi / 3, math.pi / 2)]


def spectral(cases=None, tol=None) -> VerificationReport:
    b = _Builder("spectral", tol)
    for kappa, theta0 in cases or SPECTRAL_CASES:
        r = cone.spectral_disk_check(theta0, kappa)
        tag = f"[kappa={kappa:g},theta0={theta0:.6f}]"
        closed = (abs(r.lam + 2 * kappa) + abs(r.alpha_bv - math.cos(theta0))
                  + abs(r.beta_bv - math.sqrt(kappa) * math.sin(theta0)))
        b.check("spectral_closed_form" + tag, closed, "lambda = -2 kappa on a geodesic disk", "spectral_closed_form")
        b.check("spectral_pde" + tag, r.pde_residual, "Laplace-Beltrami residual", "spectral_pde")
        b.check("spectral_boundary_spread" + tag, r.boundary_spread, "constant boundary gradient",
                "spectral_boundary_spread")
        b.check("spectral_boundary_gradient" + tag, abs(r.boundary_gradient - r.beta_bv),
                "boundary gradient equals beta", "spectral_boundary_gradient")
    return b.report


def verify_all(grid_n: int = 64, tol=None) -> VerificationReport:
    report = VerificationReport("verify-all")
    report.extend(critical_catenoid(grid_n, tol))
    for kind in ("halfspace", "double_cone", "cap"):
        sub = one_phase(kind, grid_n=grid_n, tol=tol)
        for r in sub.records:
            report.records.append(Check(f"{kind}:{r.name}", r.measured, r.tolerance, r.provenance, r.compare))
    report.extend(herisson(grid_n, tol))
    report.extend(spectral(tol=tol))
    return report


SURFACES = ("critical-catenoid", "herisson", "plane")


def surface_grid(surface: str, grid_n: int) -> tuple[np.ndarray, bool]:
    """Sampled ``(rows, cols, 3)`` grid for export and whether columns wrap around."""
    theta = 2 * np.pi * np.arange(grid_n) / grid_n
    if surface == "critical-catenoid":
        d = cat.to_weierstrass(cat.solve_critical())
        return ws.surface_points(d, _annulus_grid(d.rho, grid_n)), True
    if surface == "plane":
        d = ws.plane_data()
        return ws.surface_points(d, _annulus_grid(d.rho, grid_n)), True
    if surface == "herisson":
        surf, _ = double_cone_image(grid_n)
        return surf.y, True
    raise ValueError(f"unknown surface {surface!r}")


def surface_reference(surface: str, grid_n: int) -> np.ndarray:
    """Independent recomputation of the exported vertices for round-trip checks."""
    if surface == "herisson":
        sol = cone.solve_one_phase("double_cone")
        c = cat.solve_critical()
        s = np.linspace(-c.alpha, c.alpha, grid_n)
        T, P = np.meshgrid(np.arccos(np.tanh(s)), 2 * np.pi * np.arange(grid_n) / grid_n, indexing="ij")
        return cone.gradient_map(sol.v, T, P)
    d = cat.to_weierstrass(cat.solve_critical()) if surface == "critical-catenoid" else ws.plane_data()
    zs = _annulus_grid(d.rho, grid_n)
    return np.array([[ws.surface_point(d, z) for z in row] for row in zs])


def sample_rows(grid_n: int):
    """SurfaceSample stream of the critical catenoid data as table rows."""
    d = cat.to_weierstrass(cat.solve_critical())
    header = ["z_re", "z_im", "x", "y", "z", "N_x", "N_y", "N_z", "Lambda", "K", "hopf_re", "hopf_im"]
    rows = []
    for z in _annulus_grid(d.rho, grid_n).ravel():
        smp = ws.sample(d, z)
        rows.append([smp.z.real, smp.z.imag, *smp.u, *smp.N, smp.Lambda, smp.K, smp.hopf.real, smp.hopf.imag])
    return header, rows
