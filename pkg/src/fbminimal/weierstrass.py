"""Minimal immersions of the annulus ``rho < |z| < 1`` from Weierstrass data.

The data are a pair of Laurent polynomials ``(mu, nu)`` giving

    Phi = (mu (1 - nu^2) / 2,  i mu (1 + nu^2) / 2,  mu nu),
    u(z) = u0 + Re int_{z_ref}^{z} Phi(w) dw.

All boundary identities used to recognise a free boundary surface in the
unit ball are evaluated from exact Laurent derivatives; only the immersion
itself needs quadrature.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BranchPointError, DegeneracyError, DomainError, PoleError, RepresentationError
from .numeric import LaurentPoly, SurfaceJet, curvatures, integrate_path

PERIOD_TOL = 1e-10


@dataclass(frozen=True)
class WeierstrassData:
    mu: LaurentPoly
    nu: LaurentPoly
    rho: float
    u0: tuple[float, float, float] = (0.0, 0.0, 0.0)
    z_ref: complex = 1.0 + 0j
    # boundary grid used for the no-branch-point check
    check_n: int = field(default=256, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise DomainError(f"inner radius must lie in (0, 1), got {self.rho}")
        if self.mu.is_zero():
            raise DomainError("mu must not vanish identically")
        object.__setattr__(self, "u0", tuple(float(x) for x in self.u0))
        object.__setattr__(self, "z_ref", complex(self.z_ref))
        r = abs(self.z_ref)
        if not self.rho - 1e-12 <= r <= 1.0 + 1e-12:
            raise DomainError(f"basepoint {self.z_ref} outside the closed annulus")
        self._check_branch_points()
        period = self.real_period()
        if np.max(np.abs(period)) > PERIOD_TOL:
            raise RepresentationError(f"immersion is not single valued: real period {period}")

    def _check_branch_points(self):
        theta = 2 * np.pi * np.arange(self.check_n) / self.check_n
        scale = max(abs(c) for c in self.mu.coeffs.values())
        for radius in (1.0, self.rho):
            vals = np.abs(self.mu(radius * np.exp(1j * theta)))
            if np.min(vals) <= 1e-12 * scale:
                raise BranchPointError(f"mu vanishes on the boundary circle |z|={radius}")
        roots = self.mu.roots()
        mods = np.abs(roots)
        on_boundary = (np.abs(mods - 1.0) < 1e-9) | (np.abs(mods - self.rho) < 1e-9)
        if np.any(on_boundary):
            raise BranchPointError(f"mu has a zero on the boundary: {roots[on_boundary]}")
        inside = (mods > self.rho) & (mods < 1.0)
        if np.any(inside):
            warnings.warn(f"mu has zeros inside the annulus (possible branch points): {roots[inside]}",
                          stacklevel=3)

    @cached_property
    def phi_polys(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
        nu2 = self.nu * self.nu
        return (0.5 * (self.mu - self.mu * nu2),
                0.5j * (self.mu + self.mu * nu2),
                self.mu * self.nu)

    @cached_property
    def phi_prime_polys(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
        return tuple(p.derivative() for p in self.phi_polys)

    def real_period(self) -> np.ndarray:
        """Re of the integral of Phi around the core circle (residue theorem)."""
        return np.array([(2j * np.pi * p.residue()).real for p in self.phi_polys])


def plane_data(scale: float = 1.0, rho: float = 0.5) -> WeierstrassData:
    """Flat disk ``u = scale * (x, -y, 0)`` restricted to the annulus."""
    return WeierstrassData(LaurentPoly({0: 2.0 * scale}), LaurentPoly(), rho,
                           u0=(scale, 0.0, 0.0), z_ref=1.0)


def _eval_triple(polys, z):
    return np.stack([np.asarray(p(z)) for p in polys], axis=-1)


def phi(d: WeierstrassData, z):
    """The complex triple Phi(z); last axis has length 3."""
    return _eval_triple(d.phi_polys, z)


def phi_prime(d: WeierstrassData, z):
    return _eval_triple(d.phi_prime_polys, z)


def _log_polar_path(d: WeierstrassData, z: complex) -> list[complex]:
    """Radial-then-circular path from z_ref to z, written in w = log z."""
    w0 = cmath.log(d.z_ref)
    dtheta = cmath.phase(z / d.z_ref)
    w1 = complex(math.log(abs(z)), w0.imag)
    return [w0, w1, w1 + 1j * dtheta]


def surface_point(d: WeierstrassData, z) -> np.ndarray:
    """Position ``u(z)`` in R^3.

    The canonical path is a straight polyline in ``w = log z``, so the
    integrand ``Phi(e^w) e^w`` stays smooth even near the inner circle.
    """
    z = complex(z)
    if z == 0:
        raise PoleError("z = 0 is not in the annulus")
    if z == d.z_ref:
        return np.array(d.u0)
    path = _log_polar_path(d, z)

    def integrand(w):
        zz = np.exp(w)
        return phi(d, zz) * zz[:, None]

    total = integrate_path(integrand, path, n_per_segment=16, max_length=0.5)
    return np.array(d.u0) + total.real


def surface_points(d: WeierstrassData, zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=complex)
    out = np.array([surface_point(d, z) for z in zs.ravel()])
    return out.reshape(zs.shape + (3,))


def log_polar_chart(d: WeierstrassData):
    """Surface map ``(sigma, theta) -> u(exp(sigma + i theta))`` for finite differences."""
    def F(sig, th):
        sig, th = np.broadcast_arrays(np.asarray(sig, float), np.asarray(th, float))
        return surface_points(d, np.exp(sig + 1j * th))
    return F


def metric_lambda(d: WeierstrassData, z):
    mu = np.abs(d.mu(z))
    nu = np.abs(d.nu(z))
    return 0.25 * mu**2 * (1 + nu**2) ** 2


def gauss_map(d: WeierstrassData, z) -> np.ndarray:
    """Unit normal via inverse stereographic projection of nu."""
    nu = np.asarray(d.nu(z), dtype=complex)
    m2 = np.abs(nu) ** 2
    with np.errstate(over="ignore", invalid="ignore"):
        N = np.stack([2 * nu.real, 2 * nu.imag, m2 - 1], axis=-1) / (1 + m2)[..., None]
    pole = ~np.isfinite(m2)
    if np.any(pole):
        N[pole] = (0.0, 0.0, 1.0)
    return N


def gauss_curvature(d: WeierstrassData, z):
    mu = np.abs(d.mu(z))
    if np.any(mu == 0):
        raise BranchPointError(f"mu vanishes at {z}")
    dnu = np.abs(d.nu.derivative()(z))
    nu = np.abs(d.nu(z))
    return -((4 * dnu) / (mu * (1 + nu**2) ** 2)) ** 2


def hopf_quantity(d: WeierstrassData, z):
    """``z^4 <u_zz^perp, u_zz^perp> = z^4 (mu nu')^2 / 4``."""
    if np.any(np.asarray(z) == 0):
        raise PoleError("hopf quantity needs z != 0")
    l = -d.mu(z) * d.nu.derivative()(z)
    return np.asarray(z) ** 4 * l * l / 4


def boundary_tangents(d: WeierstrassData, z) -> tuple[np.ndarray, np.ndarray]:
    """``(u_theta, u_thetatheta)`` along the circle through ``z``."""
    z = np.asarray(z, dtype=complex)
    zi = z[..., None]
    P = phi(d, z)
    u_th = -(zi * P).imag
    u_thth = -(zi * P + zi * zi * phi_prime(d, z)).real
    return u_th, u_thth


def radial_derivative(d: WeierstrassData, z) -> np.ndarray:
    """``u_r = Re(z Phi) / |z|``."""
    z = np.asarray(z, dtype=complex)
    return (z[..., None] * phi(d, z)).real / np.abs(z)[..., None]


def _circle(d: WeierstrassData, component: str, theta):
    if component == "outer":
        radius = 1.0
    elif component == "inner":
        radius = d.rho
    else:
        raise ValueError(f"component must be 'inner' or 'outer', not {component!r}")
    return radius * np.exp(1j * np.asarray(theta, dtype=float))


def boundary_curvature(d: WeierstrassData, component: str, theta):
    """Curvature of the space curve ``theta -> u(r e^{i theta})``."""
    u1, u2 = boundary_tangents(d, _circle(d, component, theta))
    speed = np.linalg.norm(u1, axis=-1)
    if np.any(speed <= 1e-14):
        raise DegeneracyError("boundary curve has vanishing speed")
    return np.linalg.norm(np.cross(u1, u2), axis=-1) / speed**3


def analytic_jet(d: WeierstrassData, z, with_point: bool = True) -> SurfaceJet:
    """Exact jet of ``u`` in the Cartesian chart ``z = x + iy``.

    Without ``with_point`` the position is left as NaN, which is enough for
    :func:`curvatures` and skips the quadrature.
    """
    z = np.asarray(z, dtype=complex)
    P = phi(d, z)
    Pp = phi_prime(d, z)
    p = surface_points(d, z) if with_point else np.full(P.shape, np.nan)
    return SurfaceJet(p, P.real, -P.imag, Pp.real, -Pp.imag, -Pp.real, 0.0)


def lambda_theta(d: WeierstrassData, z):
    """Exact angular derivative of the conformal factor."""
    z = np.asarray(z, dtype=complex)
    mu, nu = d.mu(z), d.nu(z)
    mu_th = 1j * z * d.mu.derivative()(z)
    nu_th = 1j * z * d.nu.derivative()(z)
    w = 1 + np.abs(nu) ** 2
    dmu2 = 2 * (np.conj(mu) * mu_th).real
    dnu2 = 2 * (np.conj(nu) * nu_th).real
    return 0.25 * (dmu2 * w**2 + np.abs(mu) ** 2 * 2 * w * dnu2)


@dataclass(frozen=True)
class SurfaceSample:
    z: complex
    u: np.ndarray
    N: np.ndarray
    Lambda: float
    K: float
    hopf: complex


def sample(d: WeierstrassData, z) -> SurfaceSample:
    z = complex(z)
    return SurfaceSample(z, surface_point(d, z), gauss_map(d, z), float(metric_lambda(d, z)),
                         float(gauss_curvature(d, z)), complex(hopf_quantity(d, z)))


@dataclass(frozen=True)
class FreeBoundaryReport:
    sphere: float
    orthogonality: float
    hopf_imag: float
    lambda_theta: float
    mean_curvature: float
    n: int

    def residuals(self) -> dict[str, float]:
        return {"sphere": self.sphere, "orthogonality": self.orthogonality,
                "hopf_imag": self.hopf_imag, "lambda_theta": self.lambda_theta,
                "mean_curvature": self.mean_curvature}

    def is_free_boundary(self, tol: float = 1e-8) -> bool:
        return max(self.sphere, self.orthogonality, self.hopf_imag, self.lambda_theta) <= tol


def free_boundary_report(d: WeierstrassData, n: int = 64) -> FreeBoundaryReport:
    """Max residuals of the free boundary conditions on ``n``-point grids.

    ``mean_curvature`` is the max ``|H|`` over an ``n x n`` interior grid,
    evaluated from the exact jet.
    """
    if n < 8:
        raise ValueError("grid size must be at least 8")
    theta = 2 * np.pi * np.arange(n) / n
    zb = np.concatenate([np.exp(1j * theta), d.rho * np.exp(1j * theta)])
    u = surface_points(d, zb)
    ur = radial_derivative(d, zb)
    sphere = np.max(np.abs(np.linalg.norm(u, axis=-1) - 1.0))
    orth = np.max(np.linalg.norm(np.cross(u, ur), axis=-1) / np.linalg.norm(ur, axis=-1))
    hopf_imag = np.max(np.abs(np.imag(hopf_quantity(d, zb))))
    lam_th = np.max(np.abs(lambda_theta(d, zb)))

    radii = d.rho ** np.linspace(0.0, 1.0, n + 2)[1:-1]
    zi = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    H = curvatures(analytic_jet(d, zi, with_point=False)).H
    return FreeBoundaryReport(float(sphere), float(orth), float(hopf_imag), float(lam_th),
                              float(np.max(np.abs(H))), n)


def apply_schottky(d: WeierstrassData, lam: complex, sign: int = 1) -> WeierstrassData:
    """Data of ``u o phi^{-1}`` for the annulus automorphism ``phi(z) = lam z^sign``.

    ``sign=+1`` needs ``|lam| = 1`` (rotation); ``sign=-1`` needs
    ``|lam| = rho`` (inversion swapping the boundary circles).
    """
    lam = complex(lam)
    if sign == 1:
        if abs(abs(lam) - 1.0) > 1e-12:
            raise RepresentationError("z -> lam z is an automorphism only for |lam| = 1")
        mu = d.mu.scale_argument(1 / lam) * (1 / lam)
        nu = d.nu.scale_argument(1 / lam)
        z_ref = lam * d.z_ref
    elif sign == -1:
        if abs(abs(lam) - d.rho) > 1e-12 * max(1.0, d.rho):
            raise RepresentationError("z -> lam / z is an automorphism only for |lam| = rho")
        mu = d.mu.invert_argument(lam) * LaurentPoly({-2: -lam})
        nu = d.nu.invert_argument(lam)
        z_ref = lam / d.z_ref
    else:
        raise RepresentationError(f"sign must be +1 or -1, got {sign}")
    return WeierstrassData(mu, nu, d.rho, u0=d.u0, z_ref=z_ref, check_n=d.check_n)
