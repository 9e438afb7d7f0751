"""Homogeneous degree-1 functions on axisymmetric cones and their herissons.

A degree-1 homogeneous function is written ``v(x) = |x| g(theta)`` with
``theta`` the polar angle.  It is harmonic exactly when ``g`` is an
eigenfunction of the round sphere with ``Delta g = -2 g`` (Laplacian sign
convention with negative spectrum, used everywhere in this package).  The
axisymmetric solutions are spanned by ``cos theta`` and ``Q1(cos theta)``.

The herisson of ``v`` is the image of the unit sphere under ``grad v``.
In the orthonormal frame ``(theta_hat, phi_hat)`` the differential of that
map is diagonal with entries

    r_theta = g + g'',        r_phi = g + g' cot(theta),

which are the curvature radii of the image (with normal ``x``); their sum is
the trace of the Hessian of ``v`` on the sphere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import DegeneracyError, DomainError, InsufficientDataError
from .numeric import curvatures, find_root, surface_jet


def _as_unit_open(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1):
        raise DomainError("Q1 is only defined for |x| < 1")
    return x


def legendre_q1(x):
    """Legendre function of the second kind, ``Q1(x) = x artanh(x) - 1``."""
    x = _as_unit_open(x)
    out = x * np.arctanh(x) - 1.0
    return float(out) if out.ndim == 0 else out


def legendre_q1_prime(x):
    x = _as_unit_open(x)
    out = np.arctanh(x) + x / (1 - x * x)
    return float(out) if out.ndim == 0 else out


def legendre_q1_second(x):
    x = _as_unit_open(x)
    out = 2.0 / (1 - x * x) ** 2
    return float(out) if out.ndim == 0 else out


def q1_root(tol: float = 1e-13) -> float:
    """Unique positive root of Q1, i.e. of ``x artanh x = 1``."""
    return find_root(lambda x: x * math.atanh(x) - 1.0, 0.5, 0.99, tol=tol)


class AxisymmetricProfile:
    """Angular profile ``g`` of ``v = |x| g(theta)`` with two derivatives."""

    def g(self, theta):
        raise NotImplementedError

    def dg(self, theta):
        raise NotImplementedError

    def d2g(self, theta):
        raise NotImplementedError


@dataclass(frozen=True)
class AxisymmetricHarmonic(AxisymmetricProfile):
    """``g = A cos(theta) + B Q1(cos(theta))``."""

    A: float
    B: float

    def __post_init__(self):
        if self.A == 0 and self.B == 0:
            raise DomainError("(A, B) must not both vanish")

    def _x(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.B != 0 and np.any((theta <= 0) | (theta >= np.pi)):
            raise DomainError("Q1(cos theta) is singular at the poles")
        return theta, np.cos(theta)

    def g(self, theta):
        theta, x = self._x(theta)
        q = legendre_q1(x) if self.B else 0.0
        return self.A * x + self.B * q

    def dg(self, theta):
        theta, x = self._x(theta)
        q = legendre_q1_prime(x) if self.B else 0.0
        return -np.sin(theta) * (self.A + self.B * q)

    def d2g(self, theta):
        theta, x = self._x(theta)
        s = np.sin(theta)
        q1 = legendre_q1_prime(x) if self.B else 0.0
        q2 = legendre_q1_second(x) if self.B else 0.0
        return -self.A * x + self.B * (s * s * q2 - x * q1)

    def scaled(self, c: float) -> "AxisymmetricHarmonic":
        return AxisymmetricHarmonic(c * self.A, c * self.B)


@dataclass(frozen=True)
class CustomProfile(AxisymmetricProfile):
    """Profile from explicit callables; used for non-harmonic test inputs."""

    g_fn: Callable
    dg_fn: Callable
    d2g_fn: Callable
    name: str = "custom"

    def g(self, theta):
        return self.g_fn(np.asarray(theta, float))

    def dg(self, theta):
        return self.dg_fn(np.asarray(theta, float))

    def d2g(self, theta):
        return self.d2g_fn(np.asarray(theta, float))


def norm_profile() -> CustomProfile:
    """``g = 1``, i.e. ``f(x) = |x|``; its herisson is the unit sphere."""
    return CustomProfile(np.ones_like, np.zeros_like, np.zeros_like, "norm")


def cos2_profile() -> CustomProfile:
    """``g = cos(2 theta)``: not an eigenfunction, so ``|x| g`` is not harmonic."""
    return CustomProfile(lambda t: np.cos(2 * t), lambda t: -2 * np.sin(2 * t),
                         lambda t: -4 * np.cos(2 * t), "cos2")


def g_eval(fn: AxisymmetricProfile, theta):
    return fn.g(theta)


def g_prime(fn: AxisymmetricProfile, theta):
    return fn.dg(theta)


def _frame(theta, phi):
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    r_hat = np.stack([st * cp, st * sp, ct], axis=-1)
    t_hat = np.stack([ct * cp, ct * sp, -st], axis=-1)
    return theta, r_hat, t_hat


def sphere_point(theta, phi) -> np.ndarray:
    return _frame(theta, phi)[1]


def gradient_map(fn: AxisymmetricProfile, theta, phi) -> np.ndarray:
    """``grad v`` at the sphere point ``(theta, phi)``; constant along rays."""
    theta, r_hat, t_hat = _frame(theta, phi)
    return fn.g(theta)[..., None] * r_hat + fn.dg(theta)[..., None] * t_hat


def value(fn: AxisymmetricProfile, X) -> np.ndarray:
    """``v(x) = |x| g(theta(x))`` at Cartesian points (last axis 3)."""
    X = np.asarray(X, dtype=float)
    r = np.linalg.norm(X, axis=-1)
    theta = np.arccos(np.clip(X[..., 2] / r, -1.0, 1.0))
    return r * fn.g(theta)


def curvature_radii(fn: AxisymmetricProfile, theta):
    """Closed-form nonradial Hessian eigenvalues ``(r_theta, r_phi)``."""
    theta = np.asarray(theta, dtype=float)
    g, dg, d2g = fn.g(theta), fn.dg(theta), fn.d2g(theta)
    return g + d2g, g + dg * np.cos(theta) / np.sin(theta)


def hessian_trace(fn: AxisymmetricProfile, theta):
    r1, r2 = curvature_radii(fn, theta)
    return r1 + r2


def sphere_eigen_residual(fn: AxisymmetricProfile, theta):
    """``Delta_S g + 2 g`` for the axisymmetric profile."""
    theta = np.asarray(theta, dtype=float)
    lap = fn.d2g(theta) + fn.dg(theta) * np.cos(theta) / np.sin(theta)
    return lap + 2 * fn.g(theta)


# fourth-order stencils used by the Cartesian oracles
_W1 = {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12}
_W2 = {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12}


def _rel_step(X, h):
    """Per-point step ``h |x|``; keeps the stencil error scale-free for homogeneous ``v``."""
    return h * np.linalg.norm(X, axis=-1)[..., None]


def fd_gradient(fn: AxisymmetricProfile, X, h: float = 1e-4) -> np.ndarray:
    """Fourth-order finite-difference gradient with relative step ``h``."""
    X = np.asarray(X, dtype=float)
    hh = _rel_step(X, h)
    out = np.zeros(X.shape)
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        out[..., k] = sum(w * value(fn, X + j * hh * e) for j, w in _W1.items()) / hh[..., 0]
    return out


def fd_hessian(fn: AxisymmetricProfile, X, h: float = 1e-3) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    hh = _rel_step(X, h)
    h2 = hh[..., 0] ** 2
    out = np.zeros(X.shape + (3,))
    eye = np.eye(3)
    for i in range(3):
        out[..., i, i] = sum(w * value(fn, X + j * hh * eye[i]) for j, w in _W2.items()) / h2
        for k in range(i + 1, 3):
            acc = sum(wi * wk * value(fn, X + hh * (a * eye[i] + b * eye[k]))
                      for a, wi in _W1.items() for b, wk in _W1.items())
            out[..., i, k] = out[..., k, i] = acc / h2
    return out


def fd_laplacian(fn: AxisymmetricProfile, X, h: float = 1e-3):
    return np.trace(fd_hessian(fn, X, h), axis1=-2, axis2=-1)


@dataclass(frozen=True)
class ConeDomain:
    """Polar-angle band ``theta_lo < theta < theta_hi`` of the unit sphere."""

    theta_lo: float
    theta_hi: float

    def __post_init__(self):
        if not 0.0 <= self.theta_lo < self.theta_hi <= math.pi:
            raise DomainError(f"bad band ({self.theta_lo}, {self.theta_hi})")

    def interior_grid(self, n: int) -> np.ndarray:
        return np.linspace(self.theta_lo, self.theta_hi, n + 2)[1:-1]

    def boundary_thetas(self) -> list[float]:
        return [t for t in (self.theta_lo, self.theta_hi) if 0.0 < t < math.pi]


@dataclass(frozen=True)
class OnePhaseSolution:
    domain: ConeDomain
    fn: AxisymmetricHarmonic
    c: float
    kind: str
    boundary_value: float = 0.0

    @property
    def v(self) -> AxisymmetricHarmonic:
        """The normalized profile ``c * g``."""
        return self.fn.scaled(self.c)

    def boundary_gradient_norms(self) -> np.ndarray:
        t = np.asarray(self.domain.boundary_thetas())
        v = self.v
        return np.hypot(v.g(t), v.dg(t))

    def table(self, n: int) -> np.ndarray:
        """Rows ``(theta, g, g', |grad v|)`` of the normalized profile, endpoints included."""
        t = np.linspace(self.domain.theta_lo, self.domain.theta_hi, n)
        v = self.v
        g, dg = v.g(t), v.dg(t)
        return np.column_stack([t, g, dg, np.hypot(g, dg)])


def solve_one_phase(kind: str) -> OnePhaseSolution:
    """Explicit axisymmetric solutions of the homogeneous one-phase cone problem.

    ``halfspace``: ``v = x_3`` on the upper half space.
    ``double_cone``: ``v = c |x| Q1(cos theta)`` on the band between the two
    roots of ``Q1``, with ``c`` fixing ``|grad v| = 1`` on the boundary.
    """
    if kind == "halfspace":
        return OnePhaseSolution(ConeDomain(0.0, math.pi / 2), AxisymmetricHarmonic(1.0, 0.0), 1.0, kind)
    if kind == "double_cone":
        x1 = q1_root()
        theta1 = math.acos(x1)
        fn = AxisymmetricHarmonic(0.0, 1.0)
        c = 1.0 / abs(float(fn.dg(theta1)))
        return OnePhaseSolution(ConeDomain(theta1, math.pi - theta1), fn, c, kind)
    raise DomainError(f"unknown one-phase kind {kind!r}")


def solve_pr2_cap(alpha_bc: float) -> OnePhaseSolution:
    """Cap solution of ``v = alpha |x|``, ``|grad v| = 1`` on the cone boundary."""
    if not -1.0 < alpha_bc < 1.0:
        raise DomainError("boundary ratio must lie in (-1, 1)")
    theta0 = math.acos(alpha_bc)
    return OnePhaseSolution(ConeDomain(0.0, theta0), AxisymmetricHarmonic(1.0, 0.0), 1.0,
                            "cap", boundary_value=alpha_bc)


def boundary_angle_spread(sol: OnePhaseSolution, n: int = 64) -> tuple[float, float]:
    """Angle between ``grad v(x)`` and ``x`` along the cone boundary: (mean, spread)."""
    phi = 2 * np.pi * np.arange(n) / n
    angles = []
    for t in sol.domain.boundary_thetas():
        x = sphere_point(t, phi)
        y = gradient_map(sol.v, t, phi)
        cosang = np.sum(x * y, axis=-1) / np.linalg.norm(y, axis=-1)
        angles.append(np.arccos(np.clip(cosang, -1, 1)))
    angles = np.concatenate(angles)
    return float(np.mean(angles)), float(np.ptp(angles))


@dataclass(frozen=True)
class HerissonSample:
    x: np.ndarray
    y: np.ndarray
    N_img: np.ndarray
    radii_sum: float
    hess_trace: float


@dataclass(frozen=True)
class HerissonSurface:
    """Samples of ``grad v`` over a ``(theta, phi)`` grid.

    Arrays have shape ``(n_theta, n_phi, ...)``.  Quantities that need a
    nondegenerate image (normal, curvatures) are NaN where ``regular`` is
    false.  ``sign`` is the global orientation with ``N_img ~ sign * x``.
    """

    fn: AxisymmetricProfile
    theta: np.ndarray
    phi: np.ndarray
    x: np.ndarray
    y: np.ndarray
    N_img: np.ndarray
    kappa: np.ndarray
    H: np.ndarray
    radii_sum: np.ndarray
    hess_trace: np.ndarray
    regular: np.ndarray
    sign: float

    @property
    def n_degenerate(self) -> int:
        return int(np.count_nonzero(~self.regular))

    def samples(self) -> Iterator[HerissonSample]:
        for idx in zip(*np.nonzero(self.regular)):
            yield HerissonSample(self.x[idx], self.y[idx], self.N_img[idx],
                                 float(self.radii_sum[idx]), float(self.hess_trace[idx]))


RANK_TOL = 1e-6


def herisson_surface(fn: AxisymmetricProfile, domain: ConeDomain | None = None,
                     n_theta: int = 64, n_phi: int = 64, thetas=None,
                     h: float = 1e-4) -> HerissonSurface:
    """Sample the herisson of ``fn`` and its finite-difference curvatures.

    Points where the closed-form nonradial Hessian has a singular value below
    ``RANK_TOL`` are flagged and excluded from curvature computations.
    """
    if thetas is None:
        if domain is None:
            raise ValueError("need a domain or explicit thetas")
        thetas = domain.interior_grid(n_theta)
    theta = np.asarray(thetas, dtype=float)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    x = sphere_point(T, P)
    y = gradient_map(fn, T, P)
    r1, r2 = curvature_radii(fn, T)
    regular = np.minimum(np.abs(r1), np.abs(r2)) > RANK_TOL
    trace = r1 + r2

    shape = T.shape
    N_img = np.full(shape + (3,), np.nan)
    kappa = np.full(shape + (2,), np.nan)
    H = np.full(shape, np.nan)
    radii_sum = np.full(shape, np.nan)
    sign = 1.0
    if np.any(regular):
        jet = surface_jet(lambda s, t: gradient_map(fn, s, t), T[regular], P[regular], h)
        rec = curvatures(jet)
        dots = np.sum(rec.N * x[regular], axis=-1)
        sign = 1.0 if dots[0] >= 0 else -1.0
        N_img[regular] = rec.N
        # curvatures are taken against N_img; re-orient them against x
        k1, k2 = sign * rec.kappa1, sign * rec.kappa2
        kappa[regular] = np.stack([k1, k2], axis=-1)
        H[regular] = rec.H
        radii_sum[regular] = -1.0 / k1 - 1.0 / k2
    return HerissonSurface(fn, theta, phi, x, y, N_img, kappa, H, radii_sum, trace, regular, sign)


@dataclass(frozen=True)
class Prop1Report:
    normal_deviation: float
    radii_mismatch: float
    n_regular: int
    n_degenerate: int


@dataclass(frozen=True)
class Prop2Report:
    max_abs_H: float
    n_regular: int
    n_degenerate: int


def _regular_or_raise(surf: HerissonSurface):
    if not np.any(surf.regular):
        raise InsufficientDataError("every sample is rank-degenerate")
    return surf.regular


def verify_prop1(surf: HerissonSurface) -> Prop1Report:
    """Gauss-map inversion and radii-sum identity at regular samples.

    ``radii_mismatch`` is ``|radii_sum - hess_trace|`` relative to
    ``|r_1| + |r_2|``, which stays meaningful when both sides vanish.
    """
    reg = _regular_or_raise(surf)
    dev = np.linalg.norm(surf.N_img[reg] - surf.sign * surf.x[reg], axis=-1)
    k = surf.kappa[reg]
    scale = np.abs(1 / k[:, 0]) + np.abs(1 / k[:, 1])
    mismatch = np.abs(surf.radii_sum[reg] - surf.hess_trace[reg]) / scale
    return Prop1Report(float(dev.max()), float(mismatch.max()), int(reg.sum()), surf.n_degenerate)


def verify_prop2(surf: HerissonSurface) -> Prop2Report:
    reg = _regular_or_raise(surf)
    return Prop2Report(float(np.abs(surf.H[reg]).max()), int(reg.sum()), surf.n_degenerate)


def boundary_normal_angles(sol: OnePhaseSolution, n: int = 64, h: float = 1e-4) -> np.ndarray:
    """Angles between image normals along the cone boundary and the cone axis line."""
    phi = 2 * np.pi * np.arange(n) / n
    out = []
    for t in sol.domain.boundary_thetas():
        jet = surface_jet(lambda s, q: gradient_map(sol.v, s, q), np.full(n, t), phi, h)
        try:
            N = curvatures(jet).N
        except DegeneracyError:
            continue
        out.append(np.arccos(np.clip(np.abs(N[:, 2]), 0.0, 1.0)))
    if not out:
        raise InsufficientDataError("no regular boundary samples")
    return np.concatenate(out)


@dataclass(frozen=True)
class SpectralCheck:
    lam: float
    alpha_bv: float
    beta_bv: float
    pde_residual: float
    boundary_spread: float
    boundary_gradient: float


def _warp(r, kappa):
    q = math.sqrt(kappa)
    return np.sin(q * r) / q


def geodesic_cap_embedding(kappa: float):
    """Geodesic polar chart ``(r, phi)`` of the sphere of curvature ``kappa``."""
    R = 1.0 / math.sqrt(kappa)

    def F(r, phi):
        r, phi = np.broadcast_arrays(np.asarray(r, float), np.asarray(phi, float))
        a = r / R
        return R * np.stack([np.sin(a) * np.cos(phi), np.sin(a) * np.sin(phi), np.cos(a)], axis=-1)
    return F


def laplace_beltrami_polar(f: Callable, r, phi, kappa: float, h: float) -> np.ndarray:
    """Flux-form finite-difference Laplace-Beltrami in geodesic polar coordinates.

    Metric ``dr^2 + J(r)^2 dphi^2`` with ``J = sin(sqrt(kappa) r)/sqrt(kappa)``.
    """
    r = np.asarray(r, float)
    phi = np.asarray(phi, float)
    J = _warp(r, kappa)
    Jp, Jm = _warp(r + h / 2, kappa), _warp(r - h / 2, kappa)
    f0 = f(r, phi)
    radial = (Jp * (f(r + h, phi) - f0) - Jm * (f0 - f(r - h, phi))) / (J * h * h)
    angular = (f(r, phi + h) - 2 * f0 + f(r, phi - h)) / (J * J * h * h)
    return radial + angular


def spectral_disk_check(theta0: float, kappa: float, n: int = 32) -> SpectralCheck:
    """Check the cap solution of the overdetermined eigenvalue problem.

    On the geodesic disk of radius ``theta0 / sqrt(kappa)`` in the sphere of
    curvature ``kappa``, ``v`` is the height function ``cos`` of the polar
    angle.  Returns ``lambda = -2 kappa``, the boundary value, the boundary
    gradient, and finite-difference residuals of the equation and of the
    boundary gradient.
    """
    if not 0.0 < theta0 < math.pi:
        raise DomainError("cap angle must lie in (0, pi)")
    if not kappa > 0:
        raise DomainError("curvature must be positive")
    q = math.sqrt(kappa)
    R = 1.0 / q
    F = geodesic_cap_embedding(kappa)

    def v(r, phi):
        return F(r, phi)[..., 2] / R

    lam = -2.0 * kappa
    radius = theta0 / q
    rr = np.linspace(0.05 * radius, radius, n)
    pp = 2 * np.pi * np.arange(n) / n
    Rg, Pg = np.meshgrid(rr, pp, indexing="ij")
    h = 1e-3 * R
    res = laplace_beltrami_polar(v, Rg, Pg, kappa, h) - lam * v(Rg, Pg)

    hb = 1e-4 * R
    rb = np.full_like(pp, radius)
    dv_r = sum(w * v(rb + j * hb, pp) for j, w in _W1.items()) / hb
    dv_p = sum(w * v(rb, pp + j * hb) for j, w in _W1.items()) / hb
    grad = np.hypot(dv_r, dv_p / _warp(rb, kappa))
    return SpectralCheck(lam, math.cos(theta0), q * math.sin(theta0),
                         float(np.max(np.abs(res))), float(np.ptp(grad)), float(np.mean(grad)))
