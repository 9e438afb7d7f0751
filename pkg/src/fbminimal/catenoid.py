"""The catenoid family and the critical catenoid of the unit ball.

Chart: ``p(s, theta) = (a cosh s cos theta, a cosh s sin theta, a s)`` with
``|s| <= alpha``.  The normal used throughout is the outward one at the neck,
``N = (cos theta, sin theta, -sinh s) / cosh s``; note this is
``p_theta x p_s`` and therefore opposite to the normal that
:func:`fbminimal.numeric.curvatures` assigns to this chart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numeric import LaurentPoly, find_root
from .weierstrass import WeierstrassData

# bracket for the aperture root; s tanh s - 1 changes sign on it
_BRACKET = (1.0, 2.0)


@dataclass(frozen=True)
class CatenoidParams:
    a: float
    alpha: float

    def __post_init__(self):
        if not (self.a > 0 and self.alpha > 0):
            raise DomainError(f"catenoid needs a > 0 and alpha > 0, got {self.a}, {self.alpha}")

    @property
    def boundary_radius(self) -> float:
        return self.a * math.cosh(self.alpha)

    @property
    def boundary_height(self) -> float:
        return self.a * self.alpha


def point(c: CatenoidParams, s, theta) -> np.ndarray:
    s, theta = np.broadcast_arrays(np.asarray(s, float), np.asarray(theta, float))
    return c.a * np.stack([np.cosh(s) * np.cos(theta), np.cosh(s) * np.sin(theta), s], axis=-1)


def normal(c: CatenoidParams, s, theta) -> np.ndarray:
    s, theta = np.broadcast_arrays(np.asarray(s, float), np.asarray(theta, float))
    return np.stack([np.cos(theta), np.sin(theta), -np.sinh(s)], axis=-1) / np.cosh(s)[..., None]


def chart(c: CatenoidParams):
    """``(s, theta) -> point``, for use with :func:`fbminimal.numeric.surface_jet`."""
    return lambda s, t: point(c, s, t)


def gauss_curvature(c: CatenoidParams, s):
    return -1.0 / (c.a**2 * np.cosh(s) ** 4)


def critical_residual(a: float, s0: float) -> tuple[float, float]:
    """``(|p|^2 - 1, p . N)`` at the boundary point ``(s0, 0)``."""
    if not (a > 0 and s0 > 0):
        raise DomainError("critical_residual needs a > 0 and s0 > 0")
    ch, sh = math.cosh(s0), math.sinh(s0)
    return a * a * (ch * ch + s0 * s0) - 1.0, a * ch - a * s0 * sh


def _neck_on_sphere(s0: float) -> float:
    """Neck radius that puts the boundary circle at height ``a s0`` on the unit sphere."""
    return 1.0 / math.hypot(math.cosh(s0), s0)


def solve_critical(tol: float = 1e-13) -> CatenoidParams:
    """The catenoid meeting the unit sphere orthogonally.

    ``a`` is eliminated through ``|p| = 1`` and the orthogonality residual is
    then bracketed in ``s0``.
    """
    alpha = find_root(lambda s: critical_residual(_neck_on_sphere(s), s)[1] / _neck_on_sphere(s),
                      *_BRACKET, tol=tol)
    return CatenoidParams(_neck_on_sphere(alpha), alpha)


def closed_form_critical(alpha: float) -> dict[str, float]:
    """Constants of the critical catenoid expressed through its aperture root."""
    q = math.sqrt(alpha * alpha - 1.0)
    return {
        "alpha": alpha,
        "a": q / alpha**2,
        "boundary_radius": 1.0 / alpha,
        "boundary_height": q / alpha,
        "boundary_K": -(alpha * alpha - 1.0),
        "boundary_kappa": alpha,
    }


def aperture_root(tol: float = 1e-13) -> float:
    """Root of ``x tanh x = 1``."""
    return find_root(lambda x: x * math.tanh(x) - 1.0, *_BRACKET, tol=tol)


def sqrt_tanh_root(tol: float = 1e-13) -> float:
    """Root of the variant ``sqrt(x) tanh x = 1``, kept for comparison only."""
    return find_root(lambda x: math.sqrt(x) * math.tanh(x) - 1.0, *_BRACKET, tol=tol)


def chart_to_annulus(c: CatenoidParams, s, theta):
    """Annulus coordinate of the chart point ``(s, theta)``: ``z = exp(-(s + alpha) + i theta)``."""
    return np.exp(-(np.asarray(s, float) + c.alpha) + 1j * np.asarray(theta, float))


def to_weierstrass(c: CatenoidParams) -> WeierstrassData:
    """Weierstrass data reproducing :func:`point` through :func:`chart_to_annulus`.

    ``mu = -a e^{-alpha} / z^2`` and ``nu = e^{alpha} z`` on the annulus
    ``e^{-2 alpha} < |z| < 1``; the outer circle is ``s = -alpha``.
    """
    e = math.exp(c.alpha)
    mu = LaurentPoly({-2: -c.a / e})
    nu = LaurentPoly({1: e})
    u0 = tuple(point(c, -c.alpha, 0.0))
    return WeierstrassData(mu, nu, math.exp(-2 * c.alpha), u0=u0, z_ref=1.0)


def _axis_angle(N) -> np.ndarray:
    """Angle between ``N`` and the z-axis taken as an unoriented line."""
    return np.arccos(np.clip(np.abs(np.asarray(N)[..., 2]), 0.0, 1.0))


def boundary_normal_angles(c: CatenoidParams, n: int = 64) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    N = np.concatenate([normal(c, c.alpha, theta), normal(c, -c.alpha, theta)])
    return _axis_angle(N)


def normal_cone_aperture(c: CatenoidParams) -> float:
    """Full opening angle of the cone swept by boundary normals."""
    return float(2 * _axis_angle(normal(c, c.alpha, 0.0)))
