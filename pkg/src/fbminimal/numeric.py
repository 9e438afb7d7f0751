"""Numerical substrate: Laurent polynomials, root bracketing, path quadrature
and finite-difference surface jets with their curvatures.

Everything here is a pure function of its arguments.  Surface maps handed to
:func:`surface_jet` must broadcast over numpy arrays of parameters and return
an array whose last axis has length 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from .errors import BracketError, DegeneracyError, NumericError, PoleError


class LaurentPoly:
    """Finite Laurent series ``sum c_n z**n`` with complex coefficients.

    Coefficients are stored in a dict keyed by integer exponent; exact zeros
    are never stored, so ``LaurentPoly({})`` is the zero polynomial.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        clean = {}
        for n, c in (coeffs or {}).items():
            if int(n) != n:
                raise ValueError(f"non-integer exponent {n!r}")
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise NumericError(f"non-finite coefficient at exponent {n}")
            if c != 0:
                clean[int(n)] = c
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, n: int, c: complex = 1.0) -> "LaurentPoly":
        return cls({n: c})

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def min_exponent(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    def max_exponent(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    def residue(self) -> complex:
        """Coefficient of ``1/z``."""
        return self._coeffs.get(-1, 0j)

    def __call__(self, z):
        return laurent_eval(self, z)

    def derivative(self) -> "LaurentPoly":
        return laurent_derivative(self)

    def scale_argument(self, factor: complex) -> "LaurentPoly":
        """The polynomial ``z -> p(factor * z)``."""
        factor = complex(factor)
        if factor == 0:
            raise PoleError("argument scaling by zero")
        return LaurentPoly({n: c * factor**n for n, c in self._coeffs.items()})

    def invert_argument(self, lam: complex) -> "LaurentPoly":
        """The polynomial ``z -> p(lam / z)``."""
        lam = complex(lam)
        if lam == 0:
            raise PoleError("inversion through zero")
        return LaurentPoly({-n: c * lam**n for n, c in self._coeffs.items()})

    def roots(self) -> np.ndarray:
        """Nonzero roots, found from the polynomial ``z**(-min_exp) * p``."""
        if len(self._coeffs) < 2:
            return np.empty(0, dtype=complex)
        lo, hi = self.min_exponent(), self.max_exponent()
        poly = [self._coeffs.get(n, 0j) for n in range(hi, lo - 1, -1)]
        return np.roots(poly)

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self._coeffs)
        for n, c in other._coeffs.items():
            out[n] = out.get(n, 0j) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({n: -c for n, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: dict[int, complex] = {}
        for n, c in self._coeffs.items():
            for m, d in other._coeffs.items():
                out[n + m] = out.get(n + m, 0j) + c * d
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0 or int(k) != k:
            raise ValueError("only non-negative integer powers")
        out = LaurentPoly({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        return f"LaurentPoly({self._coeffs!r})"


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly({0: x})


def laurent_eval(p: LaurentPoly, z):
    """Evaluate ``p`` at a complex scalar or array ``z``."""
    coeffs = p._coeffs
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if coeffs and min(coeffs) < 0 and np.any(z == 0):
        raise PoleError("Laurent polynomial with negative exponents evaluated at z=0")
    out = np.zeros(z.shape, dtype=complex)
    for n, c in coeffs.items():
        out = out + c * z**n
    return complex(out) if scalar else out


def laurent_derivative(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({n - 1: n * c for n, c in p._coeffs.items() if n != 0})


def find_root(f: Callable[[float], float], lo: float, hi: float,
              tol: float = 1e-13, newton_steps: int = 3) -> float:
    """Bisection down to a bracket of width ``tol``, then Newton polish.

    Newton steps use a central-difference derivative and are only accepted
    while they stay inside the final bracket and do not increase ``|f|``, so
    the returned value always lies in a bracket of width ``<= tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = float(lo), float(hi)
    flo, fhi = _checked(f, lo), _checked(f, hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = _checked(f, mid)
        if fmid == 0:
            return mid
        if flo * fmid < 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    x = lo if abs(flo) <= abs(fhi) else hi
    fx = flo if x == lo else fhi
    for _ in range(newton_steps):
        if fx == 0:
            break
        d = max(abs(x), 1.0) * 1e-7
        slope = (_checked(f, x + d) - _checked(f, x - d)) / (2 * d)
        if slope == 0:
            break
        xn = x - fx / slope
        if not lo <= xn <= hi:
            break
        fn = _checked(f, xn)
        if abs(fn) > abs(fx):
            break
        x, fx = xn, fn
    return x


def _checked(f, x):
    y = float(f(x))
    if not math.isfinite(y):
        raise NumericError(f"non-finite function value {y} at x={x}")
    return y


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    if n < 2:
        raise ValueError("need at least 2 quadrature nodes")
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def integrate_path(f: Callable, path, n_per_segment: int = 16,
                   max_length: float | None = None):
    """Composite Gauss-Legendre integral of ``f(z) dz`` along a polyline.

    ``f`` receives a 1-d complex array of nodes and returns either an array of
    the same length (scalar integrand) or shape ``(len, m)`` (vector
    integrand).  Segments longer than ``max_length`` are split evenly.
    """
    pts = np.asarray(path, dtype=complex).ravel()
    if pts.size < 2:
        raise ValueError("path needs at least two vertices")
    x, w = gauss_legendre(int(n_per_segment))
    total = None
    for a, b in zip(pts[:-1], pts[1:]):
        pieces = 1
        if max_length is not None and abs(b - a) > max_length:
            pieces = int(math.ceil(abs(b - a) / max_length))
        edges = a + (b - a) * np.linspace(0.0, 1.0, pieces + 1)
        for za, zb in zip(edges[:-1], edges[1:]):
            half = 0.5 * (zb - za)
            nodes = 0.5 * (za + zb) + half * x
            vals = np.asarray(f(nodes), dtype=complex)
            if not np.all(np.isfinite(vals)):
                bad = nodes[~np.isfinite(vals).reshape(len(nodes), -1).all(axis=1)]
                raise NumericError(f"integrand not finite on path near z={bad[0]}")
            part = half * np.tensordot(w, vals, axes=(0, 0))
            total = part if total is None else total + part
    return total


@dataclass(frozen=True)
class SurfaceJet:
    """Point and first/second partial derivatives of a surface chart."""

    p: np.ndarray
    p_s: np.ndarray
    p_t: np.ndarray
    p_ss: np.ndarray
    p_st: np.ndarray
    p_tt: np.ndarray
    h: float


@dataclass(frozen=True)
class CurvatureRecord:
    K: np.ndarray | float
    H: np.ndarray | float
    kappa1: np.ndarray | float
    kappa2: np.ndarray | float
    N: np.ndarray


# fourth-order central weights on offsets -2..2
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFF = np.arange(-2, 3, dtype=float)


def surface_jet(F: Callable, s, t, h: float = 1e-4) -> SurfaceJet:
    """Finite-difference jet of ``F`` at ``(s, t)`` on the 5x5 centred stencil.

    ``s`` and ``t`` may be scalars or broadcastable arrays; the stencil is
    added on two trailing axes so ``F`` is called once.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    s, t = np.broadcast_arrays(s, t)
    S = s[..., None, None] + h * _OFF[:, None]
    T = t[..., None, None] + h * _OFF[None, :]
    S, T = np.broadcast_arrays(S, T)
    vals = np.asarray(F(S, T), dtype=float)
    if vals.shape != S.shape + (3,):
        raise ValueError(f"surface map returned shape {vals.shape}, expected {S.shape + (3,)}")
    if not np.all(np.isfinite(vals)):
        raise NumericError("surface map produced non-finite values on the stencil")
    row = vals[..., :, 2, :]   # varying s, t fixed
    col = vals[..., 2, :, :]   # varying t, s fixed
    p = vals[..., 2, 2, :]
    p_s = np.einsum("i,...ik->...k", _D1, row) / h
    p_t = np.einsum("j,...jk->...k", _D1, col) / h
    p_ss = np.einsum("i,...ik->...k", _D2, row) / h**2
    p_tt = np.einsum("j,...jk->...k", _D2, col) / h**2
    p_st = np.einsum("i,j,...ijk->...k", _D1, _D1, vals) / h**2
    return SurfaceJet(p, p_s, p_t, p_ss, p_st, p_tt, float(h))


def curvatures(jet: SurfaceJet, eps: float = 1e-14) -> CurvatureRecord:
    """Gaussian, mean and principal curvatures from a jet.

    The normal is ``p_s x p_t`` normalized and the second fundamental form is
    taken against it, so a sphere charted with inward-pointing ``p_s x p_t``
    has ``H = +1/R``.  ``kappa1 >= kappa2``.
    """
    E = _dot(jet.p_s, jet.p_s)
    F = _dot(jet.p_s, jet.p_t)
    G = _dot(jet.p_t, jet.p_t)
    det = E * G - F * F
    if np.any(~np.isfinite(det)) or np.any(det <= eps * np.maximum(E * G, np.finfo(float).tiny)):
        raise DegeneracyError("degenerate first fundamental form (EG - F^2 ~ 0)")
    n = np.cross(jet.p_s, jet.p_t)
    N = n / np.linalg.norm(n, axis=-1, keepdims=True)
    L = _dot(jet.p_ss, N)
    M = _dot(jet.p_st, N)
    Nn = _dot(jet.p_tt, N)
    # second form in the orthonormal frame e1 = p_s/|p_s|, e2 = its complement;
    # same K = (LN-M^2)/(EG-F^2) and H, but the discriminant is a sum of squares
    p = np.sqrt(E)
    r = np.sqrt(det) / p
    b00, b01, b11 = 1.0 / p, -F / (E * r), 1.0 / r
    a = b00 * b00 * L
    b = b00 * (b01 * L + b11 * M)
    c = b01 * b01 * L + 2 * b01 * b11 * M + b11 * b11 * Nn
    H = 0.5 * (a + c)
    K = a * c - b * b
    disc = np.hypot(0.5 * (a - c), b)
    k1, k2 = H + disc, H - disc
    if np.ndim(K) == 0:
        K, H, k1, k2 = float(K), float(H), float(k1), float(k2)
    return CurvatureRecord(K, H, k1, k2, N)


def _dot(a, b):
    return np.einsum("...k,...k->...", a, b)


def hausdorff_distance(A, B) -> float:
    """Symmetric Hausdorff distance between two point clouds (last axis = coordinates)."""
    from scipy.spatial.distance import directed_hausdorff

    A = np.asarray(A, dtype=float).reshape(-1, np.shape(A)[-1])
    B = np.asarray(B, dtype=float).reshape(-1, np.shape(B)[-1])
    return float(max(directed_hausdorff(A, B)[0], directed_hausdorff(B, A)[0]))
