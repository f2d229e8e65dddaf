"""Degeneracy roots and the one-parameter family of maximally entangled states.

For a permutation-symmetric state ``g|000> + t(|011>+|101>+|110>) + e^{i gamma} h|111>``
the closest product state is degenerate exactly when ``P(g) = 0`` with

    P(g) = (g^2 - t^2)^2 (g^2 - 4t^2) - g h^2 (g^3 - 3 g t^2 + 2 t^3 cos 2gamma)

and ``h^2 = 1 - g^2 - 3t^2``. Minimizing the largest root ``g1(t)`` over ``t``
at fixed ``gamma`` gives the most entangled state with that gauge phase.
"""
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq, minimize_scalar

from . import states as st
from .errors import NoValidRoot

IMAG_TOL = 1e-8
H2_TOL = 1e-12
POLISH_TOL = 1e-12
GUARD_BAND = 1e-12
T_MAX = float(1 / np.sqrt(3))
G_GHZ = float(1 / np.sqrt(2))


# ---------------------------------------------------------------- polynomial

def degeneracy_coeffs(gamma, t):
    """Ascending coefficients of ``P(g)`` with ``h^2`` eliminated.

    Expanded: ``2g^6 - (1+6T)g^4 + m g^3 + 3T g^2 - (1-3T) m g - 4T^3`` with
    ``T = t^2`` and ``m = 2 t^3 cos 2gamma``.
    """
    T = t * t
    m = 2 * t**3 * np.cos(2 * gamma)
    return np.array([-4 * T**3, -(1 - 3 * T) * m, 3 * T, m, -(1 + 6 * T), 0.0, 2.0])


@dataclass(frozen=True)
class DegeneracyPoly:
    gamma: float
    t: float
    coeffs: np.ndarray

    @classmethod
    def build(cls, gamma, t):
        return cls(float(gamma), float(t), degeneracy_coeffs(gamma, t))

    def __call__(self, g):
        return npoly.polyval(g, self.coeffs)

    def scaled_residual(self, g):
        """``|P(g)|`` divided by the magnitude of its largest term."""
        powers = np.abs(g) ** np.arange(len(self.coeffs))
        scale = max(np.abs(self.coeffs) @ powers, 1e-300)
        return float(abs(self(g)) / scale)

    def roots(self):
        """All roots, real ones polished by Newton steps."""
        return _polished(self.coeffs, npoly.polyroots(self.coeffs))


def degeneracy_residual(gamma, g, t, h):
    """Degeneracy condition evaluated with an explicit ``h``."""
    return ((g * g - t * t) ** 2 * (g * g - 4 * t * t)
            - g * h * h * (g**3 - 3 * g * t * t + 2 * t**3 * np.cos(2 * gamma)))


def _horner(c, x):
    """Value and derivative of the ascending polynomial ``c`` at ``x``."""
    p, dp = 0.0, 0.0
    for a in reversed(c):
        dp = dp * x + p
        p = p * x + a
    return p, dp


def _newton(c, x, steps=8):
    fx, dx = _horner(c, x)
    for _ in range(steps):
        if dx == 0 or fx == 0:
            break
        y = x - fx / dx
        fy, dy = _horner(c, y)
        if abs(fy) >= abs(fx):
            break
        x, fx, dx = y, fy, dy
    return x


def _polished(coeffs, raw):
    c = [float(a) for a in coeffs]
    out = [_newton(c, float(r.real)) for r in raw if abs(r.imag) <= IMAG_TOL]
    return np.sort(np.array(out))[::-1]


def _real_roots(gamma, t):
    """Real roots of ``P`` in descending order.

    At ``gamma = 0`` and ``pi/2`` the polynomial factors exactly:
    ``(g - t)^2 (g + 2t)(2g^3 - g - 2t^3)`` and
    ``(g + t)^2 (g - 2t)(2g^3 - g + 2t^3)`` up to sign, which keeps the double
    roots and the touching point of the two branches exact.
    """
    if gamma == 0.0 or gamma == np.pi / 2:
        s = 1.0 if gamma == 0.0 else -1.0
        cubic = [-2 * s * t**3, -1.0, 0.0, 2.0]
        rest = _polished(cubic, npoly.polyroots(cubic))
        lin = [s * t, s * t, -2 * s * t]
        return np.sort(np.concatenate([lin, rest]))[::-1]
    return DegeneracyPoly.build(gamma, t).roots()


def _valid(g, t):
    return 0 < g <= 1 + 1e-12 and 1 - g * g - 3 * t * t >= -H2_TOL


class RootBranches(NamedTuple):
    g1: Optional[float]
    g2: Optional[float]
    all_valid_roots: list


def degeneracy_roots(gamma, t):
    """Largest and second-largest roots of the degeneracy polynomial.

    ``g1`` is the largest real root and ``g2`` the second largest; a branch is
    ``None`` when that root falls outside ``0 < g <= 1``, ``h^2 >= 0``.
    Following the largest root (rather than the largest *valid* one) keeps the
    branches continuous; past ``t = 1/sqrt(7)`` the largest root leaves the
    physical region and ``g1`` ends there.

    Raises
    ------
    NoValidRoot
        If no real root is physical.
    """
    if not -1e-15 <= gamma <= np.pi / 2 + 1e-15:
        raise ValueError("gamma must lie in [0, pi/2]")
    if not 0 <= t <= T_MAX + 1e-15:
        raise ValueError("t must lie in [0, 1/sqrt(3)]")
    roots = _real_roots(gamma, t)
    valid = [float(min(r, 1.0)) for r in roots if _valid(r, t)]
    if not valid:
        raise NoValidRoot(f"no physical root at gamma={gamma:.6g}, t={t:.6g}")
    g1 = float(roots[0]) if _valid(roots[0], t) else None
    g2 = float(roots[1]) if len(roots) > 1 and _valid(roots[1], t) else None
    return RootBranches(g1, g2, valid)


def g1_branch(gamma, t):
    """``g1(t)``, or NaN outside its domain."""
    r = _real_roots(gamma, t)
    return float(r[0]) if _valid(r[0], t) else np.nan


def g2_branch(gamma, t):
    r = _real_roots(gamma, t)
    return float(r[1]) if len(r) > 1 and _valid(r[1], t) else np.nan


def root_curves(gamma, ts):
    """``g1`` and ``g2`` on a grid of ``t`` values (NaN where absent)."""
    ts = np.asarray(ts, dtype=float)
    g1 = np.full(ts.shape, np.nan)
    g2 = np.full(ts.shape, np.nan)
    for i, t in enumerate(ts):
        r = _real_roots(gamma, t)
        if _valid(r[0], t):
            g1[i] = r[0]
        if len(r) > 1 and _valid(r[1], t):
            g2[i] = r[1]
    return g1, g2


@lru_cache(maxsize=4096)
def g1_domain_end(gamma, iters=80):
    """Largest ``t`` at which ``g1`` is still physical, by bisection on feasibility."""
    lo, hi = 0.0, float(T_MAX)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.isnan(g1_branch(gamma, mid)):
            hi = mid
        else:
            lo = mid
    return lo


def special_case_check(gamma, g, t, h, tol=1e-10):
    """Reduced degeneracy conditions at ``gamma = 0`` and ``gamma = pi/2``."""
    if gamma == 0:
        return bool(abs(g * h * h - (g + t) ** 2 * (g - 2 * t)) <= tol)
    if gamma == np.pi / 2:
        return bool(abs(g * h * h - (g - t) ** 2 * (g + 2 * t)) <= tol or abs(g - 2 * t) <= tol)
    raise ValueError("special_case_check applies only at gamma = 0 or pi/2")


# ---------------------------------------------------------------- family

@dataclass(frozen=True)
class FamilyPoint:
    gamma: float
    t_star: float
    g: float
    h: float
    state: np.ndarray
    measures: object = None

    @property
    def gsd(self):
        return st.SymmetricGSD(self.g, self.t_star, self.h, self.gamma)


def _minimize_g1(gamma, tol, n_coarse=41):
    """Coarse scan, then golden-section search inside the best bracket.

    When the scan minimum sits on an end of the grid the end cell is rescanned
    until the minimum is interior or the cell is narrower than ``tol``.
    """
    f = lambda t: g1_branch(gamma, t)  # noqa: E731
    lo, hi = 0.0, g1_domain_end(gamma)
    while True:
        ts = np.linspace(lo, hi, n_coarse)
        vals = np.array([f(t) for t in ts])
        k = int(np.nanargmin(vals))
        if 0 < k < n_coarse - 1:
            break
        if hi - lo < tol:
            return float(ts[k]), float(vals[k])
        lo, hi = (ts[0], ts[1]) if k == 0 else (ts[-2], ts[-1])
    a, b, c = ts[k - 1], ts[k], ts[k + 1]
    res = minimize_scalar(f, bracket=(a, b, c), method="golden", options={"xtol": tol / (2 * b)})
    if res.x < a or res.x > c or not res.fun <= vals[k] + 1e-15:
        # bracket misbehaved: fall back to a dense scan of the cell
        fine = np.linspace(a, c, 20001)
        fv = np.array([f(t) for t in fine])
        j = int(np.nanargmin(fv))
        return float(fine[j]), float(fv[j])
    return float(res.x), float(res.fun)


def family_parameters(gamma, tol=1e-10):
    """``(t, g, h)`` of the most entangled symmetric state with gauge phase ``gamma``."""
    if not -1e-15 <= gamma <= np.pi / 2 + 1e-15:
        raise ValueError("gamma must lie in [0, pi/2]")
    gamma = float(min(max(gamma, 0.0), np.pi / 2))
    ghz = (0.0, G_GHZ, G_GHZ)
    if gamma <= np.pi / 4 - GUARD_BAND:
        return ghz
    t, g = _minimize_g1(gamma, tol)
    h = float(np.sqrt(max(1 - g * g - 3 * t * t, 0.0)))
    if gamma < np.pi / 4 + GUARD_BAND and G_GHZ <= g:
        return ghz
    return t, g, h


def family_state(gamma, t, g, h):
    return st.from_symmetric_gsd(st.SymmetricGSD(g, t, h, gamma))


def max_entangled_state(gamma, tol=1e-10, with_measures=True):
    """The family member at gauge phase ``gamma`` as a :class:`FamilyPoint`.

    For ``gamma <= pi/4`` this is the GHZ point ``t = 0``, ``g = h = 1/sqrt(2)``;
    above it ``g1(t)`` is minimized by golden-section search to ``|dt| < tol``.
    """
    from .measures import measure_report

    t, g, h = family_parameters(gamma, tol)
    state = family_state(gamma, t, g, h)
    rep = measure_report(state, g=g) if with_measures else None
    return FamilyPoint(float(gamma), t, g, h, state, rep)


def family_scan(gamma_grid, tol=1e-10, with_measures=True):
    return [max_entangled_state(gm, tol, with_measures) for gm in gamma_grid]


class Separation(NamedTuple):
    min_g1: float
    max_g2: float
    t_min_g1: float
    t_max_g2: float


def _maximize_g2(gamma, n_coarse=2001):
    ts = np.linspace(0.0, T_MAX, n_coarse)
    vals = np.array([g2_branch(gamma, t) for t in ts])
    if np.all(np.isnan(vals)):
        return np.nan, np.nan
    k = int(np.nanargmax(vals))
    if 0 < k < n_coarse - 1 and not np.isnan(vals[k - 1]) and not np.isnan(vals[k + 1]):
        res = minimize_scalar(lambda t: -g2_branch(gamma, t), bracket=(ts[k - 1], ts[k], ts[k + 1]),
                              method="golden", options={"xtol": 1e-12})
        if ts[k - 1] <= res.x <= ts[k + 1] and -res.fun >= vals[k]:
            return float(res.x), float(-res.fun)
    return float(ts[k]), float(vals[k])


def separation_check(gamma, tol=1e-10):
    """Compare ``min_t g1(t)`` with ``max_t g2(t)`` at fixed ``gamma``.

    The family is only the global answer if the minimum of the upper branch
    stays above the maximum of the lower one; a warning is issued when that
    fails for ``gamma < pi/2``.
    """
    t1, g1 = _minimize_g1(gamma, tol)
    t2, g2 = _maximize_g2(gamma)
    if gamma < np.pi / 2 and not g1 > g2:
        warnings.warn(f"min g1 = {g1:.12g} does not exceed max g2 = {g2:.12g} at gamma = {gamma:.12g}",
                      RuntimeWarning, stacklevel=2)
    return Separation(g1, g2, t1, t2)


# ---------------------------------------------------------------- near the W point

def asymptotic_g_near_w(tau):
    """``2/3 + sqrt(3 tau / 8)``, the leading correction to ``g`` for small three-tangle."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    return 2 / 3 + np.sqrt(3 * tau / 8)


def _g_on_w_branch(t):
    cubic = [2 * t**3, -1.0, 0.0, 2.0]
    return float(_polished(cubic, npoly.polyroots(cubic))[0])


def exact_g_near_w(tau):
    """Solve the ``gamma = pi/2`` degeneracy branch for a prescribed three-tangle.

    Along ``gh^2 = (g - t)^2 (g + 2t)`` with normalization, the three-tangle is
    ``4 g (g + t)^2 (g - 2t)``; this returns the ``g`` on the ``g > 2t`` side of
    the W point where it equals ``tau``.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    if tau == 0:
        return 2 / 3

    def f(t):
        g = _g_on_w_branch(t)
        return 4 * g * (g + t) ** 2 * (g - 2 * t) - tau

    t = brentq(f, 0.2, 1 / 3, xtol=1e-16, maxiter=200)
    return _g_on_w_branch(t)
