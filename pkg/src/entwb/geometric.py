"""Closest product states and the nonlinear eigenvalue problem.

A product state ``|i1 i2 i3>`` is stationary for ``|psi>`` when contracting any
two of its factors against the state returns the third factor scaled by a
common eigenvalue ``mu``. The largest eigenvalue is the maximal overlap ``g``.
This module finds it numerically (alternating maximization with random
restarts), builds the canonical generalized Schmidt form from it, and lists
the closed-form stationary points of permutation-symmetric states at gauge
phases 0 and pi/2. The Bloch-vector formulation of the same problem, a
Lagrange system on the unit sphere, is solved through its secular equation.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import states as st
from .errors import (
    ComplexRoot,
    DegenerateClosest,
    IndefiniteAtW,
    InvalidAngle,
    NoConvergence,
    NotUnit,
)

DEFAULT_RESTARTS = 50
DEFAULT_TOL = 1e-13
DEFAULT_MAX_ITER = 10_000
# Winner is refined until every stationarity equation holds to this level.
POLISH_RESIDUAL = 1e-13
DEGENERACY_GAP = 1e-10
DISTINCT_FIDELITY = 1 - 1e-6
PRESENT_AMPLITUDE = 1e-9

SYMMETRIES = ("fully-symmetric", "AB-symmetric", "AC-symmetric", "BC-symmetric", "none")
RELEVANCE = ("standard", "relevant", "irrelevant")


@dataclass(frozen=True)
class StationaryPoint:
    p: np.ndarray
    mu: float
    symmetry: str = "none"
    relevance: str = "relevant"
    label: str = ""

    def residual(self, state):
        return stationarity_residual(state, self.p)[1]


@dataclass(frozen=True)
class BlochCorrelation:
    r: np.ndarray
    G: np.ndarray


# ---------------------------------------------------------------- residuals

def _contractions(T, p):
    q1, q2, q3 = (q.conj() for q in p)
    return (
        np.einsum("abc,b,c->a", T, q2, q3),
        np.einsum("abc,a,c->b", T, q1, q3),
        np.einsum("abc,a,b->c", T, q1, q2),
    )


def stationarity_residual(state, p):
    """Return ``(mu, residual)`` for a candidate stationary product state.

    ``mu = <p|psi>`` is complex in general; rephasing one factor makes it real
    and non-negative without changing the residual, which is the largest of
    ``|| <i_a i_b|psi> - mu |i_c> ||`` over the three pairs.
    """
    T = st.tensor(state)
    mu = st.overlap(state, p)
    res = max(np.linalg.norm(v - mu * q) for v, q in zip(_contractions(T, p), p))
    return mu, float(res)


# ---------------------------------------------------------------- alternating solver

def _random_factors(rng, n):
    z = rng.uniform(-1.0, 1.0, size=n)
    phi = rng.uniform(0.0, 2 * np.pi, size=n)
    half = np.arccos(z) / 2
    return np.stack([np.cos(half), np.exp(1j * phi) * np.sin(half)], axis=1).astype(complex)


def _unit_rows(v, fallback):
    nrm = np.linalg.norm(v, axis=1)
    bad = nrm < 1e-300
    nrm[bad] = 1.0
    out = v / nrm[:, None]
    out[bad] = fallback[bad]
    return out, nrm


class _Sweeper:
    """Batched alternating updates over a set of product states."""

    def __init__(self, state):
        T = st.tensor(state)
        self.m3 = T.reshape(4, 2)
        self.m2 = T.transpose(0, 2, 1).reshape(4, 2)
        self.m1 = T.transpose(1, 2, 0).reshape(4, 2)

    @staticmethod
    def _pair(a, b):
        return (a.conj()[:, :, None] * b.conj()[:, None, :]).reshape(len(a), 4)

    def sweep(self, q1, q2, q3):
        q3, _ = _unit_rows(self._pair(q1, q2) @ self.m3, q3)
        q2, _ = _unit_rows(self._pair(q1, q3) @ self.m2, q2)
        q1, ov = _unit_rows(self._pair(q2, q3) @ self.m1, q1)
        return q1, q2, q3, ov


def alternating_maximization(state, p0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Run the alternating updates from a single start.

    Each factor in turn is replaced by the normalized contraction of the state
    with the other two, which is the optimal choice for that factor, so the
    overlap never decreases. Returns the final product state and the overlap
    after every sweep.
    """
    sw = _Sweeper(state)
    q1, q2, q3 = (np.asarray(q, dtype=complex)[None, :] for q in p0)
    history = [abs(st.overlap(state, np.array(p0, dtype=complex)))]
    for _ in range(max_iter):
        q1, q2, q3, ov = sw.sweep(q1, q2, q3)
        history.append(float(ov[0]))
        if abs(history[-1] - history[-2]) < tol:
            break
    return np.array([q1[0], q2[0], q3[0]]), np.array(history)


def _search(state, restarts, tol, max_iter, seed):
    """All restarts of the alternating solver; returns products, overlaps, converged mask."""
    rng = np.random.default_rng(seed)
    q1, q2, q3 = (_random_factors(rng, restarts) for _ in range(3))
    sw = _Sweeper(state)
    ov = np.zeros(restarts)
    done = np.zeros(restarts, dtype=bool)
    active = np.arange(restarts)
    for _ in range(max_iter):
        a1, a2, a3, new = sw.sweep(q1[active], q2[active], q3[active])
        q1[active], q2[active], q3[active] = a1, a2, a3
        conv = np.abs(new - ov[active]) < tol
        ov[active] = new
        done[active[conv]] = True
        active = active[~conv]
        if active.size == 0:
            break
    return np.stack([q1, q2, q3], axis=1), ov, done


def _polish(state, p, max_iter=DEFAULT_MAX_ITER):
    sw = _Sweeper(state)
    q1, q2, q3 = (q[None, :] for q in p)
    for _ in range(max_iter):
        if stationarity_residual(state, np.array([q1[0], q2[0], q3[0]]))[1] < POLISH_RESIDUAL:
            break
        q1, q2, q3, _ = sw.sweep(q1, q2, q3)
    return np.array([q1[0], q2[0], q3[0]])


def closest_product_state(state, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL,
                          max_iter=DEFAULT_MAX_ITER, seed=0):
    """Product state with the largest overlap modulus, and that modulus ``g``.

    Parameters
    ----------
    state : array_like
        Normalized 8-amplitude state.
    restarts : int
        Number of independent random starts on the Bloch spheres.
    tol : float
        A restart stops once a sweep changes its overlap by less than ``tol``.
    max_iter : int
        Sweep cap per restart.
    seed : int
        Seed of the restart generator; results are deterministic given it.

    Raises
    ------
    NoConvergence
        If no restart met ``tol`` within ``max_iter`` sweeps.
    """
    p, g = _best(state, restarts, tol, max_iter, seed)[:2]
    return p, g


def _best(state, restarts, tol, max_iter, seed):
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    state = st.as_state(state, tol=1e-10)
    prods, ov, done = _search(state, restarts, tol, max_iter, seed)
    if not done.any():
        raise NoConvergence(f"no restart converged to {tol:g} within {max_iter} sweeps")
    prods, ov = prods[done], ov[done]
    k = int(np.argmax(ov))
    p = _polish(state, prods[k], max_iter)
    return p, abs(st.overlap(state, p)), prods, ov


# ---------------------------------------------------------------- canonical form

def _maximizer_clusters(prods, ov, g):
    """Group near-maximal restarts into inequivalent product states."""
    reps = []
    for k in np.flatnonzero(ov >= g - DEGENERACY_GAP):
        if all(st.product_fidelity(prods[k], r) < DISTINCT_FIDELITY for r in reps):
            reps.append(prods[k])
    return reps


def _bloch_key(p):
    return tuple(np.round(np.concatenate([st.bloch_vector(q) for q in p]), 6))


def _phase_fix(a):
    """Local phases that make the canonical amplitudes real except on ``|111>``.

    Returns ``(D, x, gamma)``: a global phase, the relative phases of the three
    ``|1>`` basis vectors, and the leftover gauge phase.
    """
    ang = np.angle(a) - np.angle(a[0])
    present = [b for b in (3, 5, 6, 7) if abs(a[b]) > PRESENT_AMPLITUDE]
    if len(present) == 4:
        gamma = st.wrap_gamma(ang[7] - (ang[3] + ang[5] + ang[6]) / 2)
        X = gamma - ang[7]
        x = np.array([X + ang[3], X + ang[5], X + ang[6]])
    else:
        # A missing amplitude frees one phase, which absorbs the gauge phase.
        gamma = 0.0
        rows = {3: (0, 1, 1), 5: (1, 0, 1), 6: (1, 1, 0), 7: (1, 1, 1)}
        if present:
            A = np.array([rows[b] for b in present], dtype=float)
            x = np.linalg.lstsq(A, -ang[present], rcond=None)[0]
        else:
            x = np.zeros(3)
    return -np.angle(a[0]), x, gamma


def canonical_from_product(state, p, exceptional=False):
    """Canonical form using ``p`` as the closest product state."""
    W = [np.array([q.conj(), st.orthogonal(q).conj()]) for q in p]
    a = st.apply_local_unitary(state, *W)
    D, x, gamma = _phase_fix(a)
    U = [np.diag([np.exp(1j * D), np.exp(1j * (D + x[0]))]) @ W[0],
         np.diag([1.0, np.exp(1j * x[1])]) @ W[1],
         np.diag([1.0, np.exp(1j * x[2])]) @ W[2]]
    c = st.apply_local_unitary(state, *U)
    h = abs(c[7])
    if h > PRESENT_AMPLITUDE:
        gamma = float(np.angle(c[7]))
    return st.CanonicalForm(
        g=float(c[0].real), t1=float(abs(c[3])), t2=float(abs(c[5])), t3=float(abs(c[6])),
        h=float(h), gamma=float(gamma), local_u=tuple(U), exceptional=exceptional,
    )


def canonicalize(state, restarts=DEFAULT_RESTARTS, seed=0, on_degenerate="pick",
                 tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Generalized Schmidt form of ``state``.

    With several inequivalent closest product states (GHZ-like double
    degeneracy, or the W-like continuum) ``on_degenerate="pick"`` takes the one
    whose Bloch vectors are lexicographically smallest, and
    ``on_degenerate="raise"`` raises :class:`DegenerateClosest`. More than two
    distinct maximizers mark the result as ``exceptional``.
    """
    if on_degenerate not in ("pick", "raise"):
        raise ValueError("on_degenerate must be 'pick' or 'raise'")
    state = st.as_state(state, tol=1e-10)
    _, _, prods, ov = _best(state, restarts, tol, max_iter, seed)
    reps = _maximizer_clusters(prods, ov, ov.max())
    if len(reps) > 1 and on_degenerate == "raise":
        raise DegenerateClosest(f"{len(reps)} inequivalent closest product states", reps)
    p = _polish(state, min(reps, key=_bloch_key), max_iter)
    return canonical_from_product(state, p, exceptional=len(reps) > 2)


# ---------------------------------------------------------------- closed-form catalogs

def _require_gamma(s, gamma):
    if abs(s.gamma - gamma) > 1e-12:
        raise ValueError(f"expected gamma = {gamma}, got {s.gamma}")


def _point(state, p, symmetry, relevance, label):
    """Rephase the last factor so that ``<p|psi>`` is real and non-negative."""
    p = np.array(p, dtype=complex)
    mu = st.overlap(state, p)
    if abs(mu) > 0:
        p[2] = p[2] * mu / abs(mu)
    return StationaryPoint(p=p, mu=float(abs(mu)), symmetry=symmetry, relevance=relevance, label=label)


def _symmetric_point(state, q, relevance, label):
    """``|qqq>`` with ``q`` rephased so that ``<qqq|psi> >= 0`` (keeps the factors equal)."""
    q = np.asarray(q, dtype=complex)
    q = q / np.linalg.norm(q)
    mu = st.overlap(state, np.array([q, q, q]))
    if abs(mu) > 0:
        q = q * np.exp(1j * np.angle(mu) / 3)
    p = np.array([q, q, q])
    return StationaryPoint(p=p, mu=float(abs(st.overlap(state, p))),
                           symmetry="fully-symmetric", relevance=relevance, label=label)


def _third_factor(state, q):
    """Factor completing ``|q q .>``: the normalized contraction, or a null direction."""
    T = st.tensor(state)
    v = np.einsum("abc,a,b->c", T, q.conj(), q.conj())
    nrm = np.linalg.norm(v)
    if nrm > 1e-12:
        return v / nrm
    # Zero eigenvalue: choose q' killing the remaining contraction <q q'|psi>.
    M = np.einsum("abc,a->bc", T, q.conj())
    _, _, vh = np.linalg.svd(M)
    return vh[-1].conj()


def _permutations(state, q, qp, relevance, first_label):
    n = int(first_label)
    return [
        _point(state, [q, q, qp], "AB-symmetric", relevance, f"solution {n}"),
        _point(state, [q, qp, q], "AC-symmetric", relevance, f"solution {n + 1}"),
        _point(state, [qp, q, q], "BC-symmetric", relevance, f"solution {n + 2}"),
    ]


def symmetric_solutions_gamma0(s):
    """Symmetric stationary points of a real symmetric state (gamma = 0).

    Returns the standard point ``|000>`` with ``mu = g`` and the two points
    ``|qqq>`` with ``q ~ 2t|0> + r|1>``, ``r = h +- sqrt(h^2 + 8t^2 - 4gt)``;
    the minus branch never reaches ``g`` and is labelled irrelevant.

    Raises
    ------
    ComplexRoot
        If ``h^2 + 8t^2 - 4gt < 0``.
    """
    _require_gamma(s, 0.0)
    g, t, h = s.g, s.t, s.h
    disc = h * h + 8 * t * t - 4 * g * t
    if disc < -1e-14:
        raise ComplexRoot(f"h^2 + 8t^2 - 4gt = {disc:.3e} < 0")
    root = np.sqrt(max(disc, 0.0))
    psi = st.from_symmetric_gsd(s)
    e0 = np.array([1, 0], dtype=complex)
    r_plus = h + root
    plus = np.array([2 * t, r_plus]) if r_plus > 0 or t > 0 else np.array([0.0, 1.0])
    # r_- = 4t(g - 2t)/(h + root); dividing out 2t keeps the t -> 0 limit finite.
    minus = np.array([h + root, 2 * (g - 2 * t)]) if h + root > 0 else np.array([1.0, 0.0])
    return [
        _symmetric_point(psi, e0, "standard", "solution 1"),
        _symmetric_point(psi, plus, "relevant", "solution 2"),
        _symmetric_point(psi, minus, "irrelevant", "solution 3"),
    ]


def asymmetric_solutions_gamma0(s):
    """The three pair-symmetric points ``|qqq'>`` and permutations at gamma = 0."""
    _require_gamma(s, 0.0)
    g, t, h = s.g, s.t, s.h
    psi = st.from_symmetric_gsd(s)
    q = np.array([h, -(g + t)], dtype=complex)
    q = q / np.linalg.norm(q)
    return _permutations(psi, q, _third_factor(psi, q), "irrelevant", 4)


def stationary_catalog_gamma0(s):
    return symmetric_solutions_gamma0(s) + asymmetric_solutions_gamma0(s)


def symmetric_solutions_gammapi2(s):
    """Symmetric stationary points at gamma = pi/2.

    ``|q> = exp(i pi/3)(2t|0> + i r|1>)/norm`` with
    ``r = sqrt(h^2 + 4gt + 8t^2) + h`` (relevant) or its partner
    ``-(sqrt(...) - h)`` (irrelevant).
    """
    _require_gamma(s, np.pi / 2)
    g, t, h = s.g, s.t, s.h
    root = np.sqrt(h * h + 4 * g * t + 8 * t * t)
    psi = st.from_symmetric_gsd(s)
    ph = np.exp(1j * np.pi / 3)
    r_pi = root + h
    relevant = ph * np.array([2 * t, 1j * r_pi]) if r_pi > 0 else np.array([0, 1j])
    # s_pi = 4t(g + 2t)/(root + h); same rescaling as at gamma = 0.
    irrelevant = ph * np.array([root + h, -2j * (g + 2 * t)]) if r_pi > 0 else np.array([1, 0])
    return [
        _symmetric_point(psi, np.array([1, 0], dtype=complex), "standard", "solution 1"),
        _symmetric_point(psi, relevant, "relevant", "solution 2"),
        _symmetric_point(psi, irrelevant, "irrelevant", "solution 3"),
    ]


ZERO_FLOOR = 8 * np.finfo(float).eps


def asymmetric_eigenvalue_sq(g, t, h):
    """Closed-form squared eigenvalue of the pair-symmetric point at gamma = pi/2."""
    den = g * g + h * h - 3 * g * t
    if abs(den) < 1e-12:
        raise IndefiniteAtW("g^2 + h^2 - 3gt vanishes")
    num = g * h * h - 4 * t**3
    # h^2 of a normalized state carries about one ulp of absolute error, so
    # anything below this floor is indistinguishable from g h^2 = 4 t^3
    if abs(num) <= ZERO_FLOOR:
        num = 0.0
    return g * num / den


def asymmetric_solution_gammapi2(s):
    """The point ``|qqq'>`` at gamma = pi/2 with ``q = cos th|0> + e^{i phi} sin th|1>``.

    ``cos 2th = (h^2 + gt - g^2)/(h^2 + g^2 - 3gt)`` and
    ``sin phi = (h/2g) tan th``; ``q'`` is the normalized contraction ``<qq|psi>``.

    Raises
    ------
    IndefiniteAtW
        At ``g^2 + h^2 = 3gt`` (the W point), where the angle is 0/0.
    InvalidAngle
        If either trigonometric equation has no real solution.
    """
    _require_gamma(s, np.pi / 2)
    g, t, h = s.g, s.t, s.h
    den = h * h + g * g - 3 * g * t
    if abs(den) < 1e-12:
        raise IndefiniteAtW("angle of the asymmetric solution is indefinite at the W point")
    c2 = (h * h + g * t - g * g) / den
    if abs(c2) > 1 + 1e-12:
        raise InvalidAngle(f"cos 2theta = {c2:.6g}")
    theta = np.arccos(np.clip(c2, -1, 1)) / 2
    sphi = h / (2 * g) * np.tan(theta)
    if abs(sphi) > 1 + 1e-12:
        raise InvalidAngle(f"sin phi = {sphi:.6g}")
    q = st.qubit(theta, np.arcsin(np.clip(sphi, -1, 1)))
    psi = st.from_symmetric_gsd(s)
    return _point(psi, [q, q, _third_factor(psi, q)], "AB-symmetric", "relevant", "solution 4")


def asymmetric_solutions_gammapi2(s):
    first = asymmetric_solution_gammapi2(s)
    q, qp = first.p[0], first.p[2]
    return _permutations(st.from_symmetric_gsd(s), q, qp, "relevant", 4)


def stationary_catalog_gammapi2(s):
    return symmetric_solutions_gammapi2(s) + asymmetric_solutions_gammapi2(s)


# ---------------------------------------------------------------- Bloch formulation

def bloch_correlation(s):
    """Bloch vector ``r`` and correlation matrix ``G`` of the AB reduction."""
    g, t, h, c, sn = s.g, s.t, s.h, np.cos(s.gamma), np.sin(s.gamma)
    r = np.array([2 * h * t * c, 2 * h * t * sn, g * g - h * h - t * t])
    G = np.array([
        [2 * t * t + 2 * g * t, 0.0, -2 * h * t * c],
        [0.0, 2 * t * t - 2 * g * t, -2 * h * t * sn],
        [-2 * h * t * c, -2 * h * t * sn, g * g + h * h - t * t],
    ])
    return BlochCorrelation(r=r, G=G)


def bloch_correlation_from_density(rho):
    """Bloch vector of the first qubit and correlation matrix of a two-qubit density."""
    pauli = st._PAULI
    eye = np.eye(2)
    r = np.array([np.trace(rho @ np.kron(s, eye)).real for s in pauli])
    G = np.array([[np.trace(rho @ np.kron(a, b)).real for b in pauli] for a in pauli])
    return BlochCorrelation(r=r, G=G)


def overlap_from_bloch(u, bc):
    """``(1 + 2 u.r + u.G.u)/4`` for a unit Bloch vector ``u``."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1) > 1e-12:
        raise NotUnit(f"|u| = {np.linalg.norm(u):.15g}")
    return float((1 + 2 * u @ bc.r + u @ bc.G @ u) / 4)


def _secular_roots(w, poles):
    """Real roots of ``sum_k w_k/(lam - p_k)^2 = 1`` for sorted poles and w_k > 0."""
    f = lambda lam: np.sum(w / (lam - poles) ** 2) - 1
    df = lambda lam: -2 * np.sum(w / (lam - poles) ** 3)
    span = np.sqrt(w.sum()) + 1.0
    kw = dict(xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)

    def near(k, side):
        # f > 0 and f' has the pole's sign this close to pole k.
        d = 0.5 * np.sqrt(w[k])
        if len(poles) > 1:
            d = min(d, 0.25 * np.diff(poles).min())
        lam = poles[k] + side * d
        while f(lam) <= 0 or np.sign(df(lam)) != -side:
            d /= 2
            lam = poles[k] + side * d
            if d < 1e-300:
                break
        return lam

    roots = [brentq(f, poles[0] - span, near(0, -1), **kw)]
    for k in range(len(poles) - 1):
        a, b = near(k, +1), near(k + 1, -1)
        lam_min = brentq(df, a, b, **kw)
        fmin = f(lam_min)
        if abs(fmin) < 1e-14:
            roots.append(lam_min)
        elif fmin < 0:
            roots.append(brentq(f, a, lam_min, **kw))
            roots.append(brentq(f, lam_min, b, **kw))
    roots.append(brentq(f, near(len(poles) - 1, +1), poles[-1] + span, **kw))
    return roots


def lagrange_stationary_points(bc, tol=1e-12):
    """All real solutions ``(lam, u)`` of ``r + G u = lam u`` with ``|u| = 1``.

    Away from the spectrum of ``G`` the multiplier solves the secular equation
    ``sum_i rt_i^2/(lam - g_i)^2 = 1`` (``rt`` is ``r`` in the eigenbasis of
    ``G``), bracketed between consecutive poles. An eigenvalue whose eigenspace
    is orthogonal to ``r`` also yields solutions ``lam = g_i``; a degenerate
    eigenspace contributes only the representatives along its first
    eigenvector.
    """
    evals, V = np.linalg.eigh(bc.G)
    rt = V.T @ bc.r
    clusters = []
    for i, e in enumerate(evals):
        if clusters and abs(e - evals[clusters[-1][0]]) <= tol * max(1.0, abs(e)):
            clusters[-1].append(i)
        else:
            clusters.append([i])
    weights = np.array([np.sum(rt[c] ** 2) for c in clusters])
    poles = np.array([evals[c[0]] for c in clusters])
    active = weights > tol**2

    out = []
    if active.any():
        for lam in _secular_roots(weights[active], poles[active]):
            u = V @ (rt / (lam - evals))
            out.append((float(lam), u / np.linalg.norm(u)))
    for c, on in zip(clusters, active):
        if on:
            continue
        lam = evals[c[0]]
        coef = np.zeros(3)
        others = [i for i in range(3) if i not in c]
        coef[others] = rt[others] / (lam - evals[others])
        rem = 1 - coef @ coef
        if rem < -1e-12:
            continue
        extra = np.sqrt(max(rem, 0.0))
        signs = (1.0, -1.0) if extra > 1e-12 else (1.0,)
        for sgn in signs:
            cc = coef.copy()
            cc[c[0]] = sgn * extra
            out.append((float(lam), V @ cc))
    return out


def lagrange_residual(bc, lam, u):
    return float(np.linalg.norm(bc.r + bc.G @ u - lam * u))


def mu_prime_sq_from_tangle(g, t, tau):
    """Squared pair-symmetric eigenvalue at gamma = pi/2 expressed through the three-tangle."""
    return g * g * tau / (tau + 4 * g * (g + t) * (g - 2 * t) ** 2)
