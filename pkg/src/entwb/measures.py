"""Entanglement quantities compared along the family of maximally entangled states."""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import states as st
from .errors import NonPositive

SLOCC_TOL = 1e-9
MONOTONE_TOL = 1e-9

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))
_CUTS = {"A": 1, "B": 2, "C": 3, 1: 1, 2: 2, 3: 3}


@dataclass(frozen=True)
class MeasureReport:
    g: float
    geometric: float
    tau: float
    concurrences: tuple  # (C_AB, C_AC, C_BC)
    residual_bipartite: float
    negativity: tuple  # (N_A:BC, N_B:AC, N_C:AB)
    er_lower: float
    slocc: str

    def as_dict(self):
        d = asdict(self)
        d["concurrences"] = list(self.concurrences)
        d["negativity"] = list(self.negativity)
        return d


def three_tangle_gsd(c):
    """Three-tangle from generalized Schmidt parameters.

    ``c`` is a :class:`~entwb.states.CanonicalForm` or a
    :class:`~entwb.states.SymmetricGSD`.
    """
    t1, t2, t3 = c.t if isinstance(c.t, tuple) else (c.t,) * 3
    g, h = c.g, c.h
    rad = g * g * h**4 + 16 * (t1 * t2 * t3) ** 2 + 8 * g * h * h * t1 * t2 * t3 * np.cos(2 * c.gamma)
    return float(4 * g * np.sqrt(max(rad, 0.0)))


def hyperdeterminant(state):
    """Cayley hyperdeterminant of the 2x2x2 amplitude tensor."""
    a = np.asarray(state, dtype=complex)
    d1 = (a[0] ** 2 * a[7] ** 2 + a[1] ** 2 * a[6] ** 2
          + a[2] ** 2 * a[5] ** 2 + a[4] ** 2 * a[3] ** 2)
    d2 = (a[0] * a[7] * a[3] * a[4] + a[0] * a[7] * a[5] * a[2]
          + a[0] * a[7] * a[6] * a[1] + a[3] * a[4] * a[5] * a[2]
          + a[3] * a[4] * a[6] * a[1] + a[5] * a[2] * a[6] * a[1])
    d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4]
    return d1 - 2 * d2 + 4 * d3


def three_tangle_amplitudes(state):
    return float(4 * abs(hyperdeterminant(state)))


def concurrence(rho):
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    if w.min() < -1e-8:
        raise NonPositive(f"density matrix has eigenvalue {w.min():.3e}")
    sq = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    flipped = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(sq @ flipped @ sq), 0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1:].sum()))


def _pure_pair_concurrence(state, traced):
    """Concurrence of the pair left after tracing one party of a pure state.

    With ``rho = M M^dag`` (``M`` is 4x2), the Wootters values are the singular
    values of the 2x2 matrix ``M^T (Y x Y) M``. This avoids square roots of the
    vanishing eigenvalues of a rank-2 density, which cost about 1e-8 accuracy.
    """
    M = np.moveaxis(st.tensor(state), traced - 1, 2).reshape(4, 2)
    s = np.linalg.svd(M.T @ _SIGMA_YY @ M, compute_uv=False)
    return float(max(0.0, s[0] - s[1]))


def concurrences(state):
    """Pairwise concurrences ``(C_AB, C_AC, C_BC)`` of a three-qubit pure state."""
    return tuple(_pure_pair_concurrence(state, k) for k in (3, 2, 1))


def negativity(state, cut):
    """Trace norm of the partial transpose minus one, separating party ``cut`` from the rest."""
    pt = st.partial_transpose(st.density(state), _CUTS[cut])
    return float(np.abs(np.linalg.eigvalsh(pt)).sum() - 1)


def er_lower_bound(g):
    """``-log2 g^2``, the relative-entropy bound set by the maximal overlap."""
    if not 0 < g <= 1 + 1e-12:
        raise ValueError("g must lie in (0, 1]")
    return float(-np.log2(min(g, 1.0) ** 2)) + 0.0  # no negative zero


def local_purities(state):
    return tuple(float(np.trace(np.linalg.matrix_power(st.single_qubit_density(state, k), 2)).real)
                 for k in (1, 2, 3))


def classify_slocc(state, tol=SLOCC_TOL):
    """One of ``separable``, ``bisep-A/B/C``, ``W-class`` or ``GHZ-class``.

    ``bisep-X`` means party X factors out of the rest.
    """
    if three_tangle_amplitudes(state) > tol:
        return "GHZ-class"
    pure = [p > 1 - tol for p in local_purities(state)]
    if all(pure):
        return "separable"
    if any(pure):
        return "bisep-" + "ABC"[pure.index(True)]
    return "W-class"


def measure_report(state, g=None, tol=SLOCC_TOL, **solver_kw):
    """All comparison measures for one state.

    ``g`` defaults to the numerically computed maximal overlap; pass the known
    value for family states to skip the search.
    """
    from .geometric import closest_product_state

    state = st.as_state(state, tol=1e-10)
    if g is None:
        g = closest_product_state(state, **solver_kw)[1]
    g = float(min(g, 1.0))
    tau = three_tangle_amplitudes(state)
    conc = concurrences(state)
    return MeasureReport(
        g=g,
        geometric=1 - g * g,
        tau=tau if tau > 1e-10 else 0.0,
        concurrences=conc,
        residual_bipartite=float(sum(c * c for c in conc)),
        negativity=tuple(negativity(state, k) for k in (1, 2, 3)),
        er_lower=er_lower_bound(g),
        slocc=classify_slocc(state, tol),
    )


@dataclass
class Survey:
    gammas: np.ndarray
    reports: list
    flags: dict = field(default_factory=dict)

    def column(self, name):
        if name == "N":
            return np.array([r.negativity[0] for r in self.reports])
        if name == "Er":
            return np.array([r.residual_bipartite for r in self.reports])
        return np.array([getattr(r, name) for r in self.reports])


def _monotone(x, increasing, tol):
    d = np.diff(x)
    return bool(np.all(d >= -tol) if increasing else np.all(d <= tol))


def survey(points, tol=MONOTONE_TOL):
    """Tabulate the family's measures and check their monotone trends.

    The flags are evaluated over the points with gamma in ``[pi/4, pi/2]``:
    three-tangle and negativity must not increase, geometric measure, residual
    bipartite entanglement and the relative-entropy bound must not decrease.
    """
    gammas = np.array([p.gamma for p in points])
    out = Survey(gammas=gammas, reports=[p.measures for p in points])
    sel = gammas >= np.pi / 4 - 1e-12
    sub = Survey(gammas=gammas[sel], reports=[r for r, s in zip(out.reports, sel) if s])
    for name, increasing in (("tau", False), ("N", False), ("geometric", True),
                             ("Er", True), ("er_lower", True)):
        key = f"{name}_{'nondecreasing' if increasing else 'nonincreasing'}"
        out.flags[key] = _monotone(sub.column(name), increasing, tol)
    return out
