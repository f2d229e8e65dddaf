"""Independent reference computations used only by the tests."""
import numpy as np
from scipy.optimize import minimize
from scipy.stats import unitary_group


def _qubits(theta, phi):
    return np.stack([np.cos(theta), np.exp(1j * phi) * np.sin(theta)], axis=-1)


def _overlap_sq(angles, T):
    q = _qubits(angles[:3], angles[3:])
    return abs(np.einsum("abc,a,b,c->", T, q[0].conj(), q[1].conj(), q[2].conj())) ** 2


def grid_max_overlap(state, step=np.pi / 12, refine=12):
    """Maximal product overlap by a six-angle grid search plus local refinement.

    Every qubit is ``cos th|0> + e^{i phi} sin th|1>`` with ``th`` in ``[0, pi/2]``
    and ``phi`` in ``[0, 2 pi)``. The best ``refine`` grid cells are polished
    with Nelder-Mead on the six angles.
    """
    T = np.asarray(state, dtype=complex).reshape(2, 2, 2)
    th = np.arange(0, np.pi / 2 + 1e-12, step)
    ph = np.arange(0, 2 * np.pi - 1e-12, step)
    TH, PH = np.meshgrid(th, ph, indexing="ij")
    TH, PH = TH.ravel(), PH.ravel()
    Q = _qubits(TH, PH).conj()
    ov = np.abs(np.einsum("ia,jb,kc,abc->ijk", Q, Q, Q, T, optimize=True)) ** 2
    best = np.argsort(ov, axis=None)[::-1][:refine]
    top = 0.0
    for flat in best:
        i, j, k = np.unravel_index(flat, ov.shape)
        x0 = np.array([TH[i], TH[j], TH[k], PH[i], PH[j], PH[k]])
        res = minimize(lambda x: -_overlap_sq(x, T), x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000, "maxfev": 40000})
        top = max(top, -res.fun)
    return float(np.sqrt(top))


def haar_states_qr(n, seed):
    """Haar states as first columns of Haar unitaries (a different construction)."""
    U = unitary_group.rvs(8, size=n, random_state=seed)
    return U[:, :, 0]


def one_party_purity(state):
    m = np.asarray(state).reshape(2, 4)
    rho = m @ m.conj().T
    return float(np.trace(rho @ rho).real)


def tangle_from_reductions(state):
    """Three-tangle as ``C^2_{A(BC)} - C^2_AB - C^2_AC`` from explicit Wootters formulas."""
    psi = np.asarray(state, dtype=complex)
    T = psi.reshape(2, 2, 2)
    rho_a = np.einsum("abc,dbc->ad", T, T.conj())
    c_a_bc_sq = 4 * np.linalg.det(rho_a).real
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])

    def conc(rho):
        R = rho @ yy @ rho.conj() @ yy
        lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(R).real)[::-1], 0, None))
        return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])

    rho_ab = np.einsum("abc,dec->abde", T, T.conj()).reshape(4, 4)
    rho_ac = np.einsum("abc,dbe->acde", T, T.conj()).reshape(4, 4)
    return c_a_bc_sq - conc(rho_ab) ** 2 - conc(rho_ac) ** 2


def random_local_unitaries(rng):
    return [unitary_group.rvs(2, random_state=rng) for _ in range(3)]


def brute_family_g1(gamma, t, restarts=20):
    """``min_g`` of the numerically computed maximal overlap at fixed ``(t, gamma)``.

    Uses only the alternating solver, never the degeneracy polynomial.
    """
    from scipy.optimize import minimize_scalar

    from entwb.geometric import closest_product_state

    def overlap_of(g):
        h = np.sqrt(max(1 - g * g - 3 * t * t, 0.0))
        amp = np.zeros(8, dtype=complex)
        amp[0], amp[3], amp[5], amp[6], amp[7] = g, t, t, t, h * np.exp(1j * gamma)
        return closest_product_state(amp / np.linalg.norm(amp), restarts=restarts)[1]

    g_hi = np.sqrt(1 - 3 * t * t)
    res = minimize_scalar(overlap_of, bounds=(max(t, 0.5), g_hi), method="bounded",
                          options={"xatol": 1e-9})
    return float(res.fun)
