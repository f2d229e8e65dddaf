"""Three-qubit pure states, product states and the generalized Schmidt form.

A pure state is a complex array of 8 amplitudes indexed by ``4*b1 + 2*b2 + b3``
(party A is the most significant bit). A single-qubit state is a length-2
complex array and a product state is a ``(3, 2)`` array holding one factor per
party. States are compared by fidelity, never componentwise, because every
quantity here is defined modulo a global phase.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, NonUnitary, ZeroState

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def normalize(amp):
    """Return ``amp`` scaled to unit norm.

    Raises
    ------
    ZeroState
        If the norm is below 1e-14.
    """
    amp = np.asarray(amp, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(amp)
    if nrm < 1e-14:
        raise ZeroState("cannot normalize a zero vector")
    return amp / nrm


def as_state(amp, tol=NORM_TOL):
    """Validate an 8-amplitude vector and return it as a complex array."""
    amp = np.asarray(amp, dtype=complex).reshape(-1)
    if amp.shape != (8,):
        raise ValueError(f"expected 8 amplitudes, got {amp.shape[0]}")
    err = abs(np.vdot(amp, amp).real - 1.0)
    if err > tol:
        raise ConstraintViolation(f"state is not normalized (|norm^2 - 1| = {err:.3e})")
    return amp


def basis_state(label):
    """Computational basis state from a bit string such as ``'011'``."""
    amp = np.zeros(8, dtype=complex)
    amp[int(label, 2)] = 1.0
    return amp


def ghz_state():
    amp = np.zeros(8, dtype=complex)
    amp[0] = amp[7] = 1 / np.sqrt(2)
    return amp


def w_state():
    amp = np.zeros(8, dtype=complex)
    amp[1] = amp[2] = amp[4] = 1 / np.sqrt(3)
    return amp


# Maps the gamma = pi/2 family endpoint onto the W state when applied to every qubit.
W_LOCAL_UNITARY = np.array([[np.sqrt(2), -1j], [1, 1j * np.sqrt(2)]]) / np.sqrt(3)


# ---------------------------------------------------------------- single qubits

def qubit(theta, phi=0.0):
    """``cos(theta)|0> + exp(i phi) sin(theta)|1>``."""
    return np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)], dtype=complex)


def qubit_from_bloch(u):
    """Pure qubit state whose Bloch vector is the unit vector ``u``."""
    x, y, z = u
    theta = np.arccos(np.clip(z, -1.0, 1.0)) / 2
    phi = np.arctan2(y, x)
    return qubit(theta, phi)


def bloch_vector(q):
    q = np.asarray(q, dtype=complex)
    rho = np.outer(q, q.conj())
    return np.array([np.trace(rho @ s).real for s in _PAULI])


def orthogonal(q):
    """The state orthogonal to ``q`` with the standard phase convention."""
    return np.array([-np.conj(q[1]), np.conj(q[0])], dtype=complex)


def product_state(q1, q2, q3):
    p = np.array([q1, q2, q3], dtype=complex)
    nrm = np.linalg.norm(p, axis=1)
    if np.any(np.abs(nrm - 1) > NORM_TOL):
        raise ConstraintViolation("product factors must be normalized")
    return p


def product_amplitudes(p):
    """Expand a product state into its 8 computational amplitudes."""
    return np.einsum("a,b,c->abc", p[0], p[1], p[2]).reshape(8)


def product_fidelity(p, q):
    """``|<p|q>|^2`` for two product states."""
    return float(np.prod([abs(np.vdot(a, b)) ** 2 for a, b in zip(p, q)]))


# ---------------------------------------------------------------- state algebra

def tensor(state):
    return np.asarray(state, dtype=complex).reshape(2, 2, 2)


def overlap(state, p):
    """``<p|psi>`` for a product state ``p``."""
    return complex(np.einsum("abc,a,b,c->", tensor(state), p[0].conj(), p[1].conj(), p[2].conj()))


def fidelity(a, b):
    return float(abs(np.vdot(a, b)) ** 2)


def check_unitary(u, tol=UNITARY_TOL):
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise NonUnitary("local unitaries must be 2x2")
    err = np.abs(u.conj().T @ u - np.eye(2)).max()
    if err > tol:
        raise NonUnitary(f"matrix is not unitary (max |U^dag U - 1| = {err:.3e})")
    return u


def apply_local_unitary(state, u1, u2, u3):
    """Return ``(u1 x u2 x u3)|psi>``."""
    u1, u2, u3 = (check_unitary(u) for u in (u1, u2, u3))
    out = np.einsum("ia,jb,kc,abc->ijk", u1, u2, u3, tensor(state))
    return out.reshape(8)


def ccp_gate(state, phi):
    """Controlled-controlled-phase: multiply the ``|111>`` amplitude by ``exp(i phi)``."""
    out = np.array(state, dtype=complex)
    out[7] *= np.exp(1j * phi)
    return out


def density(state):
    state = np.asarray(state, dtype=complex)
    return np.outer(state, state.conj())


def reduced_density(state, traced_party):
    """Two-qubit density matrix left after tracing out party 1, 2 or 3.

    The remaining parties keep their original order.
    """
    subscripts = {1: "abc,ade->bcde", 2: "abc,dbe->acde", 3: "abc,dec->abde"}
    if traced_party not in subscripts:
        raise ValueError("traced_party must be 1, 2 or 3")
    t = tensor(state)
    return np.einsum(subscripts[traced_party], t, t.conj()).reshape(4, 4)


def single_qubit_density(state, party):
    t = np.moveaxis(tensor(state), party - 1, 0).reshape(2, 4)
    return t @ t.conj().T


def partial_transpose(rho, party):
    """Transpose the indices of one party (1, 2 or 3) of an 8x8 density matrix."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2, 2, 2)
    k = party - 1
    axes = list(range(6))
    axes[k], axes[k + 3] = axes[k + 3], axes[k]
    return r.transpose(axes).reshape(8, 8)


# ---------------------------------------------------------------- Schmidt forms

@dataclass(frozen=True)
class SymmetricGSD:
    """Permutation-symmetric generalized Schmidt parameters.

    ``g|000> + t(|011> + |101> + |110>) + exp(i gamma) h |111>`` with
    ``gamma`` in ``[0, pi/2]``.
    """

    g: float
    t: float
    h: float
    gamma: float = 0.0

    def __post_init__(self):
        if min(self.g, self.t, self.h) < -NORM_TOL:
            raise ConstraintViolation("g, t and h must be non-negative")
        err = abs(self.g**2 + 3 * self.t**2 + self.h**2 - 1)
        if err > NORM_TOL:
            raise ConstraintViolation(f"g^2 + 3t^2 + h^2 != 1 (off by {err:.3e})")
        if self.t > self.g + NORM_TOL:
            raise ConstraintViolation("g must dominate t")
        if not -NORM_TOL <= self.gamma <= np.pi / 2 + NORM_TOL:
            raise ConstraintViolation("gamma must lie in [0, pi/2]; use SymmetricGSD.folded")

    @classmethod
    def folded(cls, g, t, h, gamma):
        """Build with ``gamma`` reduced to ``[0, pi/2]``.

        The phase has period pi and the maximal overlap is even in it, so
        folding changes the state only by complex conjugation.
        """
        return cls(g, t, h, fold_gamma(gamma))

    @classmethod
    def from_g_t(cls, g, t, gamma):
        """Derive ``h`` from normalization, clamping tiny negative round-off."""
        h2 = 1 - g * g - 3 * t * t
        if h2 < -1e-12:
            raise ConstraintViolation(f"h^2 = {h2:.3e} < 0")
        return cls(g, t, np.sqrt(max(h2, 0.0)), gamma)


def wrap_gamma(gamma):
    """Reduce a gauge phase modulo pi into ``[-pi/2, pi/2)``."""
    return (gamma + np.pi / 2) % np.pi - np.pi / 2


def fold_gamma(gamma):
    """Reduce a gauge phase into ``[0, pi/2]`` using period pi and evenness."""
    return float(abs(wrap_gamma(gamma)))


def from_symmetric_gsd(s):
    amp = np.zeros(8, dtype=complex)
    amp[0] = s.g
    amp[3] = amp[5] = amp[6] = s.t
    amp[7] = s.h * np.exp(1j * s.gamma)
    return as_state(amp)


@dataclass(frozen=True)
class CanonicalForm:
    """Generalized Schmidt parameters of a state plus the local basis change.

    ``local_u`` holds three 2x2 unitaries with
    ``(U1 x U2 x U3)|psi> = g|000> + t1|011> + t2|101> + t3|110> + e^{i gamma} h|111>``.
    ``exceptional`` flags a continuum of closest product states (W-like).
    """

    g: float
    t1: float
    t2: float
    t3: float
    h: float
    gamma: float
    local_u: tuple = field(repr=False, compare=False, default=())
    exceptional: bool = False

    @property
    def t(self):
        return (self.t1, self.t2, self.t3)

    def amplitudes(self):
        amp = np.zeros(8, dtype=complex)
        amp[0] = self.g
        amp[3], amp[5], amp[6] = self.t1, self.t2, self.t3
        amp[7] = self.h * np.exp(1j * self.gamma)
        return amp

    def restore(self):
        """Map the canonical amplitudes back to the original basis."""
        if not self.local_u:
            raise ValueError("no local basis change recorded")
        inv = [u.conj().T for u in self.local_u]
        return apply_local_unitary(self.amplitudes(), *inv)

    def symmetric(self, tol=1e-8):
        """Return the :class:`SymmetricGSD` view when ``t1 = t2 = t3``."""
        if max(self.t) - min(self.t) > tol:
            raise ConstraintViolation("canonical form is not permutation symmetric")
        t = float(np.mean(self.t))
        h2 = max(1 - self.g**2 - 3 * t * t, 0.0)
        return SymmetricGSD(self.g, t, np.sqrt(h2), fold_gamma(self.gamma))
