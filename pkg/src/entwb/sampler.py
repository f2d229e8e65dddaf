"""Haar-random states and the check that none beats the family at its gauge phase.

Each random state is canonicalized, its gauge phase is folded into
``[0, pi/2]`` and its maximal overlap ``g`` is compared with the family value
``g_fam(gamma)``. The family is a lower envelope, so ``g - g_fam >= 0`` up to
solver noise.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from . import states as st
from .errors import CanonicalizationFailure, NoConvergence
from .family import G_GHZ, family_parameters
from .geometric import canonicalize
from .parallel import ordered_map

TABLE_POINTS = 2001
ENVELOPE_TOL = 1e-6
DISTRIBUTION = "haar"


def haar_random_state(seed, index=0):
    """Haar-distributed pure state from the stream ``(seed, index)``.

    Eight independent standard complex Gaussians, normalized. Every
    ``(seed, index)`` pair has its own generator, so a batch can be split
    across workers without changing any draw.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return z / np.linalg.norm(z)


# ---------------------------------------------------------------- family table

def _family_row(gamma):
    return family_parameters(gamma)


@dataclass(frozen=True)
class FamilyTable:
    """Dense ``(gamma, t, g, h)`` table of the family with a cubic interpolant.

    ``g`` is exactly ``1/sqrt(2)`` on ``[0, pi/4]``; above that a cubic spline
    through the table is used.
    """

    gamma: np.ndarray
    t: np.ndarray
    g: np.ndarray
    h: np.ndarray

    @classmethod
    def build(cls, n=TABLE_POINTS, threads=None):
        if n % 2 == 0:
            raise ValueError("n must be odd so that pi/4 is a grid point")
        gammas = np.linspace(0.0, np.pi / 2, n)
        gammas[n // 2] = np.pi / 4
        rows = np.array(ordered_map(_family_row, gammas, threads))
        return cls(gammas, rows[:, 0], rows[:, 1], rows[:, 2])

    @property
    def _spline(self):
        k = len(self.gamma) // 2
        # frozen dataclass: cache the spline on first use
        sp = self.__dict__.get("_sp")
        if sp is None:
            sp = CubicSpline(self.gamma[k:], self.g[k:])
            object.__setattr__(self, "_sp", sp)
        return sp

    def g_at(self, gamma):
        gamma = np.asarray(gamma, dtype=float)
        out = np.where(gamma <= np.pi / 4, G_GHZ, self._spline(np.clip(gamma, np.pi / 4, np.pi / 2)))
        return float(out) if out.ndim == 0 else out

    def max_interpolation_error(self, n=100, seed=0):
        """Largest ``|g_at - direct|`` over ``n`` random gauge phases."""
        rng = np.random.default_rng(seed)
        gs = rng.uniform(0, np.pi / 2, n)
        direct = np.array([family_parameters(x)[1] for x in gs])
        return float(np.abs(self.g_at(gs) - direct).max())


@lru_cache(maxsize=2)
def family_table(n=TABLE_POINTS):
    return FamilyTable.build(n)


# ---------------------------------------------------------------- envelope check

@dataclass(frozen=True)
class SampleRecord:
    id: int
    state: np.ndarray
    canonical: st.CanonicalForm
    g: float
    gamma: float
    family_g: float
    margin: float

    @property
    def exceptional(self):
        return self.canonical.exceptional


def sample_record(state, table=None, id=-1):
    """Canonicalize one state and compare it with the family envelope.

    Exceptional (W-like) states keep their ``g`` but are placed at
    ``gamma = pi/2``.
    """
    table = family_table() if table is None else table
    c = canonicalize(state)
    gamma = np.pi / 2 if c.exceptional else st.fold_gamma(c.gamma)
    fam = table.g_at(gamma)
    return SampleRecord(id, np.asarray(state), c, c.g, gamma, fam, c.g - fam)


def _haar_record(job):
    seed, index = job
    try:
        return sample_record(haar_random_state(seed, index), id=index)
    except (CanonicalizationFailure, NoConvergence):
        return None


def verify_family_envelope(n, seed=0, threads=None):
    """Sample ``n`` Haar states and measure their margin above the family.

    Returns
    -------
    records : list of SampleRecord
        In index order; samples whose canonicalization failed are omitted.
    summary : dict
        ``n``, ``seed``, ``distribution``, ``min_margin``, ``violations``
        (margin below -1e-6) and ``failures``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    family_table()  # build before forking so workers inherit it
    out = ordered_map(_haar_record, [(seed, i) for i in range(n)], threads)
    records = [r for r in out if r is not None]
    margins = np.array([r.margin for r in records])
    summary = {
        "n": n,
        "seed": seed,
        "distribution": DISTRIBUTION,
        "min_margin": float(margins.min()) if len(margins) else float("nan"),
        "violations": int((margins < -ENVELOPE_TOL).sum()),
        "failures": n - len(records),
    }
    return records, summary
