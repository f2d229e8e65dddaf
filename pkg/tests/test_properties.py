"""Property-based checks of the module invariants."""
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as hs

from entwb import family as fam
from entwb import geometric as gm
from entwb import measures as ms
from entwb import states as st
from entwb.errors import ComplexRoot, IndefiniteAtW, InvalidAngle, NoValidRoot

real = hs.floats(-1, 1, allow_nan=False)
angle = hs.floats(0, 2 * np.pi, allow_nan=False)


@hs.composite
def states(draw):
    v = np.array(draw(hs.lists(real, min_size=16, max_size=16)))
    z = v[:8] + 1j * v[8:]
    assume(np.linalg.norm(z) > 0.1)
    return z / np.linalg.norm(z)


@hs.composite
def unitaries(draw):
    a, b, c, d = (draw(angle) for _ in range(4))
    th = a / 4
    return np.exp(1j * d) * np.array([[np.exp(1j * b) * np.cos(th), np.exp(1j * c) * np.sin(th)],
                                      [-np.exp(-1j * c) * np.sin(th), np.exp(-1j * b) * np.cos(th)]])


@hs.composite
def symmetric_gsd(draw, gamma=None):
    g = draw(hs.floats(0.5, 0.99))
    t = draw(hs.floats(0, 1)) * min(g, np.sqrt((1 - g * g) / 3))
    gm_ = draw(hs.floats(0, np.pi / 2)) if gamma is None else gamma
    return st.SymmetricGSD.from_g_t(g, t, gm_)


# ---------------------------------------------------------------- state core

@given(hs.lists(real, min_size=16, max_size=16))
def test_normalize_gives_unit_norm(v):
    z = np.array(v[:8]) + 1j * np.array(v[8:])
    assume(np.linalg.norm(z) > 1e-6)
    assert abs(np.linalg.norm(st.normalize(z)) - 1) < 1e-12


@given(states(), unitaries(), unitaries(), unitaries())
def test_local_unitary_preserves_norm(s, a, b, c):
    assert abs(np.sum(np.abs(st.apply_local_unitary(s, a, b, c)) ** 2) - 1) < 1e-12


@given(states(), angle, angle, angle, angle)
def test_overlap_global_phase(s, phase, a, b, c):
    p = st.product_state(st.qubit(a, b), st.qubit(b, c), st.qubit(c, a))
    assert abs(st.overlap(np.exp(1j * phase) * s, p)) == pytest.approx(abs(st.overlap(s, p)), abs=1e-14)


@given(symmetric_gsd())
def test_reduced_density_matches_bloch_formula(s):
    rho = st.reduced_density(st.from_symmetric_gsd(s), 3)
    got = gm.bloch_correlation_from_density(rho)
    ref = gm.bloch_correlation(s)
    assert np.allclose(got.r, ref.r, atol=1e-12)
    assert np.allclose(got.G, ref.G, atol=1e-12)
    assert np.allclose(got.G, got.G.T, atol=1e-14)


@given(states())
def test_reduced_density_is_density(s):
    for k in (1, 2, 3):
        r = st.reduced_density(s, k)
        assert np.allclose(r, r.conj().T, atol=1e-12)
        assert abs(np.trace(r).real - 1) < 1e-12
        assert np.linalg.eigvalsh(r).min() > -1e-10


# ---------------------------------------------------------------- geometric measure

@given(states())
def test_canonical_form_constraints(s):
    c = gm.canonicalize(s)
    assert c.g >= max(c.t) - 1e-12 and c.h >= 0
    assert abs(c.g**2 + c.h**2 + sum(x * x for x in c.t) - 1) < 1e-10
    assert -np.pi / 2 <= c.gamma < np.pi / 2
    assert st.fidelity(c.restore(), s) >= 1 - 1e-9


@given(states())
def test_closest_product_stationary(s):
    p, g = gm.closest_product_state(s)
    mu, res = gm.stationarity_residual(s, p)
    assert res < 1e-10 and 0 < g <= 1 + 1e-15


@given(states(), angle, angle, angle, angle, angle, angle)
def test_alternating_monotone(s, a, b, c, d, e, f):
    p0 = [st.qubit(a, b), st.qubit(c, d), st.qubit(e, f)]
    _, hist = gm.alternating_maximization(s, p0)
    assert np.all(np.diff(hist) >= -1e-14)


@given(symmetric_gsd(0.0))
def test_catalog_gamma0_stationary(s):
    try:
        pts = gm.stationary_catalog_gamma0(s)
    except (ComplexRoot, InvalidAngle):
        assume(False)
    psi = st.from_symmetric_gsd(s)
    g = gm.closest_product_state(psi)[1]
    for pt in pts:
        assert pt.residual(psi) < 1e-10
        assert pt.mu <= g + 1e-9


@given(symmetric_gsd(np.pi / 2))
def test_catalog_gammapi2_stationary(s):
    try:
        pts = gm.stationary_catalog_gammapi2(s)
    except (ComplexRoot, InvalidAngle, IndefiniteAtW):
        assume(False)
    psi = st.from_symmetric_gsd(s)
    g = gm.closest_product_state(psi)[1]
    for pt in pts:
        assert pt.residual(psi) < 1e-10
        assert pt.mu <= g + 1e-9


@given(hs.floats(0, np.pi / 2 - 1e-3))
def test_family_round_trip(gamma):
    # the W endpoint is excluded: its closest product state is a continuum
    p = fam.max_entangled_state(gamma, with_measures=False)
    c = gm.canonicalize(p.state)
    assert c.g == pytest.approx(p.g, abs=1e-8)
    assert max(abs(x - p.t_star) for x in c.t) < 1e-8
    assert c.h == pytest.approx(p.h, abs=1e-8)
    assert st.fold_gamma(c.gamma) == pytest.approx(p.gamma if p.t_star > 0 else 0.0, abs=1e-8)


@given(symmetric_gsd())
def test_lagrange_equal_multiplier_equal_overlap(s):
    bc = gm.bloch_correlation(s)
    sols = gm.lagrange_stationary_points(bc)
    for i, (lam, u) in enumerate(sols):
        for lam2, u2 in sols[i + 1:]:
            if abs(lam - lam2) < 1e-12:
                assert gm.overlap_from_bloch(u, bc) == pytest.approx(gm.overlap_from_bloch(u2, bc), abs=1e-10)


# ---------------------------------------------------------------- degeneracy family

@given(hs.floats(0, np.pi / 2), hs.floats(0, fam.T_MAX))
def test_roots_valid(gamma, t):
    try:
        r = fam.degeneracy_roots(gamma, t)
    except NoValidRoot:
        return
    poly = fam.DegeneracyPoly.build(gamma, t)
    for g in r.all_valid_roots:
        assert 0 < g <= 1 and g * g + 3 * t * t <= 1 + 1e-12
        assert poly.scaled_residual(g) < 1e-10


@given(hs.floats(0, np.pi / 2))
def test_family_point_invariants(gamma):
    p = fam.max_entangled_state(gamma, with_measures=False)
    assert 2 / 3 - 1e-12 <= p.g <= 1 / np.sqrt(2) + 1e-15
    assert abs(fam.degeneracy_residual(gamma, p.g, p.t_star, p.h)) < 1e-10
    if gamma <= np.pi / 4:
        assert p.t_star == 0
    if gamma < np.pi / 2 - 1e-9:
        assert p.g > 2 / 3


@given(hs.floats(np.pi / 4 + 1e-6, np.pi / 2), hs.floats(1e-4, 0.1))
def test_family_strictly_decreasing(a, d):
    b = min(a + d, np.pi / 2)
    assume(b > a + 1e-5)
    assert fam.max_entangled_state(b, with_measures=False).g < fam.max_entangled_state(a, with_measures=False).g


# ---------------------------------------------------------------- measures

@given(states(), unitaries(), unitaries(), unitaries())
def test_measures_lu_invariant(s, a, b, c):
    u = st.apply_local_unitary(s, a, b, c)
    x, y = ms.measure_report(s), ms.measure_report(u)
    assert x.g == pytest.approx(y.g, abs=1e-9)
    assert x.tau == pytest.approx(y.tau, abs=1e-9)
    assert x.concurrences == pytest.approx(y.concurrences, abs=1e-9)
    assert x.negativity == pytest.approx(y.negativity, abs=1e-9)
    assert x.residual_bipartite == pytest.approx(y.residual_bipartite, abs=1e-9)
    assert x.slocc == y.slocc


@given(states())
def test_measure_ranges(s):
    r = ms.measure_report(s)
    for v in (r.tau, *r.concurrences, *r.negativity):
        assert -1e-12 <= v <= 1 + 1e-10
    assert r.er_lower == pytest.approx(-np.log2(r.g**2), abs=1e-12)
    assert r.er_lower == pytest.approx(-np.log2(1 - r.geometric), abs=1e-12)


@given(states())
def test_tangle_gsd_agrees(s):
    assert ms.three_tangle_gsd(gm.canonicalize(s)) == pytest.approx(ms.three_tangle_amplitudes(s), abs=1e-8)


# ---------------------------------------------------------------- sampler

@given(states())
def test_fold_under_conjugation(s):
    a, b = gm.canonicalize(s), gm.canonicalize(s.conj())
    assume(not a.exceptional)
    assert st.fold_gamma(a.gamma) == pytest.approx(st.fold_gamma(b.gamma), abs=1e-8)
