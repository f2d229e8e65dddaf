import numpy as np
import pytest

from entwb import states as st
from entwb.family import max_entangled_state
from entwb.geometric import canonicalize
from entwb.sampler import (FamilyTable, family_table, haar_random_state, sample_record,
                           verify_family_envelope)
from oracles import haar_states_qr, one_party_purity

N_MOMENT = 10_000


def test_haar_deterministic():
    a = haar_random_state(7, 3)
    assert np.array_equal(a, haar_random_state(7, 3))
    assert not np.allclose(a, haar_random_state(7, 4))
    assert not np.allclose(a, haar_random_state(8, 3))
    assert abs(np.linalg.norm(a) - 1) < 1e-14


def test_haar_component_moments():
    amps = np.array([haar_random_state(11, i) for i in range(N_MOMENT)])
    p = np.abs(amps) ** 2
    # |amp_b|^2 ~ Beta(1, 7): variance 7/576
    sigma = np.sqrt(7 / 576 / N_MOMENT)
    assert np.all(np.abs(p.mean(axis=0) - 1 / 8) < 3 * sigma)


def test_haar_purity_matches_qr_oracle():
    ours = np.array([one_party_purity(haar_random_state(5, i)) for i in range(N_MOMENT)])
    ref = np.array([one_party_purity(s) for s in haar_states_qr(N_MOMENT, 99)])
    sigma = np.sqrt((ours.var() + ref.var()) / N_MOMENT)
    assert abs(ours.mean() - ref.mean()) < 3 * sigma
    # exact Haar value (dA + dB) / (dA dB + 1) for a 2 x 4 split
    assert abs(ours.mean() - 2 / 3) < 3 * ours.std() / np.sqrt(N_MOMENT)


def test_family_table_interpolation():
    t = family_table()
    assert len(t.gamma) == 2001 and t.gamma[1000] == np.pi / 4
    assert t.max_interpolation_error() <= 1e-8
    assert t.g_at(0.3) == 1 / np.sqrt(2)
    assert t.g_at(np.pi / 2) == pytest.approx(2 / 3, abs=1e-8)
    with pytest.raises(ValueError):
        FamilyTable.build(10)


@pytest.mark.parametrize("gamma", np.linspace(0, np.pi / 2, 9))
def test_family_states_touch_envelope(gamma):
    p = max_entangled_state(gamma, with_measures=False)
    r = sample_record(p.state, family_table())
    assert abs(r.margin) < 1e-7


def test_perturbed_family_states_stay_above(rng):
    table = family_table()
    worst = np.inf
    gammas = np.linspace(np.pi / 4, np.pi / 2, 11)
    states = [max_entangled_state(x, with_measures=False).state for x in gammas]
    for k in range(1000):
        s = states[k % len(states)]
        d = rng.normal(size=8) + 1j * rng.normal(size=8)
        d -= np.vdot(s, d) * s
        d *= 1e-3 / np.linalg.norm(d)
        worst = min(worst, sample_record(st.normalize(s + d), table).margin)
    assert worst >= -1e-6


def test_gamma_fold_under_conjugation():
    for i in range(20):
        s = haar_random_state(21, i)
        a = canonicalize(s)
        b = canonicalize(s.conj())
        assert st.fold_gamma(a.gamma) == pytest.approx(st.fold_gamma(b.gamma), abs=1e-8)
        assert a.g == pytest.approx(b.g, abs=1e-10)


def test_exceptional_w_goes_to_quarter_turn():
    r = sample_record(st.w_state())
    assert r.exceptional and r.gamma == np.pi / 2
    assert r.g == pytest.approx(2 / 3, abs=1e-9)
    assert abs(r.margin) < 1e-7


def test_envelope_small_run():
    records, summary = verify_family_envelope(200, seed=3)
    assert summary["n"] == 200 and summary["distribution"] == "haar"
    assert summary["violations"] == 0 and summary["failures"] == 0
    assert summary["min_margin"] >= -1e-6
    assert [r.id for r in records] == list(range(200))
    assert all(0 <= r.gamma <= np.pi / 2 for r in records)
    with pytest.raises(ValueError):
        verify_family_envelope(0)


def test_envelope_independent_of_threads():
    a, sa = verify_family_envelope(40, seed=9, threads=1)
    b, sb = verify_family_envelope(40, seed=9, threads=3)
    assert sa == sb
    assert [r.margin for r in a] == [r.margin for r in b]
