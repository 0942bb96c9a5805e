import numpy as np
import pytest

import infodist as qd
from infodist.errors import NotPositiveError

E0 = np.array([1, 0], dtype=complex)
E1 = np.array([0, 1], dtype=complex)


def identity_instrument(d):
    return qd.Instrument(d, ((np.eye(d, dtype=complex),),))


def test_pi_operator_entries_qubit():
    pi = qd.pi_operator(2).matrix
    # indices (i,j) -> i*2+j
    assert pi[0, 0] == pytest.approx(1.0 / 3.0)  # <00|Pi|00>
    assert pi[1, 1] == pytest.approx(1.0 / 6.0)  # <01|Pi|01>
    assert pi[1, 2] == pytest.approx(1.0 / 6.0)  # <01|Pi|10>
    assert pi[0, 3] == pytest.approx(0.0)  # <00|Pi|11>
    assert np.trace(pi) == pytest.approx(1.0, abs=1e-14)
    assert np.abs(pi - pi.conj().T).max() == 0.0


def test_pair_moment_matches_tensor_contraction():
    # closed form against the explicit matrix on the tensor square
    rng = np.random.default_rng(30)
    for d in (2, 3, 5):
        pi = qd.pi_operator(d).matrix
        for _ in range(5):
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            contracted = np.trace(pi @ np.kron(a, b))
            assert qd.pair_moment(a, b) == pytest.approx(contracted, abs=1e-12)


def test_avg_fidelity_uniform_known_values():
    assert qd.avg_fidelity_uniform(identity_instrument(3)).avg_fidelity == pytest.approx(1.0)
    basis = qd.sqrt_instrument(qd.basis_povm(2))
    assert qd.avg_fidelity_uniform(basis).avg_fidelity == pytest.approx(2.0 / 3.0, abs=1e-12)
    trine = qd.sqrt_instrument(qd.trine_povm())
    assert qd.avg_fidelity_uniform(trine).avg_fidelity == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_avg_fidelity_uniform_agrees_with_pi_contraction():
    # independent oracle: integrate each |<psi|A|psi>|^2 with the Pi matrix
    rng = np.random.default_rng(31)
    povm = qd.random_povm(3, 4, rng)
    inst = qd.sqrt_instrument(povm)
    pi = qd.pi_operator(3).matrix
    oracle = sum(np.trace(pi @ np.kron(a, a.conj().T)).real for a in inst.kraus_ops())
    assert qd.avg_fidelity_uniform(inst).avg_fidelity == pytest.approx(oracle, abs=1e-12)


def test_min_disturbance_uniform_known_values():
    trivial = qd.POVM(2, (np.eye(2, dtype=complex),))
    assert qd.min_disturbance_uniform(trivial).disturbance == pytest.approx(0.0, abs=1e-14)

    rng = np.random.default_rng(32)
    rank1 = qd.random_povm(3, 6, rng, rank=1)
    assert qd.min_disturbance_uniform(rank1).disturbance == pytest.approx(0.5, abs=1e-12)

    halves = qd.POVM(2, (np.eye(2, dtype=complex) / 2, np.eye(2, dtype=complex) / 2))
    assert qd.min_disturbance_uniform(halves).disturbance == pytest.approx(0.0, abs=1e-12)


def test_min_disturbance_equals_sqrt_instrument_fidelity():
    rng = np.random.default_rng(33)
    for d in (2, 4):
        povm = qd.random_povm(d, 3, rng)
        a = qd.min_disturbance_uniform(povm).avg_fidelity
        b = qd.avg_fidelity_uniform(qd.sqrt_instrument(povm)).avg_fidelity
        assert a == pytest.approx(b, abs=1e-12)


def test_avg_fidelity_mc_identity_and_basis():
    rng = np.random.default_rng(34)
    rep = qd.avg_fidelity_mc(identity_instrument(3), 100, rng)
    assert rep.avg_fidelity == 1.0 and rep.stderr == 0.0

    rep = qd.avg_fidelity_mc(qd.sqrt_instrument(qd.basis_povm(2)), 100_000, rng)
    assert abs(rep.avg_fidelity - 2.0 / 3.0) < 5 * rep.stderr


def test_avg_fidelity_mc_matches_exact_for_reset():
    rng = np.random.default_rng(35)
    psi0 = qd.haar_state(2, rng)
    inst = qd.reset_instrument(qd.random_povm(2, 3, rng), psi0)
    exact = qd.avg_fidelity_uniform(inst).avg_fidelity
    rep = qd.avg_fidelity_mc(inst, 100_000, rng)
    assert abs(rep.avg_fidelity - exact) < 5 * rep.stderr


def test_avg_fidelity_design_exactness():
    # single point design, identity instrument
    rep = qd.avg_fidelity_design(identity_instrument(2), np.array([E0]))
    assert rep.avg_fidelity == pytest.approx(1.0)

    # unbiased-bases design reproduces the exact value: degree-2 integrand
    mub3 = qd.wootters_fields_mub(3, 1).vectors()
    basis3 = qd.sqrt_instrument(qd.basis_povm(3))
    rep = qd.avg_fidelity_design(basis3, mub3)
    assert rep.avg_fidelity == pytest.approx(0.5, abs=1e-12)

    rng = np.random.default_rng(36)
    mub5 = qd.wootters_fields_mub(5, 1).vectors()
    inst = qd.sqrt_instrument(qd.random_povm(5, 4, rng))
    exact = qd.avg_fidelity_uniform(inst).avg_fidelity
    assert qd.avg_fidelity_design(inst, mub5).avg_fidelity == pytest.approx(exact, abs=1e-12)


def test_entanglement_fidelity():
    assert qd.entanglement_fidelity(np.eye(2, dtype=complex) / 2, identity_instrument(2)) == pytest.approx(1.0)
    basis = qd.sqrt_instrument(qd.basis_povm(2))
    assert qd.entanglement_fidelity(np.eye(2, dtype=complex) / 2, basis) == pytest.approx(0.5, abs=1e-12)


def test_entanglement_fidelity_relation_to_avg():
    # F_avg = (d F_e(I/d) + 1) / (d + 1), checked on random instruments
    rng = np.random.default_rng(37)
    for d in (2, 3, 4):
        for _ in range(20):
            povm = qd.random_povm(d, 3, rng)
            us = [qd.haar_unitary(d, rng) for _ in povm.effects]
            inst = qd.one_term_instrument(povm, us)
            f_e = qd.entanglement_fidelity(np.eye(d, dtype=complex) / d, inst)
            f_avg = qd.avg_fidelity_uniform(inst).avg_fidelity
            assert f_avg == pytest.approx((d * f_e + 1) / (d + 1), abs=1e-10)


def test_conditional_avg_disturbance():
    rng = np.random.default_rng(38)
    inst = qd.sqrt_instrument(qd.random_povm(2, 3, rng))

    d1, d2 = qd.conditional_avg_disturbance([(np.eye(2, dtype=complex) / 2, 1.0)], identity_instrument(2))
    assert d1 == pytest.approx(0.0, abs=1e-10)
    assert d2 == pytest.approx(0.0, abs=1e-10)

    # pure-state ensembles: the two measures coincide
    ens = [(qd.outer(qd.haar_state(2, rng)), 0.5), (qd.outer(qd.haar_state(2, rng)), 0.5)]
    d1, d2 = qd.conditional_avg_disturbance(ens, inst)
    assert d2 == pytest.approx(d1, abs=1e-10)

    # mixed input under dephasing: knowing the outcome looks worse
    deph = qd.sqrt_instrument(qd.basis_povm(2))
    d1, d2 = qd.conditional_avg_disturbance([(np.eye(2, dtype=complex) / 2, 1.0)], deph)
    assert d1 == pytest.approx(0.0, abs=1e-10)
    assert d2 == pytest.approx(0.5, abs=1e-10)
    assert d2 >= d1 - 1e-10


def test_superadditivity_margin_cases():
    rng = np.random.default_rng(39)
    psi = qd.haar_state(3, rng)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    p1 = x @ x.conj().T

    assert qd.superadditivity_margin(p1, np.zeros((3, 3), dtype=complex), psi) == pytest.approx(0.0, abs=1e-10)
    assert qd.superadditivity_margin(p1, 2.7 * p1, psi) == pytest.approx(0.0, abs=1e-10)

    with pytest.raises(NotPositiveError):
        qd.superadditivity_margin(-p1, p1, psi)


def test_superadditivity_random_search():
    # falsification attempt over random positive pairs
    rng = np.random.default_rng(40)
    worst = np.inf
    for _ in range(2000):
        d = int(rng.integers(2, 7))
        x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        y = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        worst = min(worst, qd.superadditivity_margin(x @ x.conj().T / d, y @ y.conj().T / d, qd.haar_state(d, rng)))
    assert worst >= -1e-12


def test_restore_counterexample():
    g, channel, gain = qd.restore_counterexample(2, E0)
    assert np.abs(g - qd.outer(E1)).max() < 1e-12
    assert gain == pytest.approx(1.0, abs=1e-12)

    rng = np.random.default_rng(41)
    for d in (2, 3, 5):
        psi = qd.haar_state(d, rng)
        g, channel, gain = qd.restore_counterexample(d, psi)
        assert gain == pytest.approx(1.0, abs=1e-12)
        assert qd.instrument_validate(channel) < 1e-12
        # identity channel gains nothing
        ident = identity_instrument(d)
        same = qd.apply_channel(ident, g)
        assert np.vdot(psi, same @ psi).real == pytest.approx(np.vdot(psi, g @ psi).real)


def test_entfid_bound_identity_split_is_equality():
    povm = qd.basis_povm(2)
    lhs, rhs = qd.entfid_bound_check(povm, np.eye(2, dtype=complex))
    assert rhs == pytest.approx(0.5, abs=1e-12)
    assert lhs == pytest.approx(rhs, abs=1e-12)

    # scalar two-way split per branch keeps both sides equal
    rng = np.random.default_rng(42)
    scalar = np.concatenate([np.sqrt(0.3) * np.eye(2), np.sqrt(0.7) * np.eye(2)], axis=0)
    lhs, rhs = qd.entfid_bound_check(qd.random_povm(2, 3, rng), scalar)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_entfid_bound_random_trials():
    rng = np.random.default_rng(43)
    for _ in range(200):
        d = int(rng.integers(2, 5))
        povm = qd.random_povm(d, int(rng.integers(2, 5)), rng)
        m = qd.random_stinespring_isometry(d, int(rng.integers(1, 4)), rng)
        lhs, rhs = qd.entfid_bound_check(povm, m)
        assert lhs <= rhs + 1e-12


def test_one_term_rotations_never_beat_square_root():
    rng = np.random.default_rng(44)
    for _ in range(50):
        d = int(rng.integers(2, 5))
        povm = qd.random_povm(d, 3, rng)
        best = qd.min_disturbance_uniform(povm).avg_fidelity
        us = [qd.haar_unitary(d, rng) for _ in povm.effects]
        rotated = qd.avg_fidelity_uniform(qd.one_term_instrument(povm, us)).avg_fidelity
        assert rotated <= best + 1e-12


def test_remixed_square_root_dynamics_never_beat_square_root():
    # re-decompositions preserve the average fidelity exactly, so they
    # cannot beat the optimum either
    rng = np.random.default_rng(45)
    for _ in range(20):
        d = int(rng.integers(2, 4))
        povm = qd.random_povm(d, 2, rng)
        inst = qd.sqrt_instrument(povm)
        iso = qd.random_stinespring_isometry(len(povm), 2, rng)  # maps 2 ops to 4
        mixed_ops = qd.remix(inst.kraus_ops(), iso)
        mixed = qd.Instrument(d, tuple((a,) for a in mixed_ops))
        best = qd.min_disturbance_uniform(povm).avg_fidelity
        val = qd.avg_fidelity_uniform(mixed).avg_fidelity
        assert val <= best + 1e-12
        assert val == pytest.approx(qd.avg_fidelity_uniform(inst).avg_fidelity, abs=1e-12)


def test_multi_term_instruments_never_beat_square_root():
    rng = np.random.default_rng(46)
    for _ in range(50):
        d = int(rng.integers(2, 5))
        povm = qd.random_povm(d, 3, rng)
        blocks = qd.isometry_kraus(qd.random_stinespring_isometry(d, 2, rng))
        multi = qd.Instrument(
            d, tuple(tuple(b @ a for b in blocks) for (a,) in qd.sqrt_instrument(povm).branches)
        )
        assert qd.instrument_validate(multi) < 1e-9
        assert qd.avg_fidelity_uniform(multi).avg_fidelity <= qd.min_disturbance_uniform(povm).avg_fidelity + 1e-12
