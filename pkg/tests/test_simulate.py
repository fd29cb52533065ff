import math

import numpy as np
import pytest

from quatsim import campaigns, cmat, hmat, qqt, simulate
from quatsim.errors import DimensionError
from quatsim.hmat import QMatrix
from quatsim.qqt import Channel, Povm, State


def test_lift_maximally_mixed():
    sigma = simulate.lift_state(State.maximally_mixed(3))
    np.testing.assert_allclose(sigma, np.eye(6) / 6.0)


def test_lift_pure_state_has_rank_two_half_spectrum():
    rng = np.random.default_rng(0)
    for d in (2, 3, 4):
        rho = State.pure(hmat.random_vector(rng, d))
        sigma = simulate.lift_state(rho)
        w, _ = cmat.hermitian_eig(sigma)
        expected = np.concatenate([np.zeros(2 * d - 2), [0.5, 0.5]])
        np.testing.assert_allclose(w, expected, atol=1e-10)


def test_lift_state_is_valid_density_matrix():
    rng = np.random.default_rng(1)
    for _ in range(10):
        d = int(rng.integers(1, 7))
        sigma = simulate.lift_state(State.random(rng, d))
        assert abs(np.trace(sigma).real - 1.0) <= 1e-10
        assert np.max(np.abs(sigma - sigma.conj().T)) <= 1e-12
        assert np.linalg.eigvalsh(sigma)[0] >= -1e-9


def test_lifted_spectrum_doubles_quaternionic_spectrum():
    rng = np.random.default_rng(2)
    for _ in range(5):
        d = int(rng.integers(1, 6))
        rho = State.random(rng, d)
        lam = hmat.spectral_decompose(rho.matrix).eigenvalues
        w, _ = cmat.hermitian_eig(simulate.lift_state(rho))
        np.testing.assert_allclose(w, np.repeat(lam, 2) / 2.0, atol=1e-9)


def test_lift_povm_examples():
    lifted = simulate.lift_povm(Povm([QMatrix.identity(2)]))
    np.testing.assert_array_equal(lifted[0], np.eye(4))
    lifted = simulate.lift_povm(Povm.projective(2))
    np.testing.assert_array_equal(np.sum(lifted, axis=0), np.eye(4))
    for e in lifted:
        assert np.max(np.abs(e - e.conj().T)) == 0.0


def test_lift_povm_random_completeness():
    rng = np.random.default_rng(3)
    for _ in range(10):
        d = int(rng.integers(1, 6))
        lifted = simulate.lift_povm(Povm.random(rng, d, int(rng.integers(2, 7))))
        total = np.sum(lifted, axis=0)
        assert np.linalg.norm(total - np.eye(2 * d)) <= 1e-10 * max(1.0, 2 * d)
        for e in lifted:  # each lifted effect stays Hermitian PSD
            assert np.max(np.abs(e - e.conj().T)) <= 1e-12
            assert np.linalg.eigvalsh(e)[0] >= -1e-9


def test_lift_channel_examples():
    lifted = simulate.lift_channel(Channel.identity(3))
    np.testing.assert_array_equal(lifted[0], np.eye(6))
    u = hmat.random_unitary(4, 3)
    lifted = simulate.lift_channel(Channel.unitary(u))
    k = lifted[0]
    assert np.linalg.norm(k @ k.conj().T - np.eye(6)) <= 1e-9


def test_lift_channel_normalization_both_modes():
    rng = np.random.default_rng(5)
    for mode in ("default", "strict"):
        d, p = 3, 2
        n = 2 if mode == "default" else 2
        ch = Channel.random(rng, d, p, n, mode=mode)
        lifted = simulate.lift_channel(ch)
        if mode == "default":
            total = np.sum([k.conj().T @ k for k in lifted], axis=0)
            eye = np.eye(2 * d)
        else:
            total = np.sum([k @ k.conj().T for k in lifted], axis=0)
            eye = np.eye(2 * p)
        assert np.linalg.norm(total - eye) <= 1e-10 * max(1.0, math.sqrt(len(eye)))


def test_measurement_equiv_examples():
    rng = np.random.default_rng(6)
    rep = simulate.measurement_equiv(State.maximally_mixed(3),
                                     Povm.random(rng, 3, 5))
    assert rep.max_deviation <= 1e-10
    rep = simulate.measurement_equiv(State(QMatrix.identity(1)),
                                     Povm([QMatrix.identity(1)]))
    assert rep.p[0] == rep.q[0] == 1.0


def test_measurement_equiv_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        d = int(rng.integers(1, 7))
        rep = simulate.measurement_equiv(State.random(rng, d),
                                         Povm.random(rng, d, int(rng.integers(2, 9))))
        assert rep.max_deviation <= 1e-10
        assert rep.p_sum_residual <= 1e-9 and rep.q_sum_residual <= 1e-9


def test_channel_equiv_identity_reduces_to_measurement():
    rng = np.random.default_rng(8)
    state = State.random(rng, 3)
    povm = Povm.random(rng, 3, 4)
    m = simulate.measurement_equiv(state, povm)
    c = simulate.channel_equiv(state, Channel.identity(3), povm)
    np.testing.assert_allclose(c.p, m.p, atol=1e-12)
    np.testing.assert_allclose(c.q, m.q, atol=1e-12)
    assert c.intermediate_residual <= 1e-12


def test_channel_equiv_unitary():
    rng = np.random.default_rng(9)
    for _ in range(5):
        d = int(rng.integers(2, 5))
        rep = simulate.channel_equiv(
            State.random(rng, d),
            Channel.unitary(hmat.random_unitary(rng, d)),
            Povm.random(rng, d, 4))
        assert rep.max_deviation <= 1e-10
        assert rep.intermediate_residual <= 1e-10


def test_channel_equiv_rectangular():
    rng = np.random.default_rng(10)
    rep = simulate.channel_equiv(
        State.random(rng, 3),
        Channel.random(rng, 3, 2, 3),
        Povm.random(rng, 2, 4))
    assert rep.max_deviation <= 1e-10
    assert rep.intermediate_residual <= 1e-10


def test_channel_equiv_strict_mode():
    rng = np.random.default_rng(11)
    rep = simulate.channel_equiv(
        State.random(rng, 2),
        Channel.random(rng, 2, 3, 2, mode="strict"),
        Povm.random(rng, 3, 4))
    assert rep.mode == "strict"
    # equivalence is a homomorphism fact, independent of normalization mode
    assert rep.max_deviation <= 1e-10
    assert rep.intermediate_residual <= 1e-10
    # the strict convention genuinely gives non-unit output traces
    ch = Channel.random(rng, 2, 3, 2, mode="strict")
    out = qqt.kraus_apply(ch.kraus, State.random(rng, 2).matrix)
    assert abs(out.trace() - 1.0) > 1e-6


def test_channel_equiv_dimension_checks():
    with pytest.raises(DimensionError):
        simulate.channel_equiv(State.maximally_mixed(2), Channel.identity(3),
                               Povm([QMatrix.identity(3)]))
    with pytest.raises(DimensionError):
        simulate.channel_equiv(State.maximally_mixed(3), Channel.identity(3),
                               Povm([QMatrix.identity(2)]))


def test_campaigns_small():
    rep = campaigns.run_measurement_campaign(21, [1, 2, 3], 25)
    assert rep["pass"] and rep["max_residual"] <= 1e-10
    rep = campaigns.run_channel_campaign(21, [1, 2, 3], 25)
    assert rep["pass"] and rep["max_intermediate_residual"] <= 1e-10
    rep = campaigns.run_channel_campaign(21, [1, 2, 3], 15, mode="strict")
    assert rep["pass"]


def test_campaigns_deterministic():
    a = campaigns.run_measurement_campaign(33, [1, 2], 10)
    b = campaigns.run_measurement_campaign(33, [1, 2], 10)
    assert a == b


def test_verification_report_shape():
    report = campaigns.run_verification(seed=5, dims=[1, 2], trials=10)
    assert report["pass"] is True
    assert report["schema"] == 1
    assert set(report["campaigns"]) == {"measurement", "channel"}
    assert {"embedding_laws", "inner_product", "trace_structure", "spectral",
            "sp1_su2", "sa_basis"} <= set(report["suites"])
    assert report["max_measurement_dev"] <= 1e-10
    assert report["max_channel_dev"] <= 1e-10
    # tightening the tolerance below float noise must produce violations
    bad = campaigns.run_verification(seed=5, dims=[1, 2], trials=10,
                                     tolerance=1e-20)
    assert bad["pass"] is False
    assert bad["violations"]
