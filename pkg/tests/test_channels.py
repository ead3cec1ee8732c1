import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entstab.channels import (
    IDENTITY,
    PauliChannel,
    ShrinkCoefficients,
    apply_one_sided,
    apply_r_picture,
    apply_two_sided,
    channel_from_json,
    dephasing_schedule,
    depolarizing_at,
    depolarizing_schedule,
    kraus_two_sided,
    make_dephasing,
    make_depolarizing,
    toward_schedule,
)
from entstab.errors import DomainError, IndexOutOfRange
from entstab.qstate import TwoQubitState, bell_state, from_pure, to_r_matrix

from conftest import PAULI, brute_two_sided, random_dm

probs = st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3).map(
    lambda v: tuple(np.array(v) / sum(v))
)


def test_validation():
    with pytest.raises(DomainError):
        PauliChannel((0.5, 0.5, 0.1, -0.1))
    with pytest.raises(DomainError):
        PauliChannel((0.5, 0.5, 0.1, 0.0))
    with pytest.raises(DomainError):
        PauliChannel((1.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        make_depolarizing(1.5)
    with pytest.raises(DomainError):
        depolarizing_at(0.0, 1.0)


def test_shrink_coefficients_examples():
    assert IDENTITY.q == (1, 1, 1)
    np.testing.assert_allclose(make_depolarizing(0.3).q, [0.7, 0.7, 0.7])
    np.testing.assert_allclose(make_dephasing(0.2).q, [0.6, 0.6, 1.0])
    # pure sigma_x flips the y and z axes
    np.testing.assert_allclose(PauliChannel((0, 1, 0, 0)).q, [1, -1, -1])


@settings(max_examples=60, deadline=None)
@given(probs)
def test_shrink_round_trip(p):
    ch = PauliChannel(p)
    np.testing.assert_allclose(ShrinkCoefficients(*ch.q).probabilities(), ch.p, atol=1e-12)
    back = PauliChannel.from_shrink(ch.q)
    np.testing.assert_allclose(back.p, ch.p, atol=1e-12)


def test_shrink_matches_bloch_action(rng):
    # Q_k is the factor multiplying the k-th Bloch component
    ch = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
    for k in (1, 2, 3):
        rho = 0.5 * (PAULI[0] + PAULI[k])
        out = ch.apply_qubit(rho)
        assert np.trace(out @ PAULI[k]).real == pytest.approx(ch.q[k - 1])


def test_unital_and_trace_preserving(rng):
    ch = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
    np.testing.assert_allclose(ch.apply_qubit(np.eye(2) / 2), np.eye(2) / 2, atol=1e-15)
    ks = ch.kraus()
    np.testing.assert_allclose(sum(k.conj().T @ k for k in ks), np.eye(2), atol=1e-15)


def test_two_sided_matches_brute_force(rng):
    for _ in range(20):
        p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        rho = random_dm(rng)
        got = apply_two_sided(rho, PauliChannel(tuple(p)), PauliChannel(tuple(q))).dm
        np.testing.assert_allclose(got, brute_two_sided(rho, p, q), atol=1e-14)


def test_kraus_batched(rng):
    a, b = PauliChannel(tuple(rng.dirichlet(np.ones(4)))), PauliChannel(tuple(rng.dirichlet(np.ones(4))))
    dms = np.stack([random_dm(rng) for _ in range(6)])
    out = kraus_two_sided(dms, a, b)
    for d, o in zip(dms, out):
        np.testing.assert_allclose(o, brute_two_sided(d, a.p, b.p), atol=1e-14)


def test_pictures_commute(rng):
    for _ in range(20):
        a = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
        b = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
        rho = random_dm(rng)
        lhs = to_r_matrix(apply_two_sided(rho, a, b))
        np.testing.assert_allclose(lhs, apply_r_picture(to_r_matrix(rho), a, b), atol=1e-13)
        one = to_r_matrix(apply_one_sided(rho, a, 0))
        np.testing.assert_allclose(one, apply_r_picture(to_r_matrix(rho), a, None), atol=1e-13)
        two = to_r_matrix(apply_one_sided(rho, b, 1))
        np.testing.assert_allclose(two, apply_r_picture(to_r_matrix(rho), None, b), atol=1e-13)


def test_composition_multiplies_shrink(rng):
    a = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
    b = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
    rho = 0.5 * (np.eye(2) + 0.3 * PAULI[1] - 0.5 * PAULI[2] + 0.4 * PAULI[3])
    composed = b.apply_qubit(a.apply_qubit(rho))
    direct = PauliChannel.from_shrink(np.array(a.q) * np.array(b.q)).apply_qubit(rho)
    np.testing.assert_allclose(composed, direct, atol=1e-14)


def test_depolarizing_semigroup():
    q1 = depolarizing_at(1.3, 0.2).q
    q2 = depolarizing_at(1.3, 0.5).q
    np.testing.assert_allclose(np.array(q1) * np.array(q2), depolarizing_at(1.3, 0.7).q, atol=1e-15)
    np.testing.assert_allclose(depolarizing_at(2.0, 0.25).q, [np.exp(-0.5)] * 3, atol=1e-15)


def test_one_sided_depolarizing_on_singlet_is_werner():
    # depolarizing one side of the singlet with Q gives the Werner state w = Q
    s = apply_one_sided(from_pure(bell_state("psi-")), make_depolarizing(0.25), 0)
    np.testing.assert_allclose(to_r_matrix(s), np.diag([1, -0.75, -0.75, -0.75]), atol=1e-15)


def test_one_sided_index():
    with pytest.raises(IndexOutOfRange):
        apply_one_sided(np.eye(4) / 4, IDENTITY, 2)


def test_schedules():
    np.testing.assert_allclose(depolarizing_schedule(1.0)(0.0).p, IDENTITY.p)
    np.testing.assert_allclose(dephasing_schedule(2.0)(0.5).q, [np.exp(-1), np.exp(-1), 1.0], atol=1e-15)
    target = PauliChannel((0.1, 0.2, 0.3, 0.4))
    sch = toward_schedule(target, 1.0)
    np.testing.assert_allclose(sch(0.0).p, IDENTITY.p)
    np.testing.assert_allclose(sch(60.0).p, target.p, atol=1e-15)
    # the shrink coefficients interpolate linearly in e^{-t}
    s = 1 - np.exp(-0.7)
    np.testing.assert_allclose(sch(0.7).q, (1 - s) + s * np.array(target.q), atol=1e-15)


def test_channel_json():
    assert channel_from_json({"p": [0.7, 0.1, 0.1, 0.1]}).p == (0.7, 0.1, 0.1, 0.1)
    np.testing.assert_allclose(channel_from_json({"kind": "depolarizing", "p": 0.4}).q, [0.6] * 3)
    np.testing.assert_allclose(
        channel_from_json({"kind": "depolarizing", "kappa": 1, "t": 0.5}).q, [np.exp(-0.5)] * 3, atol=1e-15
    )
    assert channel_from_json({"kind": "dephasing", "p3": 0.2}).p == (0.8, 0.0, 0.0, 0.2)
    assert channel_from_json({"kind": "identity"}) == IDENTITY
    ch = PauliChannel((0.25, 0.25, 0.25, 0.25))
    assert channel_from_json(ch.to_json()) == ch
    for bad in ({}, {"kind": "amplitude"}, [1, 0, 0, 0]):
        with pytest.raises(DomainError):
            channel_from_json(bad)


def test_output_is_a_state(rng):
    ch = PauliChannel(tuple(rng.dirichlet(np.ones(4))))
    out = apply_two_sided(TwoQubitState(random_dm(rng, 1)), ch, ch)
    assert out.positive
    assert np.trace(out.dm).real == pytest.approx(1)
