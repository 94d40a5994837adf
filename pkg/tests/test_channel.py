import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pauliprobe.channel import (
    InvalidChannelError,
    PauliChannel,
    channel_from_eigenvalues,
    channel_from_error_rates,
    depolarizing_channel,
    identity_channel,
    random_channel,
    spike_channel,
)
from pauliprobe.oracle import dense_channel_apply, dense_pauli
from pauliprobe.pauli import PauliString, naive_walsh_hadamard, symplectic_inner


def test_identity_channel():
    ch = channel_from_error_rates(np.eye(16)[0])
    np.testing.assert_allclose(ch.eigenvalues, np.ones(16))
    assert identity_channel(2).error_rates[0] == 1


def test_depolarizing_both_directions():
    ch = channel_from_error_rates(np.full(16, 1 / 16))
    np.testing.assert_allclose(ch.eigenvalues, np.eye(16)[0], atol=1e-15)
    np.testing.assert_allclose(depolarizing_channel(2).error_rates, np.full(16, 1 / 16), atol=1e-15)
    np.testing.assert_allclose(channel_from_eigenvalues(np.ones(16)).error_rates, np.eye(16)[0], atol=1e-15)


def test_random_roundtrip():
    ch = random_channel(2, 11)
    back = channel_from_eigenvalues(ch.eigenvalues)
    np.testing.assert_allclose(back.error_rates, ch.error_rates, atol=1e-9)
    np.testing.assert_allclose(ch.eigenvalues, naive_walsh_hadamard(ch.error_rates), atol=1e-9)


@pytest.mark.parametrize("text", ["XY", "ZI", "YY"])
def test_two_term_eigenvalues_give_closed_form_rates(text):
    e = PauliString.from_text(text)
    ch = spike_channel(2, e, 1, 0.1)
    expected = [(1 + 0.2 * (-1) ** symplectic_inner(PauliString(a, 2), e)) / 16 for a in range(16)]
    np.testing.assert_allclose(ch.error_rates, expected, atol=1e-15)


def test_spike_readback():
    e = PauliString.from_text("XZY")
    ch = spike_channel(3, e, -1, 0.1)
    assert ch.eigenvalue(e) == pytest.approx(-0.2, abs=1e-15)
    nonzero = np.flatnonzero(np.abs(ch.eigenvalues) > 1e-12)
    assert list(nonzero) == sorted([0, e.bits])
    edge = spike_channel(3, e, 1, 0.5)
    assert edge.eigenvalue(e) == 1.0
    assert edge.error_rates.min() >= 0


def test_spike_rejections():
    with pytest.raises(ValueError):
        spike_channel(2, PauliString(0, 2), 1, 0.1)
    with pytest.raises(ValueError):
        spike_channel(2, PauliString(1, 2), 1, 0.6)
    with pytest.raises(ValueError):
        spike_channel(2, PauliString(1, 2), 1, 0.0)


def test_invalid_rates_named():
    p = np.full(4, 0.25)
    p[2] = -0.1
    p[0] += 0.1
    with pytest.raises(InvalidChannelError, match=r"p\[2\]"):
        channel_from_error_rates(p)
    with pytest.raises(InvalidChannelError):
        channel_from_error_rates(np.full(4, 0.3))
    lam = np.ones(4)
    lam[1] = 1.5
    with pytest.raises(InvalidChannelError):
        channel_from_eigenvalues(lam)


def test_immutable():
    ch = random_channel(1, 0)
    with pytest.raises(ValueError):
        ch.eigenvalues[0] = 2.0


@given(st.integers(1, 4), st.integers(0, 2**32))
def test_random_channel_invariants(n, seed):
    ch = random_channel(n, seed)
    assert abs(ch.eigenvalues[0] - 1) <= 1e-12
    assert np.all(np.abs(ch.eigenvalues) <= 1 + 1e-12)
    assert ch.error_rates.min() >= 0
    again = random_channel(n, seed)
    np.testing.assert_array_equal(ch.error_rates, again.error_rates)


def test_json_roundtrip():
    ch = random_channel(2, 4)
    doc = json.loads(ch.to_json())
    assert set(doc) == {"n", "p"}
    back = PauliChannel.from_json(ch.to_json())
    np.testing.assert_array_equal(back.error_rates, ch.error_rates)


@pytest.mark.parametrize("n", [1, 2])
def test_dense_eigen_relation(n):
    ch = random_channel(n, 21)
    for b in range(4**n):
        pb = dense_pauli(PauliString(b, n))
        np.testing.assert_allclose(dense_channel_apply(ch, pb), ch.eigenvalues[b] * pb, atol=1e-12)
