import itertools

import numpy as np
import pytest

from pauliprobe.channel import depolarizing_channel, identity_channel, random_channel
from pauliprobe.oracle import (
    CapacityError,
    bell_povm,
    dense_channel_apply,
    dense_max_eigenvalue,
    dense_outcome_distribution,
    dense_overlap,
    dense_partial_trace_entropy,
    dense_pauli,
    dense_probe_density,
    reduced_state,
)
from pauliprobe.pauli import PauliString, symplectic_inner
from pauliprobe.probes import AlphaProbe, WernerProbe, bell_outcome_distribution, entanglement_entropy, overlap_E


def test_y_matrix():
    np.testing.assert_array_equal(dense_pauli(PauliString.from_text("Y")), np.array([[0, -1j], [1j, 0]]))


@pytest.mark.parametrize("n", [1, 2])
def test_trace_orthogonality_and_commutation(n):
    mats = [dense_pauli(PauliString(a, n)) for a in range(4**n)]
    for a, b in itertools.product(range(4**n), repeat=2):
        tr = np.trace(mats[a] @ mats[b])
        assert tr == pytest.approx(2**n if a == b else 0, abs=1e-12)
        sign = (-1) ** symplectic_inner(PauliString(a, n), PauliString(b, n))
        np.testing.assert_allclose(mats[a] @ mats[b], sign * mats[b] @ mats[a], atol=1e-12)


def test_capacity():
    with pytest.raises(CapacityError):
        dense_pauli(PauliString(0, 7))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_povm_complete(n):
    total = sum(bell_povm(n))
    np.testing.assert_allclose(total, np.eye(4**n), atol=1e-12)


def test_channel_apply_examples():
    rho = dense_probe_density(AlphaProbe(2, 0.4))
    np.testing.assert_allclose(dense_channel_apply(identity_channel(2), rho), rho, atol=1e-14)
    out = dense_channel_apply(depolarizing_channel(2), rho)
    np.testing.assert_allclose(reduced_state(out, 2, "system"), np.eye(4) / 4, atol=1e-14)
    np.testing.assert_allclose(reduced_state(out, 2, "ancilla"), reduced_state(rho, 2, "ancilla"), atol=1e-14)


def test_bell_probe_matches_pauli_sum():
    n = 2
    expected = sum(np.kron(dense_pauli(PauliString(a, n)).T, dense_pauli(PauliString(a, n))) for a in range(16)) / 16
    np.testing.assert_allclose(dense_probe_density(AlphaProbe(n, 1.0)), expected, atol=1e-14)


def test_separable_probe_is_product():
    sep = (np.eye(2) + (dense_pauli(PauliString.from_text("X")) + dense_pauli(PauliString.from_text("Y")) + dense_pauli(PauliString.from_text("Z"))) / np.sqrt(3)) / 2
    for n in (1, 2):
        anc = sep.T if n == 1 else np.kron(sep.T, sep.T)
        sys = sep if n == 1 else np.kron(sep, sep)
        np.testing.assert_allclose(dense_probe_density(AlphaProbe(n, 0.0)), np.kron(anc, sys), atol=1e-14)


@pytest.mark.parametrize("probe", [AlphaProbe(1, 0.3), AlphaProbe(2, 0.7), WernerProbe(2, 0.2), WernerProbe(1, 0.9)])
def test_probe_is_state(probe):
    rho = dense_probe_density(probe)
    assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
    assert np.linalg.eigvalsh(rho).min() >= -1e-12
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)


@pytest.mark.parametrize("probe", [AlphaProbe(2, 0.3), WernerProbe(2, 0.45), AlphaProbe(1, 0.0)])
def test_overlap_closed_form(probe):
    for b in range(4**probe.n):
        lab = PauliString(b, probe.n)
        assert overlap_E(probe, lab) == pytest.approx(dense_overlap(probe, lab), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_outcome_distribution_matches(seed):
    ch = random_channel(2, seed)
    probe = AlphaProbe(2, 0.3)
    dense = dense_outcome_distribution(ch, probe)
    assert dense.sum() == pytest.approx(1, abs=1e-10)
    np.testing.assert_allclose(bell_outcome_distribution(ch, probe), dense, atol=1e-9)


def test_identity_bell_outcome():
    np.testing.assert_allclose(dense_outcome_distribution(identity_channel(2), AlphaProbe(2, 1.0)), np.eye(16)[0], atol=1e-12)


def test_entropy_examples():
    assert dense_partial_trace_entropy(dense_probe_density(AlphaProbe(2, 1.0))) == pytest.approx(2, abs=1e-12)
    assert dense_partial_trace_entropy(dense_probe_density(AlphaProbe(2, 0.0))) == pytest.approx(0, abs=1e-12)
    for n in (1, 2, 3):
        rho = dense_probe_density(AlphaProbe(n, 0.5))
        assert dense_partial_trace_entropy(rho) == pytest.approx(entanglement_entropy(AlphaProbe(n, 0.5)), abs=1e-9)
        assert dense_partial_trace_entropy(rho, "system") == pytest.approx(dense_partial_trace_entropy(rho), abs=1e-9)


@pytest.mark.parametrize("n,x,expected", [(1, 1.0, 0.5), (2, 0.5, 0.36)])
def test_max_eigenvalue_examples(n, x, expected):
    assert dense_max_eigenvalue(n, x) == pytest.approx(expected, abs=1e-9)


def test_amplitude_phases():
    # overlaps and outcome statistics ignore the phases; the entanglement entropy does not
    rng = np.random.default_rng(8)
    probe = AlphaProbe(2, 0.3)
    ch = random_channel(2, 8)
    for _ in range(5):
        phases = rng.uniform(0, 2 * np.pi, 16)
        np.testing.assert_allclose(dense_outcome_distribution(ch, probe, phases), bell_outcome_distribution(ch, probe), atol=1e-12)
        for b in range(16):
            assert dense_overlap(probe, PauliString(b, 2), phases) == pytest.approx(overlap_E(probe, PauliString(b, 2)), abs=1e-12)
    phases = rng.uniform(0, 2 * np.pi, 16)
    dense = dense_partial_trace_entropy(dense_probe_density(probe, phases))
    assert abs(dense - entanglement_entropy(probe)) > 1e-3
