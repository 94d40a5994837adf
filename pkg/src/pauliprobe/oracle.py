"""Dense-matrix reference implementations for small systems.

Nothing here uses the transforms or closed forms of the other modules: every
quantity is built from explicit matrices so it can serve as an independent check.
Joint spaces are ordered ancilla first, system last.
"""

from __future__ import annotations

from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .channel import PauliChannel
from .pauli import PauliString

__all__ = [
    "MAX_DIM",
    "CapacityError",
    "dense_pauli",
    "bell_basis",
    "bell_povm",
    "dense_channel_apply",
    "dense_probe_density",
    "dense_outcome_distribution",
    "dense_overlap",
    "reduced_state",
    "dense_partial_trace_entropy",
    "dense_stabilizer_state",
    "dense_syndrome_distribution",
    "dense_weighted_pauli_sum",
    "dense_max_eigenvalue",
]

MAX_DIM = 64

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class CapacityError(ValueError):
    """Requested matrix exceeds the dense size cap."""


def _check_dim(dim: int) -> None:
    if dim > MAX_DIM:
        raise CapacityError(f"dimension {dim} exceeds cap {MAX_DIM}")


def _single(code: int) -> np.ndarray:
    x, z = code >> 1, code & 1
    m = np.linalg.matrix_power(_X, x) @ np.linalg.matrix_power(_Z, z)
    return (1j ** (x * z)) * m


def dense_pauli(a: PauliString) -> np.ndarray:
    """Hermitian matrix i^{x z} X^x Z^z tensored over qubits, qubit 0 most significant."""
    _check_dim(2**a.n)
    if a.n == 0:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, [_single(a.qubit(j)) for j in range(a.n)])


def bell_basis(n: int) -> np.ndarray:
    """Column v is (I (x) P_v)|Omega>/sqrt(2^n) on ancilla (x) system."""
    d = 2**n
    _check_dim(d * d)
    omega = np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)
    cols = [np.kron(np.eye(d), dense_pauli(PauliString(v, n))) @ omega for v in range(4**n)]
    return np.stack(cols, axis=1)


def bell_povm(n: int) -> list[np.ndarray]:
    basis = bell_basis(n)
    return [np.outer(basis[:, v], basis[:, v].conj()) for v in range(basis.shape[1])]


def dense_channel_apply(channel: PauliChannel, rho: np.ndarray) -> np.ndarray:
    """Kraus sum over the error rates, acting on the last ``channel.n`` qubits."""
    dim = rho.shape[0]
    _check_dim(dim)
    d_sys = 2**channel.n
    d_anc = dim // d_sys
    out = np.zeros_like(rho, dtype=complex)
    for a, p in enumerate(channel.error_rates):
        if p == 0.0:
            continue
        k = np.kron(np.eye(d_anc), dense_pauli(PauliString(a, channel.n)))
        out += p * (k @ rho @ k.conj().T)
    return out


def dense_probe_density(probe, phases: Optional[Sequence[float]] = None) -> np.ndarray:
    """Explicit input state on ancilla (x) system.

    For the alpha family the amplitudes are sqrt(|c_a|^2), optionally times
    exp(i*phase_a).  The weights are written out here from the per-pair
    coefficients 1/2 (identity) and 1/6 (each non-identity letter).
    """
    n = probe.n
    basis = bell_basis(n)
    if hasattr(probe, "alpha"):
        sq = np.empty(4**n)
        for a in range(4**n):
            lab = PauliString(a, n)
            per = [0.5 if lab.qubit(j) == 0 else 1 / 6 for j in range(n)]
            sq[a] = (1 - probe.alpha) * float(np.prod(per))
        sq[0] += probe.alpha
        amps = np.sqrt(sq).astype(complex)
        if phases is not None:
            amps = amps * np.exp(1j * np.asarray(phases, dtype=float))
        psi = basis @ amps
        return np.outer(psi, psi.conj())
    d2 = 4**n
    bell = np.outer(basis[:, 0], basis[:, 0].conj())
    flat = (1 - probe.lam_w) / (d2 - 1)
    return flat * np.eye(d2, dtype=complex) + (probe.lam_w - flat) * bell


def dense_outcome_distribution(channel: PauliChannel, probe, phases=None) -> np.ndarray:
    rho = dense_channel_apply(channel, dense_probe_density(probe, phases))
    return np.array([np.trace(e @ rho).real for e in bell_povm(probe.n)])


def dense_overlap(probe, b: PauliString, phases=None) -> float:
    """Tr[(P_b^T (x) P_b) rho]."""
    pb = dense_pauli(b)
    rho = dense_probe_density(probe, phases)
    return float(np.trace(np.kron(pb.T, pb) @ rho).real)


def reduced_state(rho: np.ndarray, n_anc: int, keep: str = "ancilla") -> np.ndarray:
    dim = rho.shape[0]
    _check_dim(dim)
    d_anc = 2**n_anc
    d_sys = dim // d_anc
    t = rho.reshape(d_anc, d_sys, d_anc, d_sys)
    if keep == "ancilla":
        return np.einsum("ijkj->ik", t)
    if keep == "system":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'ancilla' or 'system', got {keep!r}")


def dense_partial_trace_entropy(rho: np.ndarray, keep: str = "ancilla", n_anc: Optional[int] = None) -> float:
    """Von Neumann entropy (bits) of one side; default split is half and half."""
    if n_anc is None:
        n_anc = (rho.shape[0].bit_length() - 1) // 2
    ev = np.linalg.eigvalsh(reduced_state(rho, n_anc, keep))
    ev = ev[ev > 1e-14]
    return float(-(ev * np.log2(ev)).sum())


def _syndrome_projector(gens: Sequence[PauliString], s: int) -> np.ndarray:
    dim = 2 ** gens[0].n
    proj = np.eye(dim, dtype=complex)
    for j, g in enumerate(gens):
        sign = -1.0 if (s >> j) & 1 else 1.0
        proj = proj @ (np.eye(dim) + sign * dense_pauli(g)) / 2
    return proj


def dense_stabilizer_state(gens: Sequence[PauliString]) -> np.ndarray:
    """Projector onto the joint +1 eigenspace of the generators."""
    _check_dim(2 ** gens[0].n)
    return _syndrome_projector(gens, 0)


def dense_syndrome_distribution(gens: Sequence[PauliString], channel: PauliChannel) -> np.ndarray:
    """Probability of each syndrome s, where bit j of s is the sign outcome of generator j."""
    rho = dense_channel_apply(channel, dense_stabilizer_state(gens))
    return np.array([np.trace(_syndrome_projector(gens, s) @ rho).real for s in range(2 ** len(gens))])


def dense_weighted_pauli_sum(n: int, x: float) -> np.ndarray:
    """sum_e Pr(e) P_e (x) P_e with Pr(e) proportional to x^|e|."""
    _check_dim(4**n)
    total = np.zeros((4**n, 4**n), dtype=complex)
    for e in range(4**n):
        lab = PauliString(e, n)
        pe = dense_pauli(lab)
        total += x**lab.weight * np.kron(pe, pe)
    return total / (1 + 3 * x) ** n


def dense_max_eigenvalue(n: int, x: float) -> float:
    return float(np.linalg.eigvalsh(dense_weighted_pauli_sum(n, x)).max())
