"""Pauli channels stored as both error rates p(a) and eigenvalues lambda(b)."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .pauli import DimensionError, PauliString, walsh_hadamard

__all__ = [
    "InvalidChannelError",
    "PauliChannel",
    "channel_from_error_rates",
    "channel_from_eigenvalues",
    "identity_channel",
    "depolarizing_channel",
    "spike_channel",
    "random_channel",
]

NEGATIVE_SLACK = 1e-12
SUM_TOL = 1e-9


class InvalidChannelError(ValueError):
    """Error rates are not a probability distribution."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _qubits_of(length: int) -> int:
    n = (length.bit_length() - 1) // 2
    if 4**n != length:
        raise DimensionError(f"expected 4^n entries, got {length}")
    return n


def _validate(p: np.ndarray) -> None:
    worst = int(np.argmin(p))
    if p[worst] < -NEGATIVE_SLACK:
        raise InvalidChannelError(f"error rate p[{worst}] = {p[worst]:.3e} is negative")
    total = float(p.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidChannelError(f"error rates sum to {total!r}, not 1")


@dataclass(frozen=True, eq=False)
class PauliChannel:
    n: int
    error_rates: np.ndarray
    eigenvalues: np.ndarray

    def eigenvalue(self, b: PauliString) -> float:
        if b.n != self.n:
            raise DimensionError(f"label has {b.n} qubits, channel has {self.n}")
        return float(self.eigenvalues[b.bits])

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "p": [float(v) for v in self.error_rates]})

    @classmethod
    def from_json(cls, text: str) -> "PauliChannel":
        doc = json.loads(text)
        ch = channel_from_error_rates(doc["p"])
        if ch.n != doc["n"]:
            raise DimensionError(f"n={doc['n']} but p has {len(doc['p'])} entries")
        return ch


def channel_from_error_rates(p) -> PauliChannel:
    p = np.asarray(p, dtype=float)
    n = _qubits_of(p.shape[0])
    _validate(p)
    return PauliChannel(n, _frozen(p), _frozen(walsh_hadamard(p)))


def channel_from_eigenvalues(lam) -> PauliChannel:
    lam = np.asarray(lam, dtype=float)
    n = _qubits_of(lam.shape[0])
    p = walsh_hadamard(lam, inverse=True)
    _validate(p)
    return PauliChannel(n, _frozen(p), _frozen(lam))


def identity_channel(n: int) -> PauliChannel:
    p = np.zeros(4**n)
    p[0] = 1.0
    return channel_from_error_rates(p)


def depolarizing_channel(n: int) -> PauliChannel:
    """Completely depolarizing: lambda(b) = 1 only at b = 0."""
    lam = np.zeros(4**n)
    lam[0] = 1.0
    return channel_from_eigenvalues(lam)


def spike_channel(n: int, e: PauliString, s: int, eps: float) -> PauliChannel:
    """Depolarizing except for one eigenvalue lambda(e) = 2*s*eps."""
    if e.n != n:
        raise DimensionError(f"label has {e.n} qubits, expected {n}")
    if e.bits == 0:
        raise ValueError("spike position must be a non-identity label")
    if s not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {s}")
    if not 0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    lam = np.zeros(4**n)
    lam[0] = 1.0
    lam[e.bits] = 2 * s * eps
    return channel_from_eigenvalues(lam)


def random_channel(n: int, seed: int) -> PauliChannel:
    """Error rates from normalized exponential draws (a flat Dirichlet)."""
    rng = np.random.default_rng(seed)
    draws = rng.exponential(size=4**n)
    return channel_from_error_rates(draws / draws.sum())
