"""Pauli strings as packed symplectic bit labels, and the symplectic Walsh-Hadamard transform.

Layout: qubit j (0-based, leftmost in text form) owns the two bits
``x`` at position ``2*(n-1-j)+1`` and ``z`` at ``2*(n-1-j)``, so reading the
integer MSB-first gives ``x1 z1 x2 z2 ...``.  That integer is also the array
index used for every function on Paulis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "MAX_QUBITS",
    "DimensionError",
    "PauliString",
    "x_mask",
    "z_mask",
    "swap_xz",
    "symplectic_inner",
    "weight",
    "multiply_labels",
    "parity",
    "weights_table",
    "symplectic_parity_array",
    "walsh_hadamard",
    "walsh_hadamard_inplace",
    "naive_walsh_hadamard",
    "boolean_hadamard",
    "enumerate_paulis_of_weight",
    "count_paulis_of_weight",
]

MAX_QUBITS = 32

_LETTER_TO_BITS = {"I": 0, "Z": 1, "X": 2, "Y": 3}
_BITS_TO_LETTER = "IZXY"


class DimensionError(ValueError):
    """Operands disagree on qubit count, or an array has the wrong length."""


def x_mask(n: int) -> int:
    return int("10" * n, 2) if n else 0


def z_mask(n: int) -> int:
    return int("01" * n, 2) if n else 0


def swap_xz(bits: int, n: int) -> int:
    """Exchange the x and z bit of every qubit."""
    return ((bits & x_mask(n)) >> 1) | ((bits & z_mask(n)) << 1)


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0 or n > MAX_QUBITS:
        raise DimensionError(f"qubit count must be in [0, {MAX_QUBITS}], got {n!r}")


@dataclass(frozen=True, order=True)
class PauliString:
    """Phase-free Pauli label on ``n`` qubits."""

    bits: int
    n: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> (2 * self.n):
            raise DimensionError(f"label {self.bits} does not fit in {2 * self.n} bits")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(0, n)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        bits = 0
        for ch in text:
            try:
                bits = (bits << 2) | _LETTER_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r} in {text!r}") from None
        return cls(bits, len(text))

    def to_text(self) -> str:
        return "".join(_BITS_TO_LETTER[(self.bits >> (2 * (self.n - 1 - j))) & 3] for j in range(self.n))

    def __str__(self) -> str:
        return self.to_text()

    def qubit(self, j: int) -> int:
        """Two-bit label (x<<1 | z) of qubit j."""
        return (self.bits >> (2 * (self.n - 1 - j))) & 3

    @property
    def weight(self) -> int:
        return weight(self)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply_labels(self, other)


def _same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")


def symplectic_inner(a: PauliString, b: PauliString) -> int:
    """1 iff P_a and P_b anticommute."""
    _same_n(a, b)
    return (a.bits & swap_xz(b.bits, b.n)).bit_count() & 1


def weight(a: PauliString) -> int:
    return ((a.bits | (a.bits >> 1)) & z_mask(a.n)).bit_count()


def multiply_labels(a: PauliString, b: PauliString) -> PauliString:
    _same_n(a, b)
    return PauliString(a.bits ^ b.bits, a.n)


def parity(x: np.ndarray) -> np.ndarray:
    """Bit parity of each unsigned 64-bit entry."""
    return (np.bitwise_count(np.asarray(x, dtype=np.uint64)) & 1).astype(np.int64)


def weights_table(n: int) -> np.ndarray:
    """Weight of every label 0 .. 4^n - 1."""
    idx = np.arange(4**n, dtype=np.uint64)
    occupied = (idx | (idx >> np.uint64(1))) & np.uint64(z_mask(n))
    return np.bitwise_count(occupied).astype(np.int64)


def symplectic_parity_array(b: int, labels: np.ndarray, n: int) -> np.ndarray:
    """<b, v> for every v in ``labels``."""
    partner = np.uint64(swap_xz(int(b), n))
    return parity(np.asarray(labels, dtype=np.uint64) & partner)


def _levels(length: int) -> int:
    n = (length.bit_length() - 1) // 2
    if length < 1 or 4**n != length:
        raise DimensionError(f"length {length} is not a power of 4")
    return n


def walsh_hadamard_inplace(buf: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Symplectic transform F(b) = sum_a (-1)^<a,b> f(a), overwriting ``buf``.

    Each qubit gets two butterfly stages: first across its z bit, then across
    its x bit with the difference/sum outputs crossed, which is what turns the
    ordinary Hadamard kernel into the symplectic one.
    """
    n = _levels(buf.shape[0])
    for q in range(n):
        view = buf.reshape(4**q, 2, 2, 4 ** (n - 1 - q))
        i0, i1, i2, i3 = view[:, 0, 0], view[:, 0, 1], view[:, 1, 0], view[:, 1, 1]
        # z stage: (I,Z) and (X,Y) pairs
        s0 = i0 + i1
        d0 = i0 - i1
        s1 = i2 + i3
        d1 = i2 - i3
        # x stage, crossed
        i0[...] = s0 + s1
        i1[...] = s0 - s1
        i2[...] = d0 + d1
        i3[...] = d0 - d1
    if inverse:
        buf /= 4**n
    return buf


def walsh_hadamard(values, inverse: bool = False) -> np.ndarray:
    """Out-of-place transform; ``inverse`` includes the 4^-n factor."""
    buf = np.array(values, dtype=float, copy=True)
    if buf.ndim != 1:
        raise DimensionError("expected a 1-d array")
    return walsh_hadamard_inplace(buf, inverse=inverse)


def naive_walsh_hadamard(values, inverse: bool = False) -> np.ndarray:
    """Direct O(16^n) double sum, kept as a reference."""
    f = np.asarray(values, dtype=float)
    n = _levels(f.shape[0])
    idx = np.arange(4**n, dtype=np.uint64)
    out = np.empty_like(f)
    for b in range(4**n):
        signs = 1 - 2 * symplectic_parity_array(b, idx, n)
        out[b] = float(np.dot(signs, f))
    return out / 4**n if inverse else out


def boolean_hadamard(values) -> np.ndarray:
    """Ordinary Hadamard transform F(s) = sum_c (-1)^{s.c} f(c) over m bits."""
    buf = np.array(values, dtype=float, copy=True)
    size = buf.shape[0]
    if size < 1 or size & (size - 1):
        raise DimensionError(f"length {size} is not a power of 2")
    m = size.bit_length() - 1
    for q in range(m):
        view = buf.reshape(2**q, 2, 2 ** (m - 1 - q))
        lo = view[:, 0].copy()
        view[:, 0] += view[:, 1]
        view[:, 1] = lo - view[:, 1]
    return buf


def count_paulis_of_weight(n: int, w: int) -> int:
    return math.comb(n, w) * 3**w


def enumerate_paulis_of_weight(n: int, w: int) -> Iterator[PauliString]:
    """All weight-w labels: supports in combination order, then letters X, Y, Z."""
    _check_n(n)
    if w < 0 or w > n:
        raise ValueError(f"weight {w} out of range for n={n}")
    for support in itertools.combinations(range(n), w):
        for letters in itertools.product((2, 3, 1), repeat=w):
            bits = 0
            for j, code in zip(support, letters):
                bits |= code << (2 * (n - 1 - j))
            yield PauliString(bits, n)
