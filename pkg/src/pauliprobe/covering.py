"""Stabilizer groups over GF(2), uniform covering families, greedy covers and syndrome learning.

Joint labels put the k ancilla qubits first and the n system qubits last, so
the system part of a label is its low 2n bits.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .channel import PauliChannel
from .pauli import (
    DimensionError,
    PauliString,
    boolean_hadamard,
    enumerate_paulis_of_weight,
    swap_xz,
    symplectic_parity_array,
    z_mask,
)
from .probes import _clean_distribution, sample_from_table

__all__ = [
    "NotCoveredError",
    "StabilizerGroup",
    "Covering",
    "CoverageReport",
    "SyndromeTable",
    "gf2_reduce",
    "gf2_rank",
    "in_span",
    "enumerate_group",
    "group_contains",
    "sys_part",
    "anc_part",
    "cycle_letter",
    "build_uniform_low",
    "build_uniform_high",
    "build_bell_generators",
    "build_uniform_ancilla_low",
    "build_uniform_ancilla_high",
    "UniformFamily",
    "uniform_family",
    "sigma_formula",
    "measured_sigma",
    "target_set",
    "cn_upper_bound",
    "greedy_cover",
    "verify_covering",
    "destabilizers",
    "syndrome_distribution",
    "sample_syndromes",
    "preimage",
    "estimate_from_syndromes",
]

_CODE = {"X": 2, "Y": 3, "Z": 1}
_NEXT = {2: 3, 3: 1, 1: 2}  # X -> Y -> Z -> X


class NotCoveredError(ValueError):
    """The label is not in the system image of the group."""


# GF(2) helpers on int bit-vectors


def gf2_reduce(vectors: Iterable[int]) -> list[tuple[int, int, int]]:
    """Reduced echelon form as (pivot_bit, row, combination_mask) triples.

    ``combination_mask`` records which input vectors XOR to ``row``.  Pivots
    are chosen from the highest set bit, processing inputs in order.
    """
    rows: list[list[int]] = []
    for i, v in enumerate(vectors):
        comb = 1 << i
        for r in rows:
            if (v >> r[0]) & 1:
                v ^= r[1]
                comb ^= r[2]
        if v == 0:
            continue
        pivot = v.bit_length() - 1
        for r in rows:
            if (r[1] >> pivot) & 1:
                r[1] ^= v
                r[2] ^= comb
        rows.append([pivot, v, comb])
    return [tuple(r) for r in rows]


def gf2_rank(vectors: Iterable[int]) -> int:
    return len(gf2_reduce(vectors))


def in_span(vectors: Sequence[int], target: int) -> bool:
    for pivot, row, _ in gf2_reduce(vectors):
        if (target >> pivot) & 1:
            target ^= row
    return target == 0


def _commute(a: int, b: int, n: int) -> bool:
    return (a & swap_xz(b, n)).bit_count() % 2 == 0


@dataclass(frozen=True)
class StabilizerGroup:
    """Group generated by k+n commuting, independent labels on k+n qubits."""

    generators: tuple[int, ...]
    n_total: int
    ancilla_count: int = 0

    def __post_init__(self):
        gens = self.generators
        if len(gens) != self.n_total:
            raise DimensionError(f"need {self.n_total} generators, got {len(gens)}")
        for g in gens:
            if g < 0 or g >> (2 * self.n_total):
                raise DimensionError(f"generator {g} does not fit {self.n_total} qubits")
        for a, b in itertools.combinations(gens, 2):
            if not _commute(a, b, self.n_total):
                raise ValueError("generators do not commute")
        if gf2_rank(gens) != len(gens):
            raise ValueError("generators are not independent")

    @classmethod
    def from_labels(cls, labels: Sequence[PauliString], ancilla_count: int = 0) -> "StabilizerGroup":
        n_total = labels[0].n
        return cls(tuple(lab.bits for lab in labels), n_total, ancilla_count)

    @property
    def n_system(self) -> int:
        return self.n_total - self.ancilla_count

    def generator_labels(self) -> list[PauliString]:
        return [PauliString(g, self.n_total) for g in self.generators]

    def elements(self) -> np.ndarray:
        """All group labels; entry c is the product of generators j with bit j of c set."""
        elems = np.zeros(1, dtype=np.uint64)
        for g in self.generators:
            elems = np.concatenate([elems, elems ^ np.uint64(g)])
        return elems

    def system_elements(self) -> np.ndarray:
        return self.elements() & np.uint64((1 << (2 * self.n_system)) - 1)


def enumerate_group(group: StabilizerGroup) -> Iterator[PauliString]:
    for a in group.elements():
        yield PauliString(int(a), group.n_total)


def group_contains(group: StabilizerGroup, a: PauliString) -> bool:
    if a.n != group.n_total:
        raise DimensionError(f"label has {a.n} qubits, group acts on {group.n_total}")
    return in_span(group.generators, a.bits)


def sys_part(a: PauliString, k: int) -> PauliString:
    n = a.n - k
    return PauliString(a.bits & ((1 << (2 * n)) - 1), n)


def anc_part(a: PauliString, k: int) -> PauliString:
    return PauliString(a.bits >> (2 * (a.n - k)), k)


def cycle_letter(code: int) -> int:
    return _NEXT[code]


def _site(n_total: int, qubit: int, code: int) -> int:
    return code << (2 * (n_total - 1 - qubit))


def _codes(letters) -> list[int]:
    out = []
    for ch in letters:
        if ch not in _CODE:
            raise ValueError(f"expected a letter from X, Y, Z, got {ch!r}")
        out.append(_CODE[ch])
    return out


# constructors


def build_bell_generators(k: int, n: int, system_qubits: Sequence[int]) -> list[int]:
    """X-X and Z-Z pairs joining ancilla j with system qubit system_qubits[j]."""
    if len(system_qubits) != k or len(set(system_qubits)) != k:
        raise DimensionError("need k distinct system qubits")
    if k > n or any(not 0 <= s < n for s in system_qubits):
        raise DimensionError("system qubit index out of range")
    total = k + n
    gens = []
    for j, s in enumerate(system_qubits):
        for code in (2, 1):
            gens.append(_site(total, j, code) | _site(total, k + s, code))
    return gens


def build_uniform_ancilla_low(n: int, k: int, w: int, system_qubits: Sequence[int], letters) -> StabilizerGroup:
    """Bell pairs on ``system_qubits`` plus one fixed single-site generator on each other system qubit."""
    if 2 * w > k + n:
        raise ValueError(f"low construction needs 2w <= k+n, got w={w}, k={k}, n={n}")
    rest = [q for q in range(n) if q not in set(system_qubits)]
    codes = _codes(letters)
    if len(codes) != len(rest):
        raise DimensionError(f"need {len(rest)} letters, got {len(codes)}")
    gens = build_bell_generators(k, n, system_qubits)
    gens += [_site(k + n, k + q, c) for q, c in zip(rest, codes)]
    return StabilizerGroup(tuple(gens), k + n, k)


def build_uniform_low(n: int, letters) -> StabilizerGroup:
    """Single-site generators, letter j on qubit j."""
    return build_uniform_ancilla_low(n, 0, 0, (), letters)


def build_uniform_ancilla_high(
    n: int, k: int, w: int, system_qubits: Sequence[int], g: PauliString, erase: Sequence[int], chain: Sequence[int]
) -> StabilizerGroup:
    """Bell pairs on ``system_qubits`` plus the string ``g`` on the remaining system qubits.

    ``erase`` (size 2(n-w)) gets one single-site copy of g per qubit; ``chain``
    (size 2w-n-k) gets cycled copies of g on each adjacent pair.
    """
    if 2 * w <= k + n or w > n:
        raise ValueError(f"high construction needs k+n < 2w <= 2n, got w={w}, k={k}, n={n}")
    if len(erase) != 2 * (n - w) or len(chain) != 2 * w - n - k:
        raise DimensionError("partition sizes do not match (n, k, w)")
    rest = set(erase) | set(chain)
    if len(rest) != n - k or rest & set(system_qubits) or len(rest | set(system_qubits)) != n:
        raise DimensionError("Bell qubits, erase set and chain must partition the system")
    if g.n != n:
        raise DimensionError(f"g must act on {n} system qubits")
    support = {q for q in range(n) if g.qubit(q)}
    if support != rest:
        raise ValueError("g must be non-identity exactly off the Bell qubits")
    total = k + n
    gens = build_bell_generators(k, n, system_qubits)
    gens.append(g.bits)
    gens += [_site(total, k + q, g.qubit(q)) for q in erase]
    for q0, q1 in zip(chain, chain[1:]):
        gens.append(_site(total, k + q0, _NEXT[g.qubit(q0)]) | _site(total, k + q1, _NEXT[g.qubit(q1)]))
    return StabilizerGroup(tuple(gens), total, k)


def build_uniform_high(n: int, w: int, g: PauliString, erase: Sequence[int], chain: Sequence[int]) -> StabilizerGroup:
    return build_uniform_ancilla_high(n, 0, w, (), g, erase, chain)


# families and covering powers


@dataclass(frozen=True)
class UniformFamily:
    """Lazily enumerated uniform family for weight ``w`` with ``k`` ancillas."""

    n: int
    k: int
    w: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n or not 0 <= self.w <= self.n:
            raise ValueError(f"need 0 <= k, w <= n, got n={self.n}, k={self.k}, w={self.w}")

    @property
    def low(self) -> bool:
        return 2 * self.w <= self.k + self.n

    def __len__(self) -> int:
        n, k, w = self.n, self.k, self.w
        size = math.comb(n, k) * 3 ** (n - k)
        return size if self.low else size * math.comb(n - k, 2 * w - n - k)

    def __iter__(self) -> Iterator[StabilizerGroup]:
        n, k, w = self.n, self.k, self.w
        for bell in itertools.combinations(range(n), k):
            rest = [q for q in range(n) if q not in bell]
            if self.low:
                for letters in itertools.product("XYZ", repeat=n - k):
                    yield build_uniform_ancilla_low(n, k, w, bell, letters)
                continue
            for chain in itertools.combinations(rest, 2 * w - n - k):
                erase = [q for q in rest if q not in chain]
                for codes in itertools.product((2, 3, 1), repeat=n - k):
                    bits = 0
                    for q, c in zip(rest, codes):
                        bits |= c << (2 * (n - 1 - q))
                    yield build_uniform_ancilla_high(n, k, w, bell, PauliString(bits, n), erase, chain)


def uniform_family(n: int, k: int, w: int) -> UniformFamily:
    return UniformFamily(n, k, w)


def sigma_formula(n: int, k: int, w: int) -> tuple[int, bool]:
    """(covering power, exact?).  The high regime only gives a lower bound."""
    if 2 * w <= k + n:
        return sum(math.comb(k, m) * 3**m * math.comb(n - k, w - m) for m in range(min(k, w) + 1)), True
    erase = 2 * (n - w)
    scale = 2 ** (2 * w - n - k - 1)
    total = 0
    for m in range(k + 1):
        pick = (n - k) - (w - m)
        if 0 <= pick <= erase:
            total += math.comb(k, m) * 3**m * math.comb(erase, pick) * scale
    return total, False


def target_set(group: StabilizerGroup, w: int) -> frozenset[int]:
    """Distinct weight-w labels in the system image."""
    sys = group.system_elements()
    n = group.n_system
    occupied = (sys | (sys >> np.uint64(1))) & np.uint64(z_mask(n))
    hits = sys[np.bitwise_count(occupied) == w]
    return frozenset(int(v) for v in hits)


def measured_sigma(group: StabilizerGroup, w: int) -> int:
    return len(target_set(group, w))


def cn_upper_bound(p_size: int, sigma: int) -> int:
    if p_size < 1 or sigma < 1:
        raise ValueError("p_size and sigma must be positive")
    return max(math.ceil(p_size * math.log(p_size) / sigma), 1)


@dataclass(frozen=True)
class Covering:
    groups: tuple[StabilizerGroup, ...]
    target_weight: int
    ancilla_count: int
    n: int
    uncovered_history: tuple[int, ...] = field(default=(), compare=False)

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "k": self.ancilla_count,
            "w": self.target_weight,
            "groups": [[lab.to_text() for lab in g.generator_labels()] for g in self.groups],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Covering":
        doc = json.loads(text)
        k = doc["k"]
        groups = tuple(
            StabilizerGroup.from_labels([PauliString.from_text(t) for t in gens], k) for gens in doc["groups"]
        )
        return cls(groups, doc["w"], k, doc["n"])


def greedy_cover(n: int, k: int, w: int, family: Optional[Iterable[StabilizerGroup]] = None, argmax: bool = False) -> Covering:
    """Density-based greedy cover of all weight-w system labels.

    First-fit mode takes the first group (in family order) covering at least
    ceil(|P_j| * sigma / |P|) uncovered labels, where sigma is the covering
    power of the family's first group.  If no group clears that threshold the
    best group is taken instead.  ``argmax`` always takes the best group.
    """
    if family is None:
        family = uniform_family(n, k, w)
    universe = {lab.bits for lab in enumerate_paulis_of_weight(n, w)}
    p_size = len(universe)
    uncovered = set(universe)
    sigma = None
    chosen: list[StabilizerGroup] = []
    history = [len(uncovered)]
    while uncovered:
        best, best_gain = None, 0
        threshold = None
        for group in family:
            hits = target_set(group, w)
            if sigma is None:
                sigma = len(hits)
            if threshold is None:
                threshold = math.ceil(len(uncovered) * sigma / p_size)
            gain = len(hits & uncovered)
            if gain > best_gain:
                best, best_gain = group, gain
            if not argmax and gain >= threshold and gain > 0:
                break
        if best is None:
            raise RuntimeError("family cannot cover the remaining labels")
        chosen.append(best)
        uncovered -= target_set(best, w)
        history.append(len(uncovered))
    return Covering(tuple(chosen), w, k, n, tuple(history))


@dataclass(frozen=True)
class CoverageReport:
    covered_fraction: float
    uncovered_count: int
    worst_uncovered: Optional[PauliString]


def verify_covering(cover: Covering) -> CoverageReport:
    """Check every weight-w label against the groups; reports the first uncovered label."""
    images = [target_set(g, cover.target_weight) for g in cover.groups]
    missing = []
    total = 0
    for lab in enumerate_paulis_of_weight(cover.n, cover.target_weight):
        total += 1
        if not any(lab.bits in img for img in images):
            missing.append(lab)
    fraction = (total - len(missing)) / total
    return CoverageReport(fraction, len(missing), missing[0] if missing else None)


# syndrome learning


def destabilizers(group: StabilizerGroup) -> list[int]:
    """Labels h_i with <h_i, g_j> = [i == j], from a fixed elimination order."""
    n_total = group.n_total
    partners = [swap_xz(g, n_total) for g in group.generators]
    out = [0] * len(partners)
    for pivot, _, comb in gf2_reduce(partners):
        for i in range(len(partners)):
            if (comb >> i) & 1:
                out[i] ^= 1 << pivot
    return out


@dataclass(frozen=True, eq=False)
class SyndromeTable:
    """Outcome probabilities indexed by syndrome s (bit j = sign of generator j)."""

    representatives: np.ndarray
    probabilities: np.ndarray
    group: StabilizerGroup


def _representatives(group: StabilizerGroup) -> np.ndarray:
    reps = np.zeros(1, dtype=np.uint64)
    for h in destabilizers(group):
        reps = np.concatenate([reps, reps ^ np.uint64(h)])
    return reps


def syndrome_distribution(group: StabilizerGroup, channel: PauliChannel) -> SyndromeTable:
    if channel.n != group.n_system:
        raise DimensionError(f"channel has {channel.n} qubits, group system has {group.n_system}")
    lam = channel.eigenvalues[group.system_elements().astype(np.int64)]
    pr = boolean_hadamard(lam) / lam.shape[0]
    return SyndromeTable(_representatives(group), _clean_distribution(pr), group)


def sample_syndromes(group: StabilizerGroup, channel: PauliChannel, shots: int, seed: int) -> np.ndarray:
    """Coset-representative labels of ``shots`` syndrome outcomes."""
    table = syndrome_distribution(group, channel)
    idx = sample_from_table(table.probabilities, shots, np.random.default_rng(seed))
    return table.representatives[idx.astype(np.int64)]


def preimage(group: StabilizerGroup, b: PauliString) -> PauliString:
    """Smallest group label whose system part is b."""
    if b.n != group.n_system:
        raise DimensionError(f"label has {b.n} qubits, group system has {group.n_system}")
    elems = group.elements()
    match = elems[group.system_elements() == np.uint64(b.bits)]
    if match.size == 0:
        raise NotCoveredError(f"{b} is not in the system image")
    return PauliString(int(match.min()), group.n_total)


def estimate_from_syndromes(samples: np.ndarray, group: StabilizerGroup, b: PauliString) -> float:
    a_star = preimage(group, b)
    signs = 1 - 2 * symplectic_parity_array(a_star.bits, samples, group.n_total)
    return float(signs.mean())
