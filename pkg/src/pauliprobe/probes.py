"""Probe states, Bell-measurement statistics, eigenvalue estimators and the sample planner."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .channel import PauliChannel
from .pauli import (
    DimensionError,
    PauliString,
    symplectic_parity_array,
    walsh_hadamard,
    weights_table,
)

__all__ = [
    "DegenerateProbeError",
    "AlphaProbe",
    "WernerProbe",
    "Probe",
    "OutcomeRecord",
    "amplitude_squares",
    "overlap_E",
    "overlap_table",
    "rdm_spectrum",
    "entanglement_entropy",
    "eof_werner",
    "bell_outcome_distribution",
    "sample_from_table",
    "sample_outcomes",
    "estimate_eigenvalue",
    "estimate_all_eigenvalues",
    "targeted_parameter_count",
    "min_overlap",
    "plan_samples",
    "plan_from_overlap",
]

CLIP_TOL = 1e-12


class DegenerateProbeError(ValueError):
    """The probe has zero overlap with a label that must be estimated."""


@dataclass(frozen=True)
class AlphaProbe:
    """Interpolation between n Bell pairs (alpha=1) and a product state (alpha=0)."""

    n: int
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")


@dataclass(frozen=True)
class WernerProbe:
    """Isotropic mixture: lam_w of the Bell-pair projector, the rest maximally mixed."""

    n: int
    lam_w: float

    def __post_init__(self):
        if not 0.0 <= self.lam_w <= 1.0:
            raise ValueError(f"lam_w must lie in [0, 1], got {self.lam_w}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")


Probe = Union[AlphaProbe, WernerProbe]


def amplitude_squares(probe: AlphaProbe) -> np.ndarray:
    """|c_a|^2 for every label a."""
    w = weights_table(probe.n)
    sq = (1 - probe.alpha) * 0.5 ** (probe.n - w) * (1 / 6) ** w
    sq[0] += probe.alpha
    return sq


def _werner_terms(probe: WernerProbe) -> tuple[float, float]:
    d2 = 4**probe.n
    lam = probe.lam_w
    return d2 / (d2 - 1) * (1 - lam), lam - (1 - lam) / (d2 - 1)


def overlap_E(probe: Probe, b: PauliString) -> float:
    """Tr[(P_b^T (x) P_b) rho_in]."""
    if b.n != probe.n:
        raise DimensionError(f"label has {b.n} qubits, probe has {probe.n}")
    if isinstance(probe, AlphaProbe):
        return probe.alpha + (1 - probe.alpha) * 3.0 ** (-b.weight)
    spike, flat = _werner_terms(probe)
    return flat + (spike if b.bits == 0 else 0.0)


def overlap_table(probe: Probe) -> np.ndarray:
    if isinstance(probe, AlphaProbe):
        return probe.alpha + (1 - probe.alpha) * 3.0 ** (-weights_table(probe.n).astype(float))
    spike, flat = _werner_terms(probe)
    table = np.full(4**probe.n, flat)
    table[0] += spike
    return table


def rdm_spectrum(probe: AlphaProbe) -> tuple[float, float]:
    """Reduced-state eigenvalues (q, Q); q has multiplicity 2^n - 1."""
    d = 2**probe.n
    alpha = probe.alpha
    hi = math.sqrt(alpha + (1 - alpha) / d)
    lo = math.sqrt((1 - alpha) / d)
    # hi - lo rewritten as alpha / (hi + lo) to avoid cancellation at small alpha
    q = (alpha / (hi + lo)) ** 2 / d
    big = (hi + (d - 1) * lo) ** 2 / d
    return q, big


def _h(p: float) -> float:
    return 0.0 if p <= 0.0 else -p * math.log2(p)


def entanglement_entropy(probe: AlphaProbe) -> float:
    """Ancilla-system entanglement entropy in bits."""
    if not isinstance(probe, AlphaProbe):
        raise TypeError("entropy closed form is only available for AlphaProbe")
    d = 2**probe.n
    q, _ = rdm_spectrum(probe)
    # the large eigenvalue is taken from the trace condition so the endpoints come out exact
    big = 1.0 - (d - 1) * q
    return (d - 1) * _h(q) + _h(big)


def eof_werner(probe: WernerProbe) -> float:
    """Entanglement of formation (bits) inside the closed-form window."""
    n = probe.n
    if n < 2:
        raise ValueError("closed form needs n >= 2")
    d = 2**n
    lower = 4 * (d - 1) / d**2
    if probe.lam_w < lower:
        raise ValueError(f"lam_w={probe.lam_w} below closed-form window [{lower}, 1]")
    return d * math.log2(d - 1) / (d - 2) * (probe.lam_w - 1) + n


def bell_outcome_distribution(channel: PauliChannel, probe: Probe) -> np.ndarray:
    """Pr(v) over all 4^n Bell outcomes."""
    if channel.n != probe.n:
        raise DimensionError(f"channel has {channel.n} qubits, probe has {probe.n}")
    pr = walsh_hadamard(channel.eigenvalues * overlap_table(probe), inverse=True)
    return _clean_distribution(pr)


def _clean_distribution(pr: np.ndarray) -> np.ndarray:
    if pr.min() < -CLIP_TOL:
        raise ValueError(f"distribution has entry {pr.min():.3e} below clipping tolerance")
    pr = np.clip(pr, 0.0, None)
    return pr / pr.sum()


def sample_from_table(pr: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF draws of table indices."""
    cdf = np.cumsum(pr)
    u = rng.random(shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, len(pr) - 1).astype(np.uint64)


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    outcomes: np.ndarray
    probe: Probe
    channel_id: str = ""
    seed: int = 0

    @property
    def n(self) -> int:
        return self.probe.n

    @property
    def shots(self) -> int:
        return int(self.outcomes.shape[0])

    def counts(self) -> np.ndarray:
        return np.bincount(self.outcomes.astype(np.int64), minlength=4**self.n).astype(float)

    def to_json(self) -> str:
        doc = {"n": self.n}
        if isinstance(self.probe, AlphaProbe):
            doc["alpha"] = self.probe.alpha
        else:
            doc["lam_w"] = self.probe.lam_w
        doc.update(seed=self.seed, shots=self.shots, outcomes=[int(v) for v in self.outcomes])
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "OutcomeRecord":
        doc = json.loads(text)
        probe = AlphaProbe(doc["n"], doc["alpha"]) if "alpha" in doc else WernerProbe(doc["n"], doc["lam_w"])
        outcomes = np.asarray(doc["outcomes"], dtype=np.uint64)
        if len(outcomes) != doc["shots"]:
            raise ValueError("shots does not match the number of outcomes")
        if outcomes.size and int(outcomes.max()) >= 4 ** doc["n"]:
            raise DimensionError("outcome label exceeds 2n bits")
        return cls(outcomes, probe, seed=doc["seed"])


def sample_outcomes(channel: PauliChannel, probe: Probe, shots: int, seed: int, channel_id: str = "") -> OutcomeRecord:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    pr = bell_outcome_distribution(channel, probe)
    outcomes = sample_from_table(pr, shots, np.random.default_rng(seed))
    return OutcomeRecord(outcomes, probe, channel_id, seed)


def estimate_eigenvalue(rec: OutcomeRecord, b: PauliString) -> float:
    """(1/N) sum_l (-1)^<b, v_l> / E(b)."""
    if b.n != rec.n:
        raise DimensionError(f"label has {b.n} qubits, record has {rec.n}")
    e = overlap_E(rec.probe, b)
    if e == 0.0:
        raise DegenerateProbeError(f"probe overlap vanishes at {b}")
    signs = 1 - 2 * symplectic_parity_array(b.bits, rec.outcomes, rec.n)
    return float(signs.mean()) / e


def estimate_all_eigenvalues(rec: OutcomeRecord) -> np.ndarray:
    """All 4^n estimates at once from the outcome histogram.

    Labels where the probe overlap vanishes come back as NaN.
    """
    sums = walsh_hadamard(rec.counts())
    e = overlap_table(rec.probe)
    out = np.full(e.shape, np.nan)
    ok = e != 0.0
    out[ok] = sums[ok] / (rec.shots * e[ok])
    return out


def targeted_parameter_count(n: int, max_weight: int) -> int:
    return sum(math.comb(n, u) * 3**u for u in range(max_weight + 1))


def min_overlap(probe: Probe, max_weight: int) -> float:
    """Smallest |E(b)| over labels of weight at most ``max_weight``."""
    if isinstance(probe, AlphaProbe):
        return probe.alpha + (1 - probe.alpha) * 3.0 ** (-max_weight)
    spike, flat = _werner_terms(probe)
    if max_weight == 0:
        return 1.0
    return min(abs(flat + spike), abs(flat))


def plan_samples(probe: Probe, eps: float, delta: float, max_weight: int) -> int:
    """Hoeffding plus union bound over every label of weight <= max_weight."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not 0 <= max_weight <= probe.n:
        raise ValueError(f"max_weight must lie in [0, {probe.n}]")
    e_min = min_overlap(probe, max_weight)
    if e_min == 0.0:
        raise DegenerateProbeError("probe overlap vanishes on a targeted label")
    m = targeted_parameter_count(probe.n, max_weight)
    return plan_from_overlap(e_min, m, eps, delta)


def plan_from_overlap(e_min: float, targets: int, eps: float, delta: float) -> int:
    return math.ceil(2.0 / (e_min**2 * eps**2) * math.log(2 * targets / delta))
