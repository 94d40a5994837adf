"""Sample-complexity bounds, the F_w optimisation, Stirling brackets and the discrimination game."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .channel import depolarizing_channel, spike_channel
from .covering import StabilizerGroup, cn_upper_bound, estimate_from_syndromes, sample_syndromes, sigma_formula
from .pauli import PauliString, count_paulis_of_weight, weights_table
from .probes import AlphaProbe, estimate_eigenvalue, plan_from_overlap, plan_samples, sample_outcomes
from .seeding import derive_seed, stream_rng

__all__ = [
    "OPTIMAL_X_FLOOR",
    "DegenerateWeightWarning",
    "BoundQuery",
    "GameConfig",
    "GameResult",
    "pr_e",
    "pr_learnable",
    "f_w",
    "log_f_w",
    "log2_f_w",
    "optimal_x",
    "lower_bound_N",
    "sigma_for_weight",
    "upper_bound_N",
    "stirling_brackets",
    "weighted_sum_max_eigenvalue",
    "wilson_interval",
    "game_floor",
    "run_game",
]

OPTIMAL_X_FLOOR = 1e-6
EXACT_MAX_N = 400  # beyond this, F_w switches from exact rationals to log-sum-exp
WILSON_Z = 1.959963984540054


class DegenerateWeightWarning(UserWarning):
    """optimal_x was asked for w = 0, where the optimum sits at x -> 0."""


@dataclass(frozen=True)
class BoundQuery:
    n: int
    k: int
    w: int
    eps: float
    delta: float

    def __post_init__(self):
        if not (0 <= self.k <= self.n and 0 <= self.w <= self.n):
            raise ValueError(f"need 0 <= k, w <= n, got n={self.n}, k={self.k}, w={self.w}")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 0 < self.delta < 0.5:
            raise ValueError("delta must lie in (0, 1/2)")


def _check_x(x: float) -> None:
    if not 0 < x <= 1:
        raise ValueError(f"x must lie in (0, 1], got {x}")


def pr_e(e: PauliString, x: float) -> float:
    _check_x(x)
    return x**e.weight / (1 + 3 * x) ** e.n


def pr_learnable(n: int, w: int, x: float) -> float:
    _check_x(x)
    return sum(math.comb(n, u) * (3 * x) ** u for u in range(w + 1)) / (1 + 3 * x) ** n


def _rational(value) -> Fraction:
    """Exact rational for a parameter, reading floats as the decimal they print as."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


def _f_w_exact(n: int, w: int, x) -> Fraction:
    fx = _rational(x)
    return sum(math.comb(n, u) * (3 * fx) ** u for u in range(w + 1)) / (1 + fx) ** n


def log_f_w(n: int, w: int, x: float) -> float:
    """Natural log of F_w(x); never overflows."""
    _check_x(x)
    if n <= EXACT_MAX_N:
        val = _f_w_exact(n, w, x)
        return math.log(val.numerator) - math.log(val.denominator)
    x = float(x)
    logs = np.array([math.lgamma(n + 1) - math.lgamma(u + 1) - math.lgamma(n - u + 1) + u * math.log(3 * x) for u in range(w + 1)])
    top = logs.max()
    return float(top + math.log(np.exp(logs - top).sum()) - n * math.log1p(x))


def log2_f_w(n: int, w: int, x: float) -> float:
    """Base-2 log of F_w(x); exact whenever F_w is a power of two and n allows rationals."""
    _check_x(x)
    if n <= EXACT_MAX_N:
        val = _f_w_exact(n, w, x)
        return math.log2(val.numerator) - math.log2(val.denominator)
    return log_f_w(n, w, x) / math.log(2)


def f_w(n: int, w: int, x: float) -> float:
    """(1+x)^-n sum_{u<=w} C(n,u)(3x)^u.  Exact-rational for moderate n, so integer cases come out exact."""
    _check_x(x)
    if n <= EXACT_MAX_N:
        return float(_f_w_exact(n, w, x))
    try:
        return math.exp(log_f_w(n, w, x))
    except OverflowError:
        return math.inf


def _optimal_x_exact(n: int, w: int) -> Fraction:
    if 2 * w >= n:
        return Fraction(1)
    return Fraction(w, n - w)


def optimal_x(n: int, w: int) -> float:
    if w == 0:
        warnings.warn("w = 0 has no interior optimum; returning the floor value", DegenerateWeightWarning, stacklevel=2)
        return OPTIMAL_X_FLOOR
    if not 1 <= w <= n:
        raise ValueError(f"need 1 <= w <= n, got w={w}, n={n}")
    return float(_optimal_x_exact(n, w))


def lower_bound_N(q: BoundQuery) -> float:
    """Constant-carrying lower bound at the optimal x, in exact arithmetic where n allows."""
    if q.w == 0:
        x = Fraction(OPTIMAL_X_FLOOR)
    else:
        x = _optimal_x_exact(q.n, q.w)
    eps, delta = _rational(q.eps), _rational(q.delta)
    const = (1 - 2 * delta) / (4 * eps**2) / 2**q.k
    if q.n <= EXACT_MAX_N:
        return float(const * _f_w_exact(q.n, q.w, x))
    return math.exp(math.log(const) + log_f_w(q.n, q.w, float(x)))


def sigma_for_weight(n: int, k: int, u: int) -> int:
    """Covering power of the uniform family for weight-u labels (exact or its lower bound)."""
    return sigma_formula(n, k, u)[0]


def upper_bound_N(q: BoundQuery, measured_sigma: Optional[int] = None) -> float:
    """Covering-based sample count; ``measured_sigma`` replaces the weight-w covering power."""
    groups = 0
    for u in range(q.w + 1):
        sigma = measured_sigma if (u == q.w and measured_sigma is not None) else sigma_for_weight(q.n, q.k, u)
        groups += cn_upper_bound(count_paulis_of_weight(q.n, u), sigma)
    return q.n * groups * 2 / q.eps**2 * math.log(2 / q.delta)


def stirling_brackets(n: int, u: int) -> tuple[float, float]:
    """(lower, upper) on C(n,u) from the binary entropy in nats."""
    if u in (0, n):
        return 1.0, 1.0
    if n < 2 or not 0 < u < n:
        raise ValueError(f"need n >= 2 and 0 <= u <= n, got n={n}, u={u}")
    p = u / n
    h = -p * math.log(p) - (1 - p) * math.log(1 - p)
    core = math.exp(n * h)
    return core / math.sqrt(2 * n), core / math.sqrt(math.pi)


def weighted_sum_max_eigenvalue(n: int, x: float) -> float:
    _check_x(x)
    return ((1 + x) / (1 + 3 * x)) ** n


# game


@dataclass(frozen=True)
class GameConfig:
    n: int
    w: int
    x: float
    eps: float
    trials: int
    seed: int = 0
    delta: float = 0.05
    shots_per_copy: int = 1

    def __post_init__(self):
        _check_x(self.x)
        if not 0 <= self.w <= self.n:
            raise ValueError(f"need 0 <= w <= n, got w={self.w}")
        if not 0 < self.eps <= 0.5:
            raise ValueError("eps must lie in (0, 1/2]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.shots_per_copy != 1:
            raise ValueError("only single-shot copies are supported")


@dataclass(frozen=True)
class GameResult:
    wins: int
    trials: int
    win_rate: float
    ci_low: float
    ci_high: float
    samples_per_trial: int

    @property
    def wilson_sigma(self) -> float:
        return (self.ci_high - self.ci_low) / (2 * WILSON_Z)


def wilson_interval(wins: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    p = wins / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return centre - half, centre + half


def game_floor(n: int, w: int, x: float, delta: float) -> float:
    learnable = pr_learnable(n, w, x)
    return learnable * (1 - delta) + (1 - learnable) / 2


def _sample_error_label(n: int, x: float, rng: np.random.Generator) -> PauliString:
    bits = 0
    for _ in range(n):
        code = 0 if rng.random() < 1 / (1 + 3 * x) else int(rng.integers(1, 4))
        bits = (bits << 2) | code
    return PauliString(bits, n)


def run_game(cfg: GameConfig, strategy: Union[AlphaProbe, StabilizerGroup]) -> GameResult:
    """Non-adaptive player against the depolarizing-vs-spike referee.

    The player learns the labels its strategy targets (weight <= w; for a
    stabilizer strategy, also inside the group's system image) and answers
    "spike" iff |estimate| > eps.  Any other revealed label, including the
    identity (where no spike channel exists), is answered by a fair coin.
    """
    n = cfg.n
    if isinstance(strategy, AlphaProbe):
        if strategy.n != n:
            raise ValueError("probe size does not match the game")
        samples = plan_samples(strategy, cfg.eps, cfg.delta, cfg.w)
        learnable = None
    else:
        if strategy.n_system != n:
            raise ValueError("group system size does not match the game")
        sys = np.unique(strategy.system_elements()).astype(np.int64)
        learnable = set(int(b) for b in sys[weights_table(n)[sys] <= cfg.w])
        samples = plan_from_overlap(1.0, len(learnable), cfg.eps, cfg.delta)
    dep = depolarizing_channel(n)
    wins = 0
    for trial in range(cfg.trials):
        rng = stream_rng(cfg.seed, trial)
        e = _sample_error_label(n, cfg.x, rng)
        s = 1 if rng.random() < 0.5 else -1
        spike_sent = bool(rng.random() < 0.5)
        targeted = e.bits != 0 and e.weight <= cfg.w and (learnable is None or e.bits in learnable)
        if not targeted:
            guess = bool(rng.random() < 0.5)
        else:
            channel = spike_channel(n, e, s, cfg.eps) if spike_sent else dep
            sub_seed = derive_seed(cfg.seed, (1 << 32) + trial)
            if learnable is None:
                rec = sample_outcomes(channel, strategy, samples, sub_seed)
                estimate = estimate_eigenvalue(rec, e)
            else:
                syn = sample_syndromes(strategy, channel, samples, sub_seed)
                estimate = estimate_from_syndromes(syn, strategy, e)
            guess = abs(estimate) > cfg.eps
        wins += guess == spike_sent
    lo, hi = wilson_interval(wins, cfg.trials)
    return GameResult(wins, cfg.trials, wins / cfg.trials, lo, hi, samples)
