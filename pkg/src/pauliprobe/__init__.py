"""Learning Pauli channels with entangled probes: transforms, estimators, stabilizer covers and bounds."""

from .bounds import (
    BoundQuery,
    GameConfig,
    f_w,
    log_f_w,
    log2_f_w,
    lower_bound_N,
    optimal_x,
    pr_e,
    pr_learnable,
    run_game,
    stirling_brackets,
    upper_bound_N,
    weighted_sum_max_eigenvalue,
)
from .channel import (
    PauliChannel,
    channel_from_eigenvalues,
    channel_from_error_rates,
    depolarizing_channel,
    identity_channel,
    random_channel,
    spike_channel,
)
from .covering import (
    Covering,
    StabilizerGroup,
    cn_upper_bound,
    greedy_cover,
    syndrome_distribution,
    uniform_family,
    verify_covering,
)
from .pauli import PauliString, enumerate_paulis_of_weight, symplectic_inner, walsh_hadamard, weight
from .probes import (
    AlphaProbe,
    WernerProbe,
    bell_outcome_distribution,
    entanglement_entropy,
    eof_werner,
    estimate_eigenvalue,
    overlap_E,
    plan_samples,
    sample_outcomes,
)

__version__ = "0.1.0"
