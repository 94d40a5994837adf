"""``pauliprobe`` command line: reproducible experiments with CSV/JSON output.

Exit codes: 0 success, 1 a check failed, 2 bad usage or config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from . import oracle
from .bounds import BoundQuery, GameConfig, game_floor, lower_bound_N, optimal_x, run_game, upper_bound_N, weighted_sum_max_eigenvalue
from .channel import PauliChannel, random_channel
from .covering import (
    cn_upper_bound,
    greedy_cover,
    measured_sigma,
    sigma_formula,
    syndrome_distribution,
    uniform_family,
    verify_covering,
)
from .pauli import PauliString, count_paulis_of_weight, enumerate_paulis_of_weight
from .probes import (
    AlphaProbe,
    WernerProbe,
    bell_outcome_distribution,
    entanglement_entropy,
    estimate_all_eigenvalues,
    plan_samples,
    sample_outcomes,
)
from .seeding import MASK64, derive_seed

ORACLE_TOL = 1e-9


class UsageError(Exception):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


class CheckFailed(Exception):
    """An acceptance-style check inside a subcommand did not hold."""


@dataclass
class ExperimentConfig:
    n: Optional[int] = None
    k: int = 0
    w: Optional[int] = None
    alpha: Optional[float] = None
    lam_w: Optional[float] = None
    eps: float = 0.1
    delta: float = 0.05
    seed: int = 0
    trials: int = 200
    output_path: Optional[str] = None
    format: str = "csv"
    x: float = 1.0
    channel_path: Optional[str] = None
    n_values: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    regime_c: Optional[float] = None


_INT_FIELDS = {"n", "k", "w", "seed", "trials"}
_FLOAT_FIELDS = {"alpha", "lam_w", "eps", "delta", "x", "regime_c"}


def load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("config", str(exc)) from None
    if not isinstance(doc, dict):
        raise UsageError("config", "top level must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    for key in doc:
        if key not in known:
            raise UsageError(key, "unknown config field")
    return doc


def _coerce(name: str, value):
    if value is None:
        return None
    if name in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise UsageError(name, f"expected an integer, got {value!r}")
    elif name in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UsageError(name, f"expected a number, got {value!r}")
        value = float(value)
    elif name in ("n_values", "alphas"):
        if not isinstance(value, list):
            raise UsageError(name, "expected a list")
    return value


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    doc = load_config(args.config)
    for f in fields(ExperimentConfig):
        cli_value = getattr(args, f.name, None)
        if cli_value is not None and cli_value != []:
            doc[f.name] = cli_value
    cfg = ExperimentConfig(**{k: _coerce(k, v) for k, v in doc.items()})
    if not 0 <= cfg.seed <= MASK64:
        raise UsageError("seed", "must be an unsigned 64-bit integer")
    if cfg.format not in ("csv", "json"):
        raise UsageError("format", "must be csv or json")
    if cfg.n is not None and not 1 <= cfg.n <= 13:
        raise UsageError("n", "must lie in [1, 13]")
    if cfg.n is not None and cfg.w is not None and not 0 <= cfg.w <= cfg.n:
        raise UsageError("w", "must lie in [0, n]")
    if cfg.n is not None and not 0 <= cfg.k <= cfg.n:
        raise UsageError("k", "must lie in [0, n]")
    if cfg.eps <= 0:
        raise UsageError("eps", "must be positive")
    if not 0 < cfg.delta < 0.5:
        raise UsageError("delta", "must lie in (0, 1/2)")
    if cfg.trials < 1:
        raise UsageError("trials", "must be at least 1")
    if cfg.alpha is not None and not 0 <= cfg.alpha <= 1:
        raise UsageError("alpha", "must lie in [0, 1]")
    if cfg.lam_w is not None and not 0 <= cfg.lam_w <= 1:
        raise UsageError("lam_w", "must lie in [0, 1]")
    if not 0 < cfg.x <= 1:
        raise UsageError("x", "must lie in (0, 1]")
    return cfg


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _plain(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: _plain(v) for k, v in r.items()} for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        writer.writerow(list(rows[0].keys()))
        for r in rows:
            writer.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(cfg: ExperimentConfig, name: str):
    value = getattr(cfg, name)
    if value is None:
        raise UsageError(name, "required for this subcommand")
    return value


def _probe(cfg: ExperimentConfig, n: int):
    if cfg.lam_w is not None and cfg.alpha is not None:
        raise UsageError("alpha", "give either alpha or lam_w, not both")
    if cfg.lam_w is not None:
        return WernerProbe(n, cfg.lam_w)
    return AlphaProbe(n, 1.0 if cfg.alpha is None else cfg.alpha)


# subcommands


def cmd_estimate(cfg: ExperimentConfig, args) -> str:
    if cfg.channel_path:
        try:
            with open(cfg.channel_path) as fh:
                channel = PauliChannel.from_json(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError("channel_path", str(exc)) from None
        n = channel.n
    else:
        n = _require(cfg, "n")
        channel = random_channel(n, derive_seed(cfg.seed, 0))
    w = n if cfg.w is None else cfg.w
    if w > n:
        raise UsageError("w", "must lie in [0, n]")
    probe = _probe(cfg, n)
    shots = plan_samples(probe, cfg.eps, cfg.delta, w)
    if args.dry_run:
        return f"{shots}\n"
    if args.oracle_check:
        if n > 2:
            raise UsageError("n", "oracle check needs n <= 2")
        err = np.abs(bell_outcome_distribution(channel, probe) - oracle.dense_outcome_distribution(channel, probe)).max()
        if err > ORACLE_TOL:
            raise CheckFailed(f"outcome distribution differs from dense oracle by {err:.3e}")
    rec = sample_outcomes(channel, probe, shots, derive_seed(cfg.seed, 1))
    lam_hat = estimate_all_eigenvalues(rec)
    rows = []
    max_err, failures = 0.0, 0
    for u in range(w + 1):
        for b in enumerate_paulis_of_weight(n, u):
            true, est = float(channel.eigenvalues[b.bits]), float(lam_hat[b.bits])
            err = abs(est - true)
            max_err = max(max_err, err)
            failures += err > cfg.eps
            rows.append({"b_text": b.to_text(), "weight": u, "lambda_true": true, "lambda_hat": est, "abs_err": err})
    # summary row: weight column carries N_used, lambda_hat carries the failure count
    rows.append({"b_text": "SUMMARY", "weight": shots, "lambda_true": None, "lambda_hat": failures, "abs_err": max_err})
    return render(rows, cfg.format)


def cmd_entropy_sweep(cfg: ExperimentConfig, args) -> str:
    n_values = cfg.n_values or ([cfg.n] if cfg.n else list(range(1, 13)))
    alphas = cfg.alphas or [i / 10 for i in range(11)]
    rows = []
    mismatch = []
    for n in n_values:
        if not isinstance(n, int) or not 1 <= n <= 60:
            raise UsageError("n_values", f"bad qubit count {n!r}")
        for a in alphas:
            if not isinstance(a, (int, float)) or not 0 <= a <= 1:
                raise UsageError("alphas", f"bad alpha {a!r}")
            probe = AlphaProbe(n, float(a))
            s = entanglement_entropy(probe)
            match = None
            if args.oracle_check and n <= 3:
                dense = oracle.dense_partial_trace_entropy(oracle.dense_probe_density(probe))
                match = abs(dense - s) <= ORACLE_TOL
                if not match:
                    mismatch.append((n, a))
            ratio = s / (n * a) if a > 0 else None
            rows.append({"n": n, "alpha": float(a), "entropy_bits": s, "ratio_to_n_alpha": ratio, "oracle_match": match})
    text = render(rows, cfg.format)
    if mismatch:
        emit(text, cfg.output_path)
        raise CheckFailed(f"entropy differs from dense oracle at {mismatch}")
    return text


def cmd_cover(cfg: ExperimentConfig, args) -> str:
    n = _require(cfg, "n")
    w = _require(cfg, "w")
    k = cfg.k
    cover = greedy_cover(n, k, w, argmax=args.greedy_argmax)
    report = verify_covering(cover)
    family = uniform_family(n, k, w)
    sigma_meas = measured_sigma(next(iter(family)), w)
    sigma_form, exact = sigma_formula(n, k, w)
    row = {
        "n": n,
        "k": k,
        "w": w,
        "size": len(cover.groups),
        "bound": cn_upper_bound(count_paulis_of_weight(n, w), sigma_meas),
        "sigma_formula": sigma_form,
        "sigma_formula_exact": exact,
        "sigma_measured": sigma_meas,
        "covered_fraction": report.covered_fraction,
        "selection": "argmax" if args.greedy_argmax else "first-fit",
    }
    if cfg.output_path:
        emit(cover.to_json() + "\n", cfg.output_path)
    text = render([row], cfg.format)
    if report.covered_fraction < 1.0:
        sys.stdout.write(text)
        raise CheckFailed(f"coverage {report.covered_fraction} < 1, first gap {report.worst_uncovered}")
    return text


def cmd_bound_table(cfg: ExperimentConfig, args) -> str:
    n_values = cfg.n_values or ([cfg.n] if cfg.n else list(range(1, 13)))
    rows = []
    for n in n_values:
        if not isinstance(n, int) or n < 1:
            raise UsageError("n_values", f"bad qubit count {n!r}")
        for k in range(n + 1):
            for w in range(1, n + 1):
                q = BoundQuery(n, k, w, cfg.eps, cfg.delta)
                lower = lower_bound_N(q)
                row = {
                    "n": n,
                    "k": k,
                    "w": w,
                    "eps": cfg.eps,
                    "delta": cfg.delta,
                    "lower_N": lower,
                    "upper_N": upper_bound_N(q),
                    "sigma_used": sigma_formula(n, k, w)[0],
                    "optimal_x": optimal_x(n, w),
                }
                if cfg.regime_c is not None:
                    row["regime"] = "exponential" if math.log2(lower) >= cfg.regime_c * n else "subexponential"
                rows.append(row)
    return render(rows, cfg.format)


def cmd_game(cfg: ExperimentConfig, args) -> str:
    n = _require(cfg, "n")
    w = n if cfg.w is None else cfg.w
    alpha = 1.0 if cfg.alpha is None else cfg.alpha
    try:
        game = GameConfig(n, w, cfg.x, cfg.eps, cfg.trials, cfg.seed, cfg.delta)
    except ValueError as exc:
        raise UsageError("game", str(exc)) from None
    res = run_game(game, AlphaProbe(n, alpha))
    row = {
        "n": n,
        "w": w,
        "x": cfg.x,
        "eps": cfg.eps,
        "delta": cfg.delta,
        "alpha": alpha,
        "trials": res.trials,
        "samples_per_trial": res.samples_per_trial,
        "wins": res.wins,
        "win_rate": res.win_rate,
        "ci_low": res.ci_low,
        "ci_high": res.ci_high,
        "floor": game_floor(n, w, cfg.x, cfg.delta),
        "strategy": "non-adaptive",
    }
    return render([row], cfg.format)


def cmd_oracle_check(cfg: ExperimentConfig, args) -> str:
    seeds = range(20)
    rows = []

    def record(check, n, seed, err):
        rows.append({"check": check, "n": n, "seed": seed, "max_abs_err": float(err), "pass": bool(err <= ORACLE_TOL)})

    for n in (1, 2):
        for t in seeds:
            sub = derive_seed(cfg.seed, t)
            channel = random_channel(n, sub)
            alpha = float(np.random.default_rng(sub).random())
            probe = AlphaProbe(n, alpha)
            err = np.abs(bell_outcome_distribution(channel, probe) - oracle.dense_outcome_distribution(channel, probe)).max()
            record("bell_outcome_distribution", n, t, err)
            for k in (0, 1):
                group = next(iter(uniform_family(n, k, n)))
                err = np.abs(
                    syndrome_distribution(group, channel).probabilities
                    - oracle.dense_syndrome_distribution(group.generator_labels(), channel)
                ).max()
                record(f"syndrome_distribution_k{k}", n, t, err)
            x = 0.05 + 0.95 * alpha
            record("weighted_sum_max_eigenvalue", n, t, abs(weighted_sum_max_eigenvalue(n, x) - oracle.dense_max_eigenvalue(n, x)))
    for n in (1, 2, 3):
        for t in seeds:
            alpha = float(np.random.default_rng(derive_seed(cfg.seed, 1000 + t)).random())
            probe = AlphaProbe(n, alpha)
            err = abs(entanglement_entropy(probe) - oracle.dense_partial_trace_entropy(oracle.dense_probe_density(probe)))
            record("entanglement_entropy", n, t, err)
    text = render(rows, cfg.format)
    failed = [r for r in rows if not r["pass"]]
    if failed:
        emit(text, cfg.output_path)
        raise CheckFailed(f"{len(failed)} oracle comparisons failed")
    return text


COMMANDS = {
    "estimate": cmd_estimate,
    "entropy-sweep": cmd_entropy_sweep,
    "cover": cmd_cover,
    "bound-table": cmd_bound_table,
    "game": cmd_game,
    "oracle-check": cmd_oracle_check,
}


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _float_list(text: str) -> list:
    return [float(t) for t in text.split(",") if t]


def _int_list(text: str) -> list:
    return [int(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=_u64, help="master seed (unsigned 64-bit)")
    common.add_argument("--out", dest="output_path", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--dry-run", action="store_true", help="estimate: print the planned sample count only")
    common.add_argument("--greedy-argmax", action="store_true", help="cover: pick the best group every step")
    common.add_argument("--oracle-check", action="store_true", help="cross-check against dense matrices where possible")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--w", type=int)
    common.add_argument("--alpha", type=float)
    common.add_argument("--lam-w", dest="lam_w", type=float)
    common.add_argument("--eps", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--trials", type=int)
    common.add_argument("--x", type=float)
    common.add_argument("--channel", dest="channel_path", help="channel JSON {n, p}")
    common.add_argument("--n-values", dest="n_values", type=_int_list, help="comma-separated qubit counts")
    common.add_argument("--alphas", type=_float_list, help="comma-separated alpha grid")
    common.add_argument("--regime-c", dest="regime_c", type=float, help="bound-table: add a regime column with this exponent slope")

    parser = argparse.ArgumentParser(prog="pauliprobe", description="Pauli channel learning experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        cfg = build_config(args)
        text = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        sys.stderr.write(f"pauliprobe: error: {exc}\n")
        return 2
    except CheckFailed as exc:
        sys.stderr.write(f"pauliprobe: check failed: {exc}\n")
        return 1
    emit(text, None if args.command == "cover" else cfg.output_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
