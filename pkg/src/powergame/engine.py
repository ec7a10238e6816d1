"""Multi-stage game loop: state evolution, stage actions, grim-trigger
punishment, deviation injection, and discounted/average payoffs.

A run is a deterministic function of (game, model, strategy kinds, config):
the only randomness is the channel path, drawn from a dedicated generator
seeded with ``(seed, spawn_key)``.  Channel evolution does not depend on
actions, so the whole path is drawn up front; runs sharing a seed see
identical channels regardless of strategy, which is what makes paired
(common-random-number) comparisons work.

Homogeneous compliant runs (everyone plays the same rule and no deviation
is injected) are evaluated fully vectorized over stages.  Runs with a
deviation or with mixed rules fall back to a sequential stage loop with
SINR-based deviation detection: detection at stage t switches every
player to the selfish equilibrium from stage t+1 on.  Detection compares
each transmitting player's realized SINR against the value the plan
predicts; monitoring from the total received power alone is not
supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oneshot import GameParams, best_response, sinr, utility
from .strategies import (
    MONITORED_KINDS,
    PunishmentState,
    SignalProfile,
    StrategyKind,
    compliant_profile,
    detect_deviation,
    stage_action,
)

_FULL_TRACE_MAX = 10_000
_THINNED_EVERY = 100


@dataclass(frozen=True)
class DeviationSpec:
    """Forced unilateral deviation: at ``start`` the deviator plays a best
    response to the compliant plan instead of its recommendation; mode
    ``one_shot`` returns to plan afterwards, ``permanent`` keeps
    best-responding to whatever the others currently play."""

    player: int
    start: int = 1
    mode: str = "one_shot"

    def __post_init__(self):
        if self.mode not in ("one_shot", "permanent"):
            raise ValueError(f"unknown deviation mode {self.mode!r}")
        if self.start < 1:
            raise ValueError("deviation start stage must be >= 1")
        if self.player < 0:
            raise ValueError("deviation player index must be >= 0")


@dataclass(frozen=True)
class EngineConfig:
    horizon: int
    lam: float
    seed: int
    spawn_key: tuple = ()
    deviation: DeviationSpec | None = None
    initial_state: tuple | None = None
    detection_tol: float = 1e-6
    record_every: int | None = None

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not 0.0 < self.lam < 1.0:
            raise ValueError("discount factor must be in (0, 1)")
        if self.detection_tol <= 0:
            raise ValueError("detection_tol must be positive")


@dataclass
class StageTrace:
    """Recorded stages (possibly thinned); all arrays share the leading axis."""

    t: np.ndarray  # 1-based stage numbers
    eta: np.ndarray
    powers: np.ndarray
    sinr: np.ndarray
    utility: np.ndarray
    recommended: np.ndarray
    punishing: np.ndarray


@dataclass
class RunResult:
    discounted: np.ndarray  # per-player sum of lam (1-lam)^(t-1) u_i(t)
    time_average: np.ndarray
    weight_sum: float  # 1 - (1-lam)^T
    remainder_bound: float  # (1-lam)^T * max observed stage utility
    trace: StageTrace
    seed: int
    spawn_key: tuple
    punishment_stage: int | None  # stage at which a deviation was detected


def discount_weights(horizon: int, lam: float) -> np.ndarray:
    """Weights lam * (1-lam)^(t-1) for t = 1..horizon."""
    if not 0.0 < lam < 1.0:
        raise ValueError("discount factor must be in (0, 1)")
    return lam * np.exp(np.arange(horizon) * np.log1p(-lam))


def discounted_utility(stage_utils, lam: float):
    """Discounted value of a stage-utility sequence (axis 0 is time)."""
    stage_utils = np.asarray(stage_utils, dtype=float)
    w = discount_weights(stage_utils.shape[0], lam)
    out = np.tensordot(w, stage_utils, axes=(0, 0))
    return out if np.ndim(out) else float(out)


def truncation_bound(stage_utils, lam: float) -> float:
    """(1-lam)^T * sup u: what the truncated tail can contribute at most."""
    stage_utils = np.asarray(stage_utils, dtype=float)
    t = stage_utils.shape[0]
    return float(np.exp(t * np.log1p(-lam)) * stage_utils.max(initial=0.0))


def _normalize_kinds(kinds, n_players: int) -> tuple:
    if isinstance(kinds, StrategyKind):
        return (kinds,) * n_players
    kinds = tuple(kinds)
    if len(kinds) != n_players:
        raise ValueError(f"need one strategy kind per player ({n_players})")
    return kinds


def run_game(params: GameParams, model, kinds, cfg: EngineConfig,
             *, force_sequential: bool = False) -> RunResult:
    """Play the stochastic game and return discounted/average payoffs.

    ``kinds`` is one StrategyKind for everyone or a per-player sequence.
    Deterministic: identical inputs give an identical result.
    """
    kinds = _normalize_kinds(kinds, params.n_players)
    if model.n_players != params.n_players:
        raise ValueError("model and game disagree on the player count")
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=cfg.spawn_key))
    idx = model.sample_path(cfg.horizon, rng, cfg.initial_state)
    eta = model.gain_matrix(idx)

    homogeneous = all(k == kinds[0] for k in kinds)
    if homogeneous and cfg.deviation is None and not force_sequential:
        powers, recommended, _ = compliant_profile(params, kinds[0], eta)
        sinr_all = sinr(params, eta, powers)
        util_all = utility(params, eta, powers)
        punishing = np.zeros(eta.shape, dtype=bool)
        punishment_stage = None
    else:
        powers, recommended, sinr_all, util_all, punishing, punishment_stage = (
            _run_sequential(params, model, kinds, cfg, eta)
        )

    horizon = cfg.horizon
    weights = discount_weights(horizon, cfg.lam)
    discounted = weights @ util_all
    every = cfg.record_every or (1 if horizon <= _FULL_TRACE_MAX else _THINNED_EVERY)
    keep = np.arange(0, horizon, every)
    trace = StageTrace(
        t=keep + 1,
        eta=eta[keep],
        powers=powers[keep],
        sinr=sinr_all[keep],
        utility=util_all[keep],
        recommended=recommended[keep],
        punishing=punishing[keep],
    )
    return RunResult(
        discounted=discounted,
        time_average=util_all.mean(axis=0),
        weight_sum=float(-np.expm1(horizon * np.log1p(-cfg.lam))),
        remainder_bound=truncation_bound(util_all, cfg.lam),
        trace=trace,
        seed=cfg.seed,
        spawn_key=cfg.spawn_key,
        punishment_stage=punishment_stage,
    )


def _stage_plans(params, kinds, row, so_cache):
    """Recommendation signal per player for one stage.

    Each distinct rule present computes its own receiver recommendation;
    a player sees the recommendation addressed to its rule.  Returns
    (recommended (K,) bool, k_active (K,) int, social profile or None).
    """
    from .strategies import select_best_users, select_by_threshold
    from .oneshot import social_optimum as solve_social

    n = params.n_players
    recommended = np.ones(n, dtype=bool)
    k_active = np.full(n, n)
    so_profile = None
    done = {}
    for i, kind in enumerate(kinds):
        key = (kind.name, kind.alpha)
        if key not in done:
            if kind.name == "best_users":
                members = select_best_users(params, row)
                mask = np.zeros(n, dtype=bool)
                mask[members] = True
                done[key] = (mask, members.size)
            elif kind.name == "threshold":
                members = select_by_threshold(kind.alpha, row)
                mask = np.zeros(n, dtype=bool)
                mask[members] = True
                done[key] = (mask, members.size)
            elif kind.name == "time_sharing":
                mask = np.zeros(n, dtype=bool)
                mask[int(np.argmax(row))] = True
                done[key] = (mask, 1)
            elif kind.name == "social_optimum":
                state = row.tobytes()
                if state not in so_cache:
                    so_cache[state], _ = solve_social(params, row, kind.grid_size)
                so_profile = so_cache[state]
                mask = so_profile > 0
                done[key] = (mask, int(mask.sum()))
            else:  # nash / operating_point: everyone is always "in"
                done[key] = (np.ones(n, dtype=bool), n)
        mask, count = done[key]
        recommended[i] = mask[i]
        k_active[i] = count
    return recommended, k_active, so_profile


def _expected_sinr(params, kind, k_active, i, so_profile, row):
    if kind.name == "operating_point":
        return params.gamma_tilde(params.n_players)
    if kind.name in ("threshold", "best_users"):
        return params.gamma_tilde(int(k_active))
    if kind.name == "social_optimum":
        return float(sinr(params, row, so_profile, i))
    return None


def _run_sequential(params, model, kinds, cfg, eta):
    horizon, n = eta.shape
    dev = cfg.deviation
    if dev is not None and dev.player >= n:
        raise ValueError("deviation player index out of range")
    punish = PunishmentState()
    powers = np.zeros((horizon, n))
    recommended = np.zeros((horizon, n), dtype=bool)
    sinr_all = np.zeros((horizon, n))
    util_all = np.zeros((horizon, n))
    punishing = np.zeros((horizon, n), dtype=bool)
    so_cache: dict[bytes, np.ndarray] = {}

    for t in range(horizon):
        stage = t + 1
        row = eta[t]
        rec, k_act, so_profile = _stage_plans(params, kinds, row, so_cache)
        recommended[t] = rec
        punishing[t] = punish.triggered

        p_t = np.empty(n)
        for i, kind in enumerate(kinds):
            signal = SignalProfile(
                own_gain=float(row[i]),
                recommended=bool(rec[i]),
                k_active=int(k_act[i]),
                own_sinr_prev=float(sinr_all[t - 1, i]) if t else None,
                global_state=row if kind.name == "social_optimum" else None,
            )
            p_t[i] = stage_action(kind, params, signal, punish, i)

        if dev is None:
            deviating = False
        elif dev.mode == "one_shot":
            deviating = stage == dev.start and not punish.triggered
        else:  # permanent: keeps best-responding, even to the punishment
            deviating = stage >= dev.start
        if deviating:
            p_t[dev.player] = best_response(params, row, p_t, dev.player)

        s_t = sinr(params, row, p_t)
        util_all[t] = utility(params, row, p_t)
        sinr_all[t] = s_t
        powers[t] = p_t

        if not punish.triggered:
            for i, kind in enumerate(kinds):
                if kind.name not in MONITORED_KINDS or p_t[i] <= 0:
                    continue
                if deviating and i == dev.player:
                    continue
                expected = _expected_sinr(params, kind, k_act[i], i, so_profile, row)
                if expected is not None and detect_deviation(
                    expected, float(s_t[i]), cfg.detection_tol
                ):
                    punish.trigger(stage)
                    break

    return powers, recommended, sinr_all, util_all, punishing, punish.trigger_stage


@dataclass
class UtilityEstimate:
    """Monte Carlo estimate of per-player expected stage utility."""

    mean: np.ndarray
    stderr: np.ndarray
    per_replicate: np.ndarray  # (replicates, K) time averages


def estimate_expected_utility(params: GameParams, model, kinds, horizon: int,
                              seed: int, replicates: int,
                              spawn_prefix: tuple = ()) -> UtilityEstimate:
    """Time-average utility over ``horizon`` stages, per replicate.

    Replicates use independent substreams spawned from ``seed``; passing
    the same seed for two different strategy kinds pairs the replicates
    on identical channel draws.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rows = []
    for r in range(replicates):
        cfg = EngineConfig(horizon=horizon, lam=0.5, seed=seed,
                           spawn_key=spawn_prefix + (r,))
        rows.append(run_game(params, model, kinds, cfg).time_average)
    per = np.array(rows)
    mean = per.mean(axis=0)
    if replicates > 1:
        stderr = per.std(axis=0, ddof=1) / np.sqrt(replicates)
    else:
        stderr = np.zeros_like(mean)
    return UtilityEstimate(mean=mean, stderr=stderr, per_replicate=per)


def trace_csv(result: RunResult) -> str:
    """Long-format CSV of the recorded stages."""
    lines = ["t,player,eta,power,sinr,utility,recommended,punishing"]
    tr = result.trace
    for r in range(tr.t.size):
        for i in range(tr.eta.shape[1]):
            lines.append(
                f"{tr.t[r]},{i},{tr.eta[r, i]:.12g},{tr.powers[r, i]:.12g},"
                f"{tr.sinr[r, i]:.12g},{tr.utility[r, i]:.12g},"
                f"{int(tr.recommended[r, i])},{int(tr.punishing[r, i])}"
            )
    return "\n".join(lines) + "\n"
