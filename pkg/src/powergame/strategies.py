"""Stage decision rules for the multi-stage game.

Six rules are implemented.  The selfish equilibrium and the all-player
equal-received-power profile need no coordination.  Pure time sharing,
threshold selection and best-user selection rely on a receiver
recommendation: a recommended player transmits at the equal-received-power
level sized for the number of recommended players, everyone else stays
silent.  The social optimum is a benchmark needing global gain knowledge.

Cooperative rules are enforced by a grim trigger: any detected deviation
switches every player to the selfish equilibrium for the rest of the run.
Detection uses each transmitting player's own realized SINR, which under
compliance is exactly predictable from the plan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InformationError
from .oneshot import GameParams, social_optimum

_VALID_KINDS = (
    "nash",
    "operating_point",
    "time_sharing",
    "threshold",
    "best_users",
    "social_optimum",
)

# kinds whose compliance is monitored through the per-stage SINR alarm
MONITORED_KINDS = frozenset(
    {"operating_point", "threshold", "best_users", "social_optimum"}
)


@dataclass(frozen=True)
class StrategyKind:
    """A named stage-decision rule plus its parameters."""

    name: str
    alpha: float | None = None  # threshold rule only
    grid_size: int = 12  # social optimum search only

    def __post_init__(self):
        if self.name not in _VALID_KINDS:
            raise ValueError(f"unknown strategy kind {self.name!r}; valid: {_VALID_KINDS}")
        if self.name == "threshold":
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise ValueError("threshold rule needs alpha in [0, 1]")
        elif self.alpha is not None:
            raise ValueError("alpha is only meaningful for the threshold rule")

    @property
    def label(self) -> str:
        if self.name == "threshold":
            return f"threshold({self.alpha:g})"
        return self.name


NASH = StrategyKind("nash")
OPERATING_POINT = StrategyKind("operating_point")
TIME_SHARING = StrategyKind("time_sharing")
BEST_USERS = StrategyKind("best_users")
SOCIAL_OPTIMUM = StrategyKind("social_optimum")


def threshold(alpha: float) -> StrategyKind:
    return StrategyKind("threshold", alpha=float(alpha))


@dataclass
class PunishmentState:
    """Grim-trigger flag: once set it never clears."""

    triggered: bool = False
    trigger_stage: int | None = None

    def trigger(self, stage: int) -> None:
        if not self.triggered:
            self.triggered = True
            self.trigger_stage = stage


@dataclass(frozen=True)
class SignalProfile:
    """What one player observes before choosing a stage power."""

    own_gain: float
    recommended: bool | None = None
    k_active: int | None = None
    own_sinr_prev: float | None = None
    global_state: np.ndarray | None = None


def select_best_users(params: GameParams, eta) -> np.ndarray:
    """Welfare-maximizing subset under equal-received-power play.

    At equal rates the optimum over all 2^K - 1 subsets is always a
    prefix of the gain ranking, so only the K prefix sets are scored
    (ties in gain broken by player index).  Returns ascending player
    indices.
    """
    rate = params.require_equal_rates()
    eta = np.asarray(eta, dtype=float)
    order = np.argsort(-eta, kind="stable")
    cums = np.cumsum(eta[order])
    k = params.n_players
    coeff = np.array(
        [rate * params.eff.value(params.gamma_tilde(m)) / params.equal_power_coeff(m)
         for m in range(1, k + 1)]
    )
    k_best = int(np.argmax(coeff * cums)) + 1  # first max: smallest k on ties
    return np.sort(order[:k_best])


def select_by_threshold(alpha: float, eta) -> np.ndarray:
    """Players whose gain is within a factor alpha of the stage's best gain.

    Never empty: the best player always qualifies.  Returns ascending
    player indices.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    eta = np.asarray(eta, dtype=float)
    return np.nonzero(eta >= alpha * eta.max())[0]


def detect_deviation(expected_sinr: float, observed_sinr: float, tol: float,
                     floor: float = 1e-12) -> bool:
    """Relative SINR mismatch test with an absolute floor."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return abs(observed_sinr - expected_sinr) > tol * max(expected_sinr, floor)


def stage_action(kind: StrategyKind, params: GameParams, signal: SignalProfile,
                 punish: PunishmentState, i: int) -> float:
    """Power chosen by player i given its signals and punishment state."""
    if punish.triggered:
        return _nash_power(params, signal.own_gain, i)
    name = kind.name
    if name == "nash":
        return _nash_power(params, signal.own_gain, i)
    if name == "operating_point":
        return _equal_power(params, params.n_players, signal.own_gain, i)
    if name == "time_sharing":
        if signal.recommended is None:
            raise InformationError("time sharing needs the recommendation signal")
        if not signal.recommended:
            return 0.0
        # solo transmitter: single-user optimum, capped like a best response
        return float(min(params.beta_star * params.sigma2 / signal.own_gain,
                         params.p_max[i]))
    if name in ("threshold", "best_users"):
        if signal.recommended is None:
            raise InformationError(f"{name} needs the recommendation signal")
        if not signal.recommended:
            return 0.0
        if signal.k_active is None or signal.k_active < 1:
            raise InformationError(f"{name} needs the recommended player count")
        return _equal_power(params, signal.k_active, signal.own_gain, i)
    if name == "social_optimum":
        if signal.global_state is None:
            raise InformationError("social optimum needs the full gain vector")
        powers, _ = social_optimum(params, signal.global_state, kind.grid_size)
        return float(powers[i])
    raise ValueError(f"unknown strategy kind {name!r}")


def _nash_power(params: GameParams, gain: float, i: int) -> float:
    from .errors import SaturationError

    p = params.nash_scale() / gain
    if p > params.p_max[i]:
        raise SaturationError(f"equilibrium power {p:.6g} exceeds player {i}'s cap")
    return float(p)


def _equal_power(params: GameParams, k_active: int, gain: float, i: int) -> float:
    from .errors import CapError

    p = params.equal_power_coeff(k_active) / gain
    if p > params.p_max[i]:
        raise CapError(
            f"equal-received-power level {p:.6g} exceeds player {i}'s cap"
        )
    return float(p)


def compliant_profile(params: GameParams, kind: StrategyKind, eta: np.ndarray):
    """Vectorized compliant play of one rule over many realizations.

    ``eta`` has shape (N, K).  Returns ``(powers, recommended, k_active)``
    with shapes (N, K), (N, K) bool and (N,) int.  Matches ``stage_action``
    row by row when nobody is punishing.
    """
    from .errors import CapError, SaturationError

    eta = np.atleast_2d(np.asarray(eta, dtype=float))
    n, k = eta.shape
    if k != params.n_players:
        raise ValueError(f"expected {params.n_players} columns, got {k}")
    name = kind.name

    if name == "nash":
        powers = params.nash_scale() / eta
        if np.any(powers > params.p_max):
            raise SaturationError("equilibrium powers exceed a cap")
        return powers, np.ones_like(powers, dtype=bool), np.full(n, k)

    if name == "operating_point":
        powers = params.equal_power_coeff(k) / eta
        if np.any(powers > params.p_max):
            raise CapError("equal-received-power profile exceeds a cap")
        return powers, np.ones_like(powers, dtype=bool), np.full(n, k)

    if name == "time_sharing":
        winner = np.argmax(eta, axis=1)  # first max: lowest index wins ties
        recommended = np.zeros((n, k), dtype=bool)
        recommended[np.arange(n), winner] = True
        solo = params.beta_star * params.sigma2 / eta[np.arange(n), winner]
        solo = np.minimum(solo, params.p_max[winner])
        powers = np.zeros((n, k))
        powers[np.arange(n), winner] = solo
        return powers, recommended, np.ones(n, dtype=int)

    if name == "threshold":
        recommended = eta >= kind.alpha * eta.max(axis=1, keepdims=True)
        return _equal_power_rows(params, eta, recommended)

    if name == "best_users":
        rate = params.require_equal_rates()
        order = np.argsort(-eta, axis=1, kind="stable")
        cums = np.cumsum(np.take_along_axis(eta, order, axis=1), axis=1)
        coeff = np.array(
            [rate * params.eff.value(params.gamma_tilde(m)) / params.equal_power_coeff(m)
             for m in range(1, k + 1)]
        )
        k_star = np.argmax(coeff * cums, axis=1) + 1
        recommended = np.zeros((n, k), dtype=bool)
        in_prefix = np.arange(k) < k_star[:, None]
        np.put_along_axis(recommended, order, in_prefix, axis=1)
        return _equal_power_rows(params, eta, recommended)

    if name == "social_optimum":
        powers = np.zeros((n, k))
        cache: dict[bytes, np.ndarray] = {}
        for row in range(n):
            key = eta[row].tobytes()
            if key not in cache:
                cache[key], _ = social_optimum(params, eta[row], kind.grid_size)
            powers[row] = cache[key]
        recommended = powers > 0
        return powers, recommended, recommended.sum(axis=1).astype(int)

    raise ValueError(f"unknown strategy kind {name!r}")


def _equal_power_rows(params: GameParams, eta, recommended):
    from .errors import CapError

    n, k = eta.shape
    k_active = recommended.sum(axis=1).astype(int)
    coeffs = np.array([np.nan] + [params.equal_power_coeff(m) for m in range(1, k + 1)])
    powers = np.where(recommended, coeffs[k_active][:, None] / eta, 0.0)
    if np.any(powers > params.p_max):
        raise CapError("equal-received-power profile exceeds a cap")
    return powers, recommended, k_active
