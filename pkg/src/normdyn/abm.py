"""Finite-population simulation on a network with Fermi-rule imitation.

Each iteration has three synchronous phases:

1. every edge plays the reduced game once and each agent aggregates its
   payoff over its games (mean per game by default, or raw sum);
2. every agent samples one uniform-random neighbor from the pre-update
   snapshot and adopts that neighbor's strategy with logistic probability
   ``1 / (1 + exp(-s * (u_neighbor - u_self)))`` (the switch becomes more
   likely when the neighbor is doing better);
3. every agent explores with probability equal to its exploration rate,
   replacing its strategy with a uniform draw from the strategy space.

A structural shock swaps the game's payoff parameters between iterations.
In evolving mode the exploration rate itself is part of the heritable
strategy: adoption copies action and rate together, and exploration can
re-draw both (``full_strategy`` scope) or just the action (``action_only``).

Replicates are pure functions of (config, replicate_index): the RNG stream
is seeded from both, and the network (when random) is generated from the
same stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernel
from .errors import ConfigError, ConstraintViolation
from .game import Action, PayoffMatrix, ReducedGame, apply_shock
from .networks import Network, NetworkSpec, TorusSpec, build_network

DEFAULT_FERMI_S = 5.0
DEFAULT_MU = 0.01
DEFAULT_RATE_SET = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)

EXPLORE_SCOPES = ("full_strategy", "action_only")
AGGREGATIONS = ("mean", "sum")


@dataclass(frozen=True)
class FixedExploration:
    """Every agent explores at the same immutable rate."""

    mu: float = DEFAULT_MU

    def __post_init__(self) -> None:
        if not 0.0 <= self.mu <= 1.0:
            raise ConfigError(f"mu must be in [0, 1], got {self.mu}")


@dataclass(frozen=True)
class EvolvingExploration:
    """Exploration rate is part of the strategy, drawn from a finite set."""

    rates: tuple[float, ...] = DEFAULT_RATE_SET
    scope: str = "full_strategy"

    def __post_init__(self) -> None:
        if len(self.rates) == 0:
            raise ConfigError("rate set must be non-empty")
        for r in self.rates:
            if not 0.0 <= r <= 1.0:
                raise ConfigError(f"exploration rates must be in [0, 1], got {r}")
        if self.scope not in EXPLORE_SCOPES:
            raise ConfigError(f"scope must be one of {EXPLORE_SCOPES}, got {self.scope!r}")


ExplorationMode = Union[FixedExploration, EvolvingExploration]


@dataclass(frozen=True)
class PeriodicShocks:
    """A shock every ``interval`` iterations (at interval, 2*interval, ...)."""

    interval: int

    def __post_init__(self) -> None:
        if self.interval <= 0:
            raise ConfigError(f"shock interval must be positive, got {self.interval}")


ShockSchedule = Union[Sequence[int], PeriodicShocks, None]


@dataclass(frozen=True)
class SimConfig:
    game: ReducedGame
    network: NetworkSpec = TorusSpec(50, 50)
    iterations: int = 6000
    fermi_s: float = DEFAULT_FERMI_S
    exploration: ExplorationMode = FixedExploration()
    shocks: ShockSchedule = None
    replicates: int = 100
    base_seed: int = 42
    payoff_aggregation: str = "mean"
    inject: Optional[float] = None

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ConfigError(f"iterations must be >= 0, got {self.iterations}")
        if not self.fermi_s > 0.0:
            raise ConfigError(f"fermi_s must be > 0, got {self.fermi_s}")
        if self.replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        if self.base_seed < 0:
            raise ConfigError(f"base_seed must be >= 0, got {self.base_seed}")
        if self.payoff_aggregation not in AGGREGATIONS:
            raise ConfigError(
                f"payoff_aggregation must be one of {AGGREGATIONS}, got {self.payoff_aggregation!r}"
            )
        if self.inject is not None and not 0.0 < self.inject <= 1.0:
            raise ConfigError(f"inject must be in (0, 1], got {self.inject}")
        self.shock_iterations()  # validates explicit schedules

    def shock_iterations(self) -> tuple[int, ...]:
        """The resolved, validated shock schedule."""
        if self.shocks is None:
            return ()
        if isinstance(self.shocks, PeriodicShocks):
            step = self.shocks.interval
            return tuple(range(step, self.iterations, step))
        shocks = tuple(int(s) for s in self.shocks)
        for prev, cur in zip(shocks, shocks[1:]):
            if cur <= prev:
                raise ConfigError(f"shock iterations must be strictly increasing: {shocks}")
        if shocks and (shocks[0] < 0 or shocks[-1] >= self.iterations):
            raise ConfigError(
                f"shock iterations must lie in [0, {self.iterations}), got {shocks}"
            )
        return shocks

    @property
    def evolving(self) -> bool:
        return isinstance(self.exploration, EvolvingExploration)


@dataclass
class AgentGrid:
    """One replicate's live state: strategies plus its RNG stream.

    ``rate_idx`` indexes the configured rate set in evolving mode and is
    None in fixed-rate mode.
    """

    network: Network
    actions: np.ndarray
    rate_idx: Optional[np.ndarray]
    rng: np.random.Generator

    @property
    def prop_a(self) -> float:
        return float(np.count_nonzero(self.actions == 0) / len(self.actions))

    def exploration_rates(self, cfg: SimConfig) -> np.ndarray:
        if self.rate_idx is None:
            assert isinstance(cfg.exploration, FixedExploration)
            return np.full(len(self.actions), cfg.exploration.mu)
        rates = np.asarray(cfg.exploration.rates)
        return rates[self.rate_idx]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    prop_A: float
    prop_B: float
    rate_shares: Optional[dict[float, float]] = None


@dataclass(frozen=True)
class ReplicateSeries:
    """Array view of one replicate's records (fast path for aggregation)."""

    prop_a: np.ndarray
    rate_shares: Optional[np.ndarray] = None
    rates: Optional[tuple[float, ...]] = None

    @property
    def prop_b(self) -> np.ndarray:
        return 1.0 - self.prop_a

    def records(self) -> list[IterationRecord]:
        out = []
        for i, pa in enumerate(self.prop_a):
            shares = None
            if self.rate_shares is not None:
                shares = {
                    r: float(self.rate_shares[i, k]) for k, r in enumerate(self.rates)
                }
            pa = float(pa)
            out.append(IterationRecord(i, pa, 1.0 - pa, shares))
        return out


def fermi_probability(u_self: float, u_neighbor: float, s: float) -> float:
    """Probability of copying the neighbor: logistic in the payoff gap."""
    if not s > 0.0:
        raise ConstraintViolation(f"s must be > 0, got {s}")
    z = s * (u_neighbor - u_self)
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def total_payoffs(
    network: Network, actions: np.ndarray, matrix: PayoffMatrix, mean: bool = True
) -> np.ndarray:
    """Aggregate payoff of every agent after all edges play once.

    Works for any 2x2 payoff matrix, which lets tests check shift
    invariance on the unreduced game.
    """
    deg = network.degrees
    owners = np.repeat(np.arange(network.node_count), deg)
    nb = np.bincount(
        owners, weights=actions[network.neighbors], minlength=network.node_count
    )
    na = deg - nb
    u = np.where(
        actions == 0,
        matrix.m_aa * na + matrix.m_ab * nb,
        matrix.m_ba * na + matrix.m_bb * nb,
    )
    if mean:
        u = np.divide(u, deg, out=np.zeros_like(u), where=deg > 0)
    return u


def _rate_array(cfg: SimConfig) -> np.ndarray:
    if cfg.evolving:
        return np.asarray(cfg.exploration.rates, dtype=np.float64)
    return np.empty(0, dtype=np.float64)


def _run_segment(
    grid_actions: np.ndarray,
    grid_rate_idx: Optional[np.ndarray],
    network: Network,
    game: ReducedGame,
    cfg: SimConfig,
    rng: np.random.Generator,
    n_iters: int,
    prop_a: np.ndarray,
    shares: np.ndarray,
    out_start: int,
) -> None:
    m = game.to_matrix()
    rates = _rate_array(cfg)
    rate_idx = grid_rate_idx if grid_rate_idx is not None else np.empty(0, dtype=np.int8)
    full_scope = cfg.evolving and cfg.exploration.scope == "full_strategy"
    mu_fixed = cfg.exploration.mu if not cfg.evolving else 0.0
    _kernel.simulate_segment(
        network.neighbors,
        network.offsets,
        grid_actions,
        rate_idx,
        rates,
        mu_fixed,
        full_scope,
        m.m_aa,
        m.m_ab,
        m.m_ba,
        m.m_bb,
        cfg.fermi_s,
        cfg.payoff_aggregation == "mean",
        n_iters,
        rng,
        prop_a,
        shares,
        out_start,
    )


def step(state: AgentGrid, g: ReducedGame, cfg: SimConfig) -> AgentGrid:
    """One synchronous iteration; returns the successor state.

    The returned grid shares the network and the (advanced) RNG with the
    input; strategy arrays are fresh copies.
    """
    if cfg.evolving and state.rate_idx is None:
        raise ConfigError("evolving exploration requires a grid with rate indices")
    actions = state.actions.copy()
    rate_idx = None if state.rate_idx is None else state.rate_idx.copy()
    n_l = len(cfg.exploration.rates) if cfg.evolving else 0
    prop_a = np.empty(1, dtype=np.float64)
    shares = np.zeros((1, n_l), dtype=np.float64)
    _run_segment(actions, rate_idx, state.network, g, cfg, state.rng, 1, prop_a, shares, 0)
    return AgentGrid(network=state.network, actions=actions, rate_idx=rate_idx, rng=state.rng)


def initial_grid(cfg: SimConfig, rng: np.random.Generator) -> AgentGrid:
    """Random network (when applicable) plus uniform-random strategies."""
    network = build_network(cfg.network, rng)
    n = network.node_count
    actions = rng.integers(0, 2, n).astype(np.int8)
    rate_idx = None
    if cfg.evolving:
        rate_idx = rng.integers(0, len(cfg.exploration.rates), n).astype(np.int8)
    return AgentGrid(network=network, actions=actions, rate_idx=rate_idx, rng=rng)


def _inject_optimal(actions: np.ndarray, game: ReducedGame, share: float, rng: np.random.Generator) -> None:
    """Force a random share of agents onto the currently optimal action."""
    n = len(actions)
    k = max(1, int(round(share * n)))
    target = Action.A if game.a >= game.b else Action.B
    chosen = rng.choice(n, size=min(k, n), replace=False)
    actions[chosen] = np.int8(target)


def replicate_rng(cfg: SimConfig, replicate_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([cfg.base_seed, replicate_index]))


def replicate_series(cfg: SimConfig, replicate_index: int) -> ReplicateSeries:
    """Run one full replicate and return its per-iteration series."""
    if replicate_index < 0:
        raise ConfigError(f"replicate_index must be >= 0, got {replicate_index}")
    rng = replicate_rng(cfg, replicate_index)
    grid = initial_grid(cfg, rng)
    n_l = len(cfg.exploration.rates) if cfg.evolving else 0
    prop_a = np.empty(cfg.iterations, dtype=np.float64)
    shares = np.zeros((cfg.iterations, n_l), dtype=np.float64)

    game = cfg.game
    pos = 0
    boundaries = list(cfg.shock_iterations()) + [cfg.iterations]
    for boundary in boundaries:
        seg = boundary - pos
        if seg > 0:
            _run_segment(
                grid.actions, grid.rate_idx, grid.network, game, cfg, rng,
                seg, prop_a, shares, pos,
            )
            pos = boundary
        if boundary < cfg.iterations:
            game = apply_shock(game)
            if cfg.inject is not None:
                _inject_optimal(grid.actions, game, cfg.inject, rng)

    if cfg.evolving:
        return ReplicateSeries(prop_a=prop_a, rate_shares=shares, rates=tuple(cfg.exploration.rates))
    return ReplicateSeries(prop_a=prop_a)


def run_replicate(cfg: SimConfig, replicate_index: int) -> list[IterationRecord]:
    """Per-iteration records of one replicate (deterministic in its inputs)."""
    return replicate_series(cfg, replicate_index).records()
