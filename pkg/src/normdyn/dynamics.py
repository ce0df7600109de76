"""Deterministic population dynamics for the infinite well-mixed model.

The share x_A of the population on action A evolves by the replicator rule
(growth proportional to the payoff advantage over the population average),
optionally with an exploration flow at rate mu toward random strategies.
Closed forms on the reduced game:

    replicator:  dx/dt = x (1-x) (c (a+b) x - (b - (1-c) a))
    with mu:     ... + mu (x (1-x) (1-c) (b-a) + ((1-x)^2 b - x^2 a))

Both are also computed definitionally from expected payoffs so that tests
can verify the algebra and the invariance to constant payoff shifts.
Integration is fixed-step RK4 with states clamped to [0, 1].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernel
from .errors import ConstraintViolation, NonFiniteState
from .game import PayoffMatrix, ReducedGame

KINDS = ("replicator", "replicator_mutator")

DEFAULT_DT = 0.01
DEFAULT_T_MAX = 200.0


@dataclass(frozen=True)
class PopulationState:
    """Share of the population on action A; the rest plays B."""

    x_A: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.x_A <= 1.0:
            raise ConstraintViolation(f"x_A must be in [0, 1], got {self.x_A}")

    @property
    def x_B(self) -> float:
        return 1.0 - self.x_A


@dataclass(frozen=True)
class DynamicsParams:
    kind: str = "replicator"
    mu: float = 0.0
    dt: float = DEFAULT_DT
    t_max: float = DEFAULT_T_MAX

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConstraintViolation(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 0.0 <= self.mu <= 1.0:
            raise ConstraintViolation(f"mu must be in [0, 1], got {self.mu}")
        if not self.dt > 0.0:
            raise ConstraintViolation(f"dt must be > 0, got {self.dt}")
        if self.dt > self.t_max:
            raise ConstraintViolation(f"dt must not exceed t_max ({self.dt} > {self.t_max})")

    @property
    def effective_mu(self) -> float:
        return self.mu if self.kind == "replicator_mutator" else 0.0


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    x_a: np.ndarray
    rates: np.ndarray
    params: DynamicsParams = field(repr=False, default=DynamicsParams())

    def __len__(self) -> int:
        return len(self.times)

    @property
    def x_b(self) -> np.ndarray:
        return 1.0 - self.x_a

    def state(self, i: int) -> PopulationState:
        return PopulationState(float(self.x_a[i]))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x_A", "x_B", "rate"])
            for t, xa, r in zip(self.times, self.x_a, self.rates):
                w.writerow([repr(float(t)), repr(float(xa)), repr(1.0 - float(xa)), repr(float(r))])


def replicator_rate(g: ReducedGame, x_a: float) -> float:
    """Closed-form growth rate of x_A under the reduced game."""
    return x_a * (1.0 - x_a) * (g.c * (g.a + g.b) * x_a - (g.b - (1.0 - g.c) * g.a))


def mutator_rate(g: ReducedGame, x_a: float, mu: float) -> float:
    """Replicator rate plus the exploration flow at rate mu."""
    x_b = 1.0 - x_a
    return replicator_rate(g, x_a) + mu * (
        x_a * x_b * (1.0 - g.c) * (g.b - g.a) + (x_b * x_b * g.b - x_a * x_a * g.a)
    )


def expected_payoffs(m: PayoffMatrix, x_a: float) -> tuple[float, float]:
    """Expected payoffs (E[u_A], E[u_B]) against a random opponent."""
    x_b = 1.0 - x_a
    return (x_a * m.m_aa + x_b * m.m_ab, x_a * m.m_ba + x_b * m.m_bb)


def replicator_rate_from_matrix(m: PayoffMatrix, x_a: float) -> float:
    """Definitional form x_A (E[u_A] - avg); works on any payoff matrix.

    Only payoff differences enter, so shifting every matrix entry by a
    constant leaves the value unchanged up to rounding.
    """
    e_a, e_b = expected_payoffs(m, x_a)
    theta = x_a * e_a + (1.0 - x_a) * e_b
    return x_a * (e_a - theta)


def mutator_rate_from_matrix(m: PayoffMatrix, x_a: float, mu: float) -> float:
    """Definitional form (1-mu) x_A E[u_A] + mu x_B E[u_B] - x_A avg.

    The exploration inflow to A is carried by B-players' reproduction,
    weighted by their share x_B; this is what the closed form expands to.
    """
    x_b = 1.0 - x_a
    e_a, e_b = expected_payoffs(m, x_a)
    theta = x_a * e_a + x_b * e_b
    return (1.0 - mu) * x_a * e_a + mu * x_b * e_b - x_a * theta


def rate_of_b(g: ReducedGame, x_b: float, mu: float = 0.0) -> float:
    """Growth rate of the B share (the negated A rate)."""
    return -mutator_rate(g, 1.0 - x_b, mu)


def rate_difference(g1: ReducedGame, g2: ReducedGame, x_b: float) -> float:
    """Difference of the B-share growth rates of two games sharing (a, b).

    Closed form x_B (1 - x_B) (c2 - c1) ((a+b) x_B - b): non-positive up to
    the crossover x_B = b / (a+b) and positive above it, meaning the
    higher-coordination society changes more slowly early in a transition.
    """
    if g1.a != g2.a or g1.b != g2.b:
        raise ConstraintViolation(
            f"games must share payoffs, got (a, b) = ({g1.a}, {g1.b}) vs ({g2.a}, {g2.b})"
        )
    if not g2.c > g1.c:
        raise ConstraintViolation(f"need c2 > c1, got c1={g1.c}, c2={g2.c}")
    a, b = g1.a, g1.b
    return x_b * (1.0 - x_b) * (g2.c - g1.c) * ((a + b) * x_b - b)


def integrate(g: ReducedGame, x0: float, params: DynamicsParams) -> Trajectory:
    """Fixed-step RK4 from t = 0 through round(t_max / dt) steps.

    States are clamped to [0, 1] after each step (boundary fixed points are
    exact, so this only absorbs last-ulp rounding). Raises NonFiniteState
    if a step diverges, which signals an oversized dt.
    """
    if not 0.0 <= x0 <= 1.0:
        raise ConstraintViolation(f"x0 must be in [0, 1], got {x0}")
    mu = params.effective_mu
    n_steps = int(round(params.t_max / params.dt))
    states = np.empty(n_steps + 1, dtype=np.float64)
    bad = _kernel.rk4_path(g.a, g.b, g.c, mu, x0, params.dt, n_steps, states)
    if bad >= 0:
        raise NonFiniteState(
            f"non-finite state at step {bad} (t={bad * params.dt}); reduce dt"
        )
    times = np.arange(n_steps + 1, dtype=np.float64) * params.dt
    rates = np.array([mutator_rate(g, float(x), mu) for x in states])
    return Trajectory(times=times, x_a=states, rates=rates, params=params)


def reference_final_state(g: ReducedGame, x0: float, dt: float, t_max: float, mu: float = 0.0) -> float:
    """Final x_A from a (possibly very fine) fixed-step RK4 run."""
    n_steps = int(round(t_max / dt))
    x = _kernel.rk4_final(g.a, g.b, g.c, mu, x0, dt, n_steps)
    if not np.isfinite(x):
        raise NonFiniteState("reference integration diverged; reduce dt")
    return float(x)


def first_crossing_time(
    times: np.ndarray, values: np.ndarray, level: float
) -> Optional[float]:
    """First time the series reaches the level, linearly interpolated.

    Crossings are detected in either direction; returns None if the series
    never reaches the level.
    """
    values = np.asarray(values, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if values[0] == level:
        return float(times[0])
    above = values >= level if values[0] < level else values <= level
    hits = np.nonzero(above)[0]
    if len(hits) == 0:
        return None
    i = int(hits[0])
    v0, v1 = values[i - 1], values[i]
    if v1 == v0:
        return float(times[i])
    frac = (level - v0) / (v1 - v0)
    return float(times[i - 1] + frac * (times[i] - times[i - 1]))
