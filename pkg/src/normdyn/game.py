"""Two-action games: coordination/fixed-payoff blend, its reduction, and shocks.

The model blends a pure coordination game (payoff only when both players
match) with a fixed-payoff game (payoff depends only on one's own action),
weighted by the need-for-coordination parameter ``c``:

    M = c * M_coord + (1 - c) * M_fixed

When the two component games agree on the payoff gap between the actions
(``a_c - b_c == a_f - b_f``), adding the constant ``(1 - c) * (a_c - a_f)``
to every entry of M collapses it to the two-parameter reduced form

    M'_AA = a    M'_AB = (1-c) * a
    M'_BA = (1-c) * b    M'_BB = b

which is what every other module operates on. A structural shock swaps
``a`` and ``b``, flipping which action is globally optimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ConstraintViolation, NonPositivePayoff

# Tolerance for the reduction hypothesis a_c - b_c == a_f - b_f. Inputs are
# user-specified constants, so an absolute check is appropriate.
REDUCTION_TOL = 1e-12


class Action(IntEnum):
    """The two possible norms. The order A < B is for serialization only."""

    A = 0
    B = 1


@dataclass(frozen=True)
class GameSpec:
    """Raw payoff parameters of the two component games plus the weight c.

    a_c, b_c parameterize the coordination game; a_f, b_f the fixed-payoff
    game; c in [0, 1] is the need for coordination.
    """

    a_c: float
    b_c: float
    a_f: float
    b_f: float
    c: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.c <= 1.0:
            raise ConstraintViolation(f"c must be in [0, 1], got {self.c}")

    @property
    def is_reducible(self) -> bool:
        """Whether the equal-payoff-gap hypothesis holds within tolerance."""
        return abs((self.a_c - self.b_c) - (self.a_f - self.b_f)) <= REDUCTION_TOL


@dataclass(frozen=True)
class ReducedGame:
    """The two-parameter reduced game M' with a, b > 0 and weight c."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b > 0.0):
            raise NonPositivePayoff(f"payoffs must be > 0, got a={self.a}, b={self.b}")
        if not 0.0 <= self.c <= 1.0:
            raise ConstraintViolation(f"c must be in [0, 1], got {self.c}")

    def to_matrix(self) -> PayoffMatrix:
        return PayoffMatrix(
            m_aa=self.a,
            m_ab=(1.0 - self.c) * self.a,
            m_ba=(1.0 - self.c) * self.b,
            m_bb=self.b,
        )


@dataclass(frozen=True)
class PayoffMatrix:
    """Row player's payoffs of a symmetric 2x2 game.

    ``entry(mine, theirs)`` is what I earn playing ``mine`` against
    ``theirs``. The implied bimatrix is symmetric: the column player's
    payoff at (x, y) equals the row player's at (y, x).
    """

    m_aa: float
    m_ab: float
    m_ba: float
    m_bb: float

    def entry(self, mine: Action, theirs: Action) -> float:
        if mine == Action.A:
            return self.m_aa if theirs == Action.A else self.m_ab
        return self.m_ba if theirs == Action.A else self.m_bb

    def column_payoff(self, row: Action, col: Action) -> float:
        """Column player's payoff at profile (row, col)."""
        return self.entry(col, row)

    def shifted(self, gamma: float) -> PayoffMatrix:
        """The same game with ``gamma`` added to every entry."""
        return PayoffMatrix(
            self.m_aa + gamma, self.m_ab + gamma, self.m_ba + gamma, self.m_bb + gamma
        )

    def as_array(self) -> np.ndarray:
        """2x2 array indexed [mine, theirs]."""
        return np.array([[self.m_aa, self.m_ab], [self.m_ba, self.m_bb]])


def weighted_matrix(spec: GameSpec) -> PayoffMatrix:
    """The c-weighted blend of the coordination and fixed-payoff games."""
    c = spec.c
    return PayoffMatrix(
        m_aa=c * spec.a_c + (1.0 - c) * spec.a_f,
        m_ab=(1.0 - c) * spec.a_f,
        m_ba=(1.0 - c) * spec.b_f,
        m_bb=c * spec.b_c + (1.0 - c) * spec.b_f,
    )


def reduce(spec: GameSpec) -> ReducedGame:
    """Collapse a GameSpec to its reduced form.

    Requires the equal-payoff-gap hypothesis and positive coordination
    payoffs. The reduced game's matrix equals the weighted matrix with
    ``reduction_shift(spec)`` added to every entry, and constant shifts
    do not change best responses, equilibria, or any of the dynamics.
    """
    if not spec.is_reducible:
        raise ConstraintViolation(
            "reduction requires a_c - b_c == a_f - b_f "
            f"(got {spec.a_c - spec.b_c} vs {spec.a_f - spec.b_f})"
        )
    if not (spec.a_c > 0.0 and spec.b_c > 0.0):
        raise NonPositivePayoff(
            f"reduction requires a_c, b_c > 0, got a_c={spec.a_c}, b_c={spec.b_c}"
        )
    return ReducedGame(a=spec.a_c, b=spec.b_c, c=spec.c)


def reduction_shift(spec: GameSpec) -> float:
    """The constant that maps weighted_matrix(spec) onto reduce(spec)'s matrix.

    Entrywise: weighted + shift == reduced. Note the factor (1 - c): adding
    the bare gap a_c - a_f does not reproduce the reduced matrix.
    """
    return (1.0 - spec.c) * (spec.a_c - spec.a_f)


def apply_shock(g: ReducedGame) -> ReducedGame:
    """Swap the payoff parameters of the two actions (an involution)."""
    return ReducedGame(a=g.b, b=g.a, c=g.c)


def payoff(g: ReducedGame, mine: Action, theirs: Action) -> float:
    """Reduced-game payoff for playing ``mine`` against ``theirs``."""
    base = g.a if mine == Action.A else g.b
    return base if mine == theirs else (1.0 - g.c) * base
