"""Closed-form equilibrium analysis of the reduced game.

For a reduced game with a, b > 0, the profile on the optimal action is
always a Nash equilibrium and an ESS. The profile on the sub-optimal
action becomes Nash once c reaches the threshold (gap / larger payoff),
and an ESS strictly above it. When c lies strictly above the threshold an
interior mixed equilibrium

    q = (b - (1-c) a) / (c (a + b))

exists; it is Nash but never an ESS and never a stable fixed point of the
population dynamics. ``invasion_oracle`` and ``best_response_scan`` give
brute-force cross-checks that are independent of the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ConstraintViolation
from .game import Action, ReducedGame, payoff


@dataclass(frozen=True)
class MixedStrategy:
    """Play A with probability q, B with probability 1 - q."""

    q: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q <= 1.0:
            raise ConstraintViolation(f"q must be in [0, 1], got {self.q}")


@dataclass(frozen=True)
class PureProfileStatus:
    is_nash: bool
    is_ess: bool
    is_stable_fixed_point: bool


@dataclass(frozen=True)
class MixedEquilibrium:
    """Interior equilibrium; present only when it is a genuine Nash point."""

    q: MixedStrategy
    is_nash: bool = True
    is_ess: bool = False
    is_stable_fixed_point: bool = False


@dataclass(frozen=True)
class Thresholds:
    """Coordination-need thresholds above which the sub-optimal pure profile
    is Nash (non-strict) and ESS (strict)."""

    c_star_A: float
    c_star_B: float


@dataclass(frozen=True)
class EquilibriumReport:
    pure_AA: PureProfileStatus
    pure_BB: PureProfileStatus
    mixed: Optional[MixedEquilibrium]
    thresholds: Thresholds
    # True exactly when c sits on the relevant Nash threshold: the
    # sub-optimal profile is then Nash but not an ESS.
    at_threshold: bool

    def to_dict(self) -> dict:
        def profile(p: PureProfileStatus) -> dict:
            return {
                "is_nash": p.is_nash,
                "is_ess": p.is_ess,
                "is_stable_fixed_point": p.is_stable_fixed_point,
            }

        mixed = None
        if self.mixed is not None:
            mixed = {
                "q": self.mixed.q.q,
                "is_nash": self.mixed.is_nash,
                "is_ess": self.mixed.is_ess,
                "is_stable_fixed_point": self.mixed.is_stable_fixed_point,
            }
        return {
            "pure_AA": profile(self.pure_AA),
            "pure_BB": profile(self.pure_BB),
            "mixed": mixed,
            "thresholds": {
                "c_star_A": self.thresholds.c_star_A,
                "c_star_B": self.thresholds.c_star_B,
            },
            "at_threshold": self.at_threshold,
        }


@dataclass(frozen=True)
class InvasionResult:
    resident_payoff: float
    invader_payoff: float
    resists: bool


def thresholds(g: ReducedGame) -> Thresholds:
    c_star_a = (g.b - g.a) / g.b if g.b > g.a else 0.0
    c_star_b = (g.a - g.b) / g.a if g.a > g.b else 0.0
    return Thresholds(c_star_A=c_star_a, c_star_B=c_star_b)


def mixed_q(g: ReducedGame) -> Optional[MixedStrategy]:
    """Closed-form interior equilibrium weight, when it is a probability.

    Absent for c = 0 (no interior equilibrium in a dominance game). At the
    exact Nash threshold the formula returns the boundary value 0 or 1.
    """
    if g.c <= 0.0:
        return None
    q = (g.b - (1.0 - g.c) * g.a) / (g.c * (g.a + g.b))
    if 0.0 <= q <= 1.0:
        return MixedStrategy(q)
    return None


def analyze(g: ReducedGame) -> EquilibriumReport:
    """Classify all equilibria of the reduced game.

    Nash uses non-strict payoff comparisons; ESS and replicator stability
    require the strict versions, so at c exactly equal to the threshold the
    sub-optimal profile is Nash but neither ESS nor stable. For a == b the
    classification is the continuity limit: both pure profiles are ESS for
    any c > 0, and for c == 0 every strategy earns the same payoff, so both
    pure profiles are Nash but nothing is an ESS.
    """
    a, b, c = g.a, g.b, g.c
    th = thresholds(g)

    if b > a:
        sub_thresh = th.c_star_A
        aa = PureProfileStatus(
            is_nash=c >= sub_thresh, is_ess=c > sub_thresh, is_stable_fixed_point=c > sub_thresh
        )
        bb = PureProfileStatus(True, True, True)
        at_thresh = c == sub_thresh
        mixed_present = c > sub_thresh and c > 0.0
    elif a > b:
        sub_thresh = th.c_star_B
        aa = PureProfileStatus(True, True, True)
        bb = PureProfileStatus(
            is_nash=c >= sub_thresh, is_ess=c > sub_thresh, is_stable_fixed_point=c > sub_thresh
        )
        at_thresh = c == sub_thresh
        mixed_present = c > sub_thresh and c > 0.0
    else:
        # a == b: symmetric game; strict resistance needs c > 0
        strict = c > 0.0
        aa = bb = PureProfileStatus(is_nash=True, is_ess=strict, is_stable_fixed_point=strict)
        at_thresh = c == 0.0
        mixed_present = c > 0.0

    mixed = None
    if mixed_present:
        q = (b - (1.0 - c) * a) / (c * (a + b))
        mixed = MixedEquilibrium(q=MixedStrategy(q))

    return EquilibriumReport(
        pure_AA=aa, pure_BB=bb, mixed=mixed, thresholds=th, at_threshold=at_thresh
    )


def invasion_oracle(
    g: ReducedGame, resident: Action, invader_share: float
) -> InvasionResult:
    """Expected payoffs when a share of invaders plays the opposite action.

    The population mixes (1 - eps) residents with eps invaders; both types'
    expected payoffs come from matching against a random member. The
    resident resists iff it earns strictly more.
    """
    if not 0.0 < invader_share < 1.0:
        raise ConstraintViolation(
            f"invader_share must be in (0, 1), got {invader_share}"
        )
    invader = Action.B if resident == Action.A else Action.A
    eps = invader_share
    res_pay = (1.0 - eps) * payoff(g, resident, resident) + eps * payoff(g, resident, invader)
    inv_pay = (1.0 - eps) * payoff(g, invader, resident) + eps * payoff(g, invader, invader)
    return InvasionResult(
        resident_payoff=res_pay,
        invader_payoff=inv_pay,
        resists=res_pay > inv_pay,
    )


def best_response_scan(g: ReducedGame, action: Action, grid_points: int = 10_001) -> bool:
    """Brute-force Nash check for the pure profile (action, action).

    Scans mixed deviations on a uniform grid and reports whether none earns
    strictly more than conforming does.
    """
    other = Action.B if action == Action.A else Action.A
    u_conform = payoff(g, action, action)
    u_same = u_conform
    u_other = payoff(g, other, action)
    step = 1.0 / (grid_points - 1)
    for k in range(grid_points):
        q_dev = k * step
        u_dev = q_dev * u_same + (1.0 - q_dev) * u_other
        if u_dev > u_conform:
            return False
    return True
