"""Gisin-Peres CHSH value and concurrence bounds on the maximal Bell violation.

All quantities are ratios to the classical CHSH bound 2, so a value above
one certifies nonlocality.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_TOLERANCES
from .entanglement import concurrence, concurrence_schmidt_form
from .errors import ContractViolation
from .states import PureState, schmidt


def _desc(sd):
    return np.sort(np.asarray(sd.lambdas, dtype=float))[::-1]


def beta(sd) -> float:
    """Smallest Schmidt coefficient for odd rank, zero for even rank."""
    lam = _desc(sd)
    return float(lam[-1]) if len(lam) % 2 else 0.0


def big_k(sd) -> float:
    """``2 (sqrt(l1 l2) + sqrt(l3 l4) + ...)`` over consecutive sorted pairs.

    For odd rank the last coefficient is left unpaired; rank one gives 0.
    """
    lam = _desc(sd)
    npair = len(lam) // 2
    if npair == 0:
        return 0.0
    return 2.0 * float(np.sum(np.sqrt(lam[0 : 2 * npair : 2] * lam[1 : 2 * npair : 2])))


def gp_from_beta_k(b, k):
    return b + float(np.sqrt((1.0 - b) ** 2 + k * k))


def gp_chsh_value(sd) -> float:
    """Gisin-Peres CHSH value divided by 2: ``beta + sqrt((1-beta)^2 + K^2)``."""
    return gp_from_beta_k(beta(sd), big_k(sd))


def _check_consistent(sd, c):
    expect = concurrence_schmidt_form(sd.lambdas)
    if abs(expect - c) > DEFAULT_TOLERANCES.concurrence_forms:
        raise ContractViolation(
            f"concurrence {c!r} inconsistent with Schmidt coefficients ({expect!r})"
        )


def lb_thm4(sd, c) -> float:
    """Lower bound ``sqrt(1 + C^2 / (2r - 3)^2)`` on the maximal Bell violation (1 at rank 1)."""
    _check_consistent(sd, c)
    r = sd.rank
    if r == 1:
        return 1.0
    return float(np.sqrt(1.0 + c * c / (2 * r - 3) ** 2))


def k_lower_bound_check(sd, c) -> float:
    """Slack ``K - C/(2r - 3)``; nonnegative for every rank >= 2 state."""
    if sd.rank < 2:
        raise ContractViolation("k_lower_bound_check needs Schmidt rank >= 2")
    return big_k(sd) - c / (2 * sd.rank - 3)


def ub_pure(rank, c):
    return 1.0 + float(np.sqrt(2.0 * rank * (rank - 1))) * c


def ub_general(d, c):
    return 1.0 + float(np.sqrt(2.0 * d * (d - 1))) * c


def ub_dim(d1, d2):
    return 2 * min(d1, d2) - 1


@dataclass(frozen=True)
class BoundsReport:
    rank: int
    concurrence: float
    beta: float
    bigK: float
    gp_value: float
    gp_raw: float
    lb_sqrt1K2: float
    lb_thm4: float
    ub_pure: float
    ub_general: float
    ub_dim: int
    k_slack: Optional[float]
    eq37_slack: float

    def chain(self):
        """The ordered bound chain, each entry expected >= the previous one."""
        return [
            ("one", 1.0),
            ("lb_thm4", self.lb_thm4),
            ("lb_sqrt1K2", self.lb_sqrt1K2),
            ("gp_value", self.gp_value),
            ("ub_pure", self.ub_pure),
            ("ub_general", self.ub_general),
        ]

    def chain_violation(self) -> float:
        """Largest amount by which a link of the chain (or eq. slack) is broken; 0 if none."""
        vals = [v for _, v in self.chain()]
        worst = max(0.0, max(a - b for a, b in zip(vals, vals[1:])))
        worst = max(worst, -self.eq37_slack)
        if self.k_slack is not None:
            worst = max(worst, -self.k_slack)
        return worst


def bounds_report(psi: PureState, tol=DEFAULT_TOLERANCES.schmidt_rank) -> BoundsReport:
    sd = schmidt(psi, tol)
    c = concurrence(psi)
    # rank-truncation can shift C by far less than the consistency tolerance
    c_sd = concurrence_schmidt_form(sd.lambdas)
    b, k = beta(sd), big_k(sd)
    gp = gp_from_beta_k(b, k)
    sq = float(np.sqrt(1.0 + k * k))
    return BoundsReport(
        rank=sd.rank,
        concurrence=c,
        beta=b,
        bigK=k,
        gp_value=gp,
        gp_raw=2.0 * gp,
        lb_sqrt1K2=sq,
        lb_thm4=lb_thm4(sd, c_sd),
        ub_pure=ub_pure(sd.rank, c),
        ub_general=ub_general(min(psi.dims), c),
        ub_dim=ub_dim(*psi.dims),
        k_slack=k_lower_bound_check(sd, c_sd) if sd.rank >= 2 else None,
        eq37_slack=gp - sq,
    )
