"""Entanglement quantifiers of pure bipartite states."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matcore
from .config import DEFAULT_TOLERANCES
from .errors import NumericalFailure
from .states import PureState, reduced_state, schmidt


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    negativity: float
    rank: int
    gamma: Optional[float] = None  # common Bloch-vector norm, two-qubit only

    @property
    def separable(self):
        return self.concurrence < DEFAULT_TOLERANCES.separable


def pair_sum(x):
    """``sum_{i<j} x_i x_j`` without the cancellation of ``((sum x)^2 - sum x^2)/2``."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(np.triu(np.outer(x, x), k=1)))


def _all_lambdas(psi: PureState):
    s = matcore.svd(psi.coefficients)[1]
    lam = s**2
    return lam / lam.sum()


def concurrence_purity_form(psi: PureState) -> float:
    """``sqrt(2 (1 - tr tau_1^2))`` evaluated on the reduced matrix."""
    tau = reduced_state(psi, 1)
    purity = float(np.sum(np.abs(tau) ** 2))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def concurrence_schmidt_form(lambdas) -> float:
    """``2 sqrt(sum_{i<j} lambda_i lambda_j)``."""
    return 2.0 * float(np.sqrt(pair_sum(lambdas)))


def concurrence(psi: PureState, check=True) -> float:
    """Unnormalized concurrence of a pure state.

    Both the purity form and the Schmidt form are computed. The Schmidt form
    is returned because it has no cancellation near separable states; the
    squared values of the two forms must agree to the configured tolerance.
    """
    c = concurrence_schmidt_form(_all_lambdas(psi))
    if check:
        cp = concurrence_purity_form(psi)
        if abs(cp * cp - c * c) > DEFAULT_TOLERANCES.concurrence_forms:
            raise NumericalFailure(
                f"concurrence forms disagree: purity {cp!r} vs Schmidt {c!r}"
            )
    return c


def concurrence_max(d: int) -> float:
    """Largest concurrence for local dimension ``d``: ``sqrt(2(d-1)/d)``."""
    return float(np.sqrt(2.0 * (d - 1) / d))


def negativity(psi: PureState) -> float:
    """``sum_{i<j} sqrt(lambda_i lambda_j)`` over Schmidt coefficients."""
    return pair_sum(np.sqrt(_all_lambdas(psi)))


def entanglement_report(psi: PureState, tol=DEFAULT_TOLERANCES.schmidt_rank):
    gamma = None
    if psi.dims == (2, 2):
        from .twoqubit import bloch_vector

        gamma = float(np.linalg.norm(bloch_vector(reduced_state(psi, 1))))
    return EntanglementReport(
        concurrence=concurrence(psi),
        negativity=negativity(psi),
        rank=schmidt(psi, tol).rank,
        gamma=gamma,
    )
