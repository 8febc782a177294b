"""See-saw maximization of the CHSH combination over dichotomic observables.

With Bob's pair fixed, the best Alice observables are the signs of the
conditioned reduced operators ``Tr_2[rho (I (x) (B1 +- B2))]`` and the
achieved value is the sum of their trace norms; Bob's step is symmetric.
Each half-step therefore never decreases the CHSH value. All restarts are
advanced together as one batch, but each restart owns its own RNG stream
(``seed + restart_index``) and stops independently, so the result does not
depend on how restarts are scheduled.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import matcore
from .config import DEFAULT_TOLERANCES
from .errors import ContractViolation, NumericalFailure
from .states import PureState
from .twoqubit import ChshSetting

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeeSawConfig:
    restarts: int = 32
    max_iters: int = 500
    conv_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ContractViolation("restarts must be >= 1")
        if self.max_iters < 1:
            raise ContractViolation("max_iters must be >= 1")
        if not self.conv_tol > 0:
            raise ContractViolation("conv_tol must be > 0")


@dataclass(frozen=True)
class SeeSawResult:
    setting: ChshSetting
    value: float
    ratio: float
    iterations_used: int
    restarts_used: int
    converged: bool
    best_restart: int
    max_monotone_drop: float = 0.0
    trajectories: Optional[list] = field(default=None, repr=False)


def _check_observable(a, d, name):
    a = np.asarray(a)
    if a.shape != (d, d):
        raise ContractViolation(f"{name} has shape {a.shape}, expected ({d}, {d})")
    if not matcore.is_hermitian(a):
        raise ContractViolation(f"{name} is not Hermitian")
    w = np.linalg.eigvalsh(a)
    if w.max() > 1 + DEFAULT_TOLERANCES.spectrum_bound or w.min() < -1 - DEFAULT_TOLERANCES.spectrum_bound:
        raise ContractViolation(f"{name} has spectrum outside [-1, 1]")
    return a


def evaluate_chsh(psi: PureState, setting) -> float:
    """``<A1 B1> + <A1 B2> + <A2 B1> - <A2 B2>`` in state ``psi``.

    ``setting`` is a :class:`ChshSetting` or a tuple ``(A1, A2, B1, B2)``.
    """
    if isinstance(setting, ChshSetting):
        setting = (setting.A1, setting.A2, setting.B1, setting.B2)
    a1, a2, b1, b2 = setting
    a1 = _check_observable(a1, psi.d1, "A1")
    a2 = _check_observable(a2, psi.d1, "A2")
    b1 = _check_observable(b1, psi.d2, "B1")
    b2 = _check_observable(b2, psi.d2, "B2")
    m = psi.coefficients

    def corr(a, b):
        return np.vdot(m, a @ m @ b.T)

    val = corr(a1, b1) + corr(a1, b2) + corr(a2, b1) - corr(a2, b2)
    if abs(val.imag) > DEFAULT_TOLERANCES.imag_residue:
        raise NumericalFailure(f"CHSH value has imaginary residue {val.imag!r}")
    return float(val.real)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_dichotomic(rng, d):
    return matcore.sign_operator(random_hermitian(rng, d))


def _trace_pair(a, m):
    # re tr(a_r m_r) for each batch entry r
    return np.einsum("rij,rji->r", a, m).real


def see_saw(psi: PureState, config: SeeSawConfig = SeeSawConfig(), record_trajectory=False):
    if psi.d1 < 2 or psi.d2 < 2:
        raise ContractViolation("see_saw needs local dimensions >= 2")
    rho = psi.density()
    n_r, d2 = config.restarts, psi.d2
    b1 = np.empty((n_r, d2, d2), dtype=complex)
    b2 = np.empty_like(b1)
    for k in range(n_r):
        rng = np.random.default_rng(config.seed + k)
        b1[k] = random_dichotomic(rng, d2)
        b2[k] = random_dichotomic(rng, d2)

    a1 = a2 = None
    value = np.full(n_r, -np.inf)
    active = np.ones(n_r, dtype=bool)
    iters = np.zeros(n_r, dtype=int)
    max_drop = 0.0
    traj = [[] for _ in range(n_r)] if record_trajectory else None

    for _ in range(config.max_iters):
        m1 = matcore.conditioned_partial_trace(rho, b1 + b2, 2)
        m2 = matcore.conditioned_partial_trace(rho, b1 - b2, 2)
        na1, na2 = matcore.sign_operator(m1), matcore.sign_operator(m2)
        v_a = _trace_pair(na1, m1) + _trace_pair(na2, m2)

        n1 = matcore.conditioned_partial_trace(rho, na1 + na2, 1)
        n2 = matcore.conditioned_partial_trace(rho, na1 - na2, 1)
        nb1, nb2 = matcore.sign_operator(n1), matcore.sign_operator(n2)
        v_b = _trace_pair(nb1, n1) + _trace_pair(nb2, n2)

        drop = np.concatenate([(value - v_a)[active & np.isfinite(value)], (v_a - v_b)[active]])
        if drop.size:
            max_drop = max(max_drop, float(drop.max()))
        if max_drop > DEFAULT_TOLERANCES.monotone_fail:
            raise NumericalFailure(f"see-saw step decreased the CHSH value by {max_drop!r}")
        if traj is not None:
            for k in np.flatnonzero(active):
                traj[k].extend((float(v_a[k]), float(v_b[k])))

        sel = active[:, None, None]
        if a1 is None:
            a1, a2 = na1, na2
        else:
            a1, a2 = np.where(sel, na1, a1), np.where(sel, na2, a2)
        b1, b2 = np.where(sel, nb1, b1), np.where(sel, nb2, b2)
        iters += active
        done = active & (v_b - value < config.conv_tol)
        value = np.where(active, v_b, value)
        active &= ~done
        if not active.any():
            break

    best = int(np.argmax(value))
    setting = ChshSetting(a1[best], a2[best], b1[best], b2[best], 0.0)
    val = evaluate_chsh(psi, setting)
    converged = not active[best]
    if val < 2.0:
        # deterministic local strategy: all observables = identity
        e1, e2 = np.eye(psi.d1, dtype=complex), np.eye(psi.d2, dtype=complex)
        setting = ChshSetting(e1, e1, e2, e2, 0.0)
        val, converged = evaluate_chsh(psi, setting), True
    setting = ChshSetting(setting.A1, setting.A2, setting.B1, setting.B2, val)
    if not converged:
        log.info("see-saw best restart %d did not converge in %d iterations", best, config.max_iters)
    return SeeSawResult(
        setting=setting,
        value=val,
        ratio=val / 2.0,
        iterations_used=int(iters[best]),
        restarts_used=n_r,
        converged=bool(converged),
        best_restart=best,
        max_monotone_drop=max_drop,
        trajectories=traj,
    )
