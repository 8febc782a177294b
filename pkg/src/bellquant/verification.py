"""Per-state invariant deviations and ensemble aggregation.

Every invariant maps a state (plus derived data) to a nonnegative
deviation; it passes when the deviation is at most its tolerance.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import matcore
from .entanglement import (
    concurrence,
    concurrence_max,
    concurrence_purity_form,
    concurrence_schmidt_form,
    negativity,
)
from .optimizer import SeeSawConfig, see_saw
from .quditbounds import bounds_report, gp_chsh_value
from .states import (
    PureState,
    _frozen,
    max_entangled_state,
    random_haar_state,
    schmidt,
)
from .twoqubit import (
    cofactor_identity_check,
    horodecki_settings,
    m_chsh,
    pauli_reconstruct,
    profile,
)

SQRT2 = np.sqrt(2.0)

# name -> (tolerance, module)
INVARIANTS = {
    # entanglement
    "concurrence_two_forms": (1e-9, "entanglement"),
    "negativity_concurrence_chain": (1e-9, "entanglement"),
    "concurrence_range": (1e-12, "entanglement"),
    "separable_iff_rank1": (0.0, "entanglement"),
    "local_unitary_invariance": (1e-9, "entanglement"),
    "max_entangled_concurrence": (1e-10, "entanglement"),
    # twoqubit
    "bloch_norms_equal": (1e-9, "twoqubit"),
    "bloch_T_relation": (1e-9, "twoqubit"),
    "purity_sum": (1e-9, "twoqubit"),
    "frobenius_concurrence": (1e-9, "twoqubit"),
    "det_T_equals_minus_C2": (1e-9, "twoqubit"),
    "singular_values_1_C_C": (1e-8, "twoqubit"),
    "bloch_eigenvectors": (1e-8, "twoqubit"),
    "cofactor_identity": (1e-9, "twoqubit"),
    "separable_T_product": (1e-9, "twoqubit"),
    "pauli_reconstruction": (1e-10, "twoqubit"),
    "mchsh_sqrt_1_plus_C2": (1e-8, "twoqubit"),
    "horodecki_settings_attain": (1e-8, "twoqubit"),
    "two_qubit_bound_chain": (1e-12, "twoqubit"),
    # quditbounds
    "chain_1_le_lb_thm4": (1e-12, "quditbounds"),
    "chain_lb_thm4_le_sqrt1K2": (1e-12, "quditbounds"),
    "chain_sqrt1K2_le_gp": (1e-12, "quditbounds"),
    "chain_gp_le_ub_pure": (1e-12, "quditbounds"),
    "chain_ub_pure_le_ub_general": (1e-12, "quditbounds"),
    "ub_general_le_ub_dim": (1e-12, "quditbounds"),
    "k_lower_bound_slack": (1e-12, "quditbounds"),
    "rank2_K_equals_C": (1e-10, "quditbounds"),
    "rank2_lb_collapse": (1e-10, "quditbounds"),
    "gp_permutation_invariance": (1e-12, "quditbounds"),
    # optimizer
    "seesaw_at_least_classical": (1e-9, "optimizer"),
    "seesaw_tsirelson": (1e-9, "optimizer"),
    "seesaw_matches_mchsh": (1e-6, "optimizer"),
    "seesaw_ge_sqrt1K2": (1e-6, "optimizer"),
    "seesaw_ge_gp": (1e-6, "optimizer"),
    "seesaw_le_ub_pure": (1e-9, "optimizer"),
    "seesaw_monotone": (1e-12, "optimizer"),
}


def haar_unitary(rng, d):
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / SQRT2
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def _pos(x):
    return max(0.0, float(x))


def two_qubit_deviations(psi: PureState, c, rank):
    p = profile(psi)
    T, r1, r2 = p.T, p.r1, p.r2
    dev = {
        "bloch_norms_equal": abs(np.linalg.norm(r1) - np.linalg.norm(r2)),
        "bloch_T_relation": max(np.abs(r1 - T @ r2).max(), np.abs(r2 - T.T @ r1).max()),
        "purity_sum": abs(r1 @ r1 + r2 @ r2 + np.sum(T * T) - 3.0),
        "frobenius_concurrence": abs(np.sum(T * T) - 1.0 - 2.0 * c * c),
        "det_T_equals_minus_C2": abs(p.detT + c * c),
        "singular_values_1_C_C": np.abs(p.singulars - np.array([1.0, c, c])).max(),
        "cofactor_identity": cofactor_identity_check(p),
        "pauli_reconstruction": np.abs(pauli_reconstruct(r1, r2, T) - psi.density()).max(),
        "mchsh_sqrt_1_plus_C2": abs(m_chsh(p) - np.sqrt(1.0 + c * c)),
        "two_qubit_bound_chain": _pos(np.sqrt(1.0 + c * c) - (1.0 + 2.0 * c)),
    }
    eig = 0.0
    if p.gamma > 1e-6:
        eig = max(
            np.linalg.norm(T.T @ T @ r2 - r2) / np.linalg.norm(r2),
            np.linalg.norm(T @ T.T @ r1 - r1) / np.linalg.norm(r1),
        )
    dev["bloch_eigenvectors"] = eig
    dev["separable_T_product"] = (
        np.abs(T - np.outer(r1, r2)).max() if rank == 1 else 0.0
    )
    hs = horodecki_settings(p)
    dev["horodecki_settings_attain"] = abs(hs.value / (2.0 * m_chsh(p)) - 1.0)
    return {k: float(v) for k, v in dev.items()}


def state_deviations(psi: PureState, seed=0, tol=1e-10):
    """Deviations of all non-optimizer invariants for one state."""
    sd = schmidt(psi, tol)
    c = concurrence(psi, check=False)
    n = negativity(psi)
    r = sd.rank
    d = min(psi.dims)
    rng = np.random.default_rng([seed, 1])
    moved = psi.apply_local(haar_unitary(rng, psi.d1), haar_unitary(rng, psi.d2))
    dev = {
        "concurrence_two_forms": abs(concurrence_purity_form(psi) - c),
        "negativity_concurrence_chain": max(_pos(2 * SQRT2 * n - r * (r - 1) * c), _pos(-n)),
        "concurrence_range": max(_pos(c - concurrence_max(d)), _pos(-c)),
        "separable_iff_rank1": float((c < 1e-8) != (r == 1)),
        "local_unitary_invariance": max(
            abs(concurrence(moved, check=False) - c), abs(negativity(moved) - n)
        ),
        "max_entangled_concurrence": abs(
            concurrence(max_entangled_state(d), check=False) - concurrence_max(d)
        ),
    }
    b = bounds_report(psi, tol)
    dev.update(
        {
            "chain_1_le_lb_thm4": _pos(1.0 - b.lb_thm4),
            "chain_lb_thm4_le_sqrt1K2": _pos(b.lb_thm4 - b.lb_sqrt1K2),
            "chain_sqrt1K2_le_gp": _pos(-b.eq37_slack),
            "chain_gp_le_ub_pure": _pos(b.gp_value - b.ub_pure),
            "chain_ub_pure_le_ub_general": _pos(b.ub_pure - b.ub_general),
            "ub_general_le_ub_dim": _pos(b.ub_general - b.ub_dim),
            "k_lower_bound_slack": _pos(-b.k_slack) if b.k_slack is not None else 0.0,
            "rank2_K_equals_C": abs(b.bigK - c) if r == 2 else 0.0,
            "rank2_lb_collapse": abs(b.lb_thm4 - np.sqrt(1 + c * c)) if r == 2 else 0.0,
        }
    )
    shuffled = replace(sd, lambdas=_frozen(rng.permutation(sd.lambdas)))
    dev["gp_permutation_invariance"] = abs(gp_chsh_value(shuffled) - b.gp_value)
    if psi.dims == (2, 2):
        dev.update(two_qubit_deviations(psi, c, r))
    return {k: float(v) for k, v in dev.items()}, b


def seesaw_deviations(psi: PureState, res, b):
    c = b.concurrence
    dev = {
        "seesaw_at_least_classical": _pos(1.0 - res.ratio),
        "seesaw_tsirelson": _pos(res.value - (2 * SQRT2 if psi.dims == (2, 2) else 4.0)),
        "seesaw_ge_sqrt1K2": _pos(b.lb_sqrt1K2 - res.ratio),
        "seesaw_ge_gp": _pos(b.gp_value - res.ratio),
        "seesaw_le_ub_pure": _pos(res.ratio - b.ub_pure),
        "seesaw_monotone": res.max_monotone_drop,
    }
    if psi.dims == (2, 2):
        dev["seesaw_matches_mchsh"] = abs(res.ratio - np.sqrt(1 + c * c))
    return dev


@dataclass
class InvariantResult:
    name: str
    module: str
    tolerance: float
    max_deviation: float = 0.0
    worst_seed: object = None
    worst_dims: object = None
    n_checked: int = 0

    @property
    def passed(self):
        return self.max_deviation <= self.tolerance


@dataclass
class VerifyReport:
    dims: list
    n_per_dim: int
    seed: int
    invariants: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self):
        return all(r.passed for r in self.invariants.values())

    def record(self, devs, seed, dims):
        for name, v in devs.items():
            r = self.invariants[name]
            r.n_checked += 1
            if v > r.max_deviation or r.worst_seed is None:
                if v > r.max_deviation:
                    r.max_deviation = v
                r.worst_seed, r.worst_dims = seed, list(dims)

    @property
    def failures(self):
        return [r for r in self.invariants.values() if not r.passed]


def new_report(dims, n, seed, overrides=None):
    overrides = overrides or {}
    rep = VerifyReport(dims=[list(d) for d in dims], n_per_dim=n, seed=seed)
    for name, (tol, module) in INVARIANTS.items():
        rep.invariants[name] = InvariantResult(name, module, overrides.get(name, tol))
    return rep


def check_state(d1, d2, seed, with_seesaw, restarts, tol=1e-10):
    """Deviation dict for one Haar state (picklable worker for process pools)."""
    psi = random_haar_state(d1, d2, seed)
    devs, b = state_deviations(psi, seed, tol)
    if with_seesaw:
        res = see_saw(psi, SeeSawConfig(restarts=restarts, seed=seed))
        devs.update(seesaw_deviations(psi, res, b))
    return devs
