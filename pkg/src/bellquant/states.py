"""Pure bipartite states: construction, Haar sampling and Schmidt analysis."""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .config import DEFAULT_TOLERANCES
from .errors import ContractViolation, InvalidStateError

log = logging.getLogger(__name__)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Normalized vector in C^d1 (x) C^d2, basis index ``i*d2 + j``."""

    d1: int
    d2: int
    amps: np.ndarray = field(repr=False)
    # set when the input norm was off by more than the warning threshold
    renormalized: bool = False

    @property
    def dims(self):
        return (self.d1, self.d2)

    @property
    def coefficients(self):
        """The d1 x d2 coefficient matrix ``psi[i, j]``."""
        return self.amps.reshape(self.d1, self.d2)

    def density(self):
        return np.outer(self.amps, np.conj(self.amps))

    def apply_local(self, u, v):
        """Return ``(u (x) v) psi``."""
        m = u @ self.coefficients @ v.T
        return PureState(self.d1, self.d2, _frozen(m.ravel()))


@dataclass(frozen=True)
class SchmidtData:
    lambdas: np.ndarray
    rank: int
    basis1: np.ndarray  # columns e_k^(1)
    basis2: np.ndarray  # columns e_k^(2)
    tol_used: float

    def reconstruct(self):
        """Vector ``sum_k sqrt(lambda_k) e_k^(1) (x) e_k^(2)`` as a flat array."""
        m = (self.basis1 * np.sqrt(self.lambdas)) @ self.basis2.T
        return m.ravel()


def make_state(d1, d2, amps, tolerances=DEFAULT_TOLERANCES):
    """Build a :class:`PureState`, renormalizing the amplitudes.

    A norm deviation above ``tolerances.renorm_warning`` is logged and
    recorded in ``PureState.renormalized``.
    """
    d1, d2 = int(d1), int(d2)
    if d1 < 1 or d2 < 1:
        raise ContractViolation(f"dimensions must be positive, got ({d1}, {d2})")
    a = np.asarray(amps, dtype=complex).ravel()
    if a.size != d1 * d2:
        raise ContractViolation(f"expected {d1 * d2} amplitudes, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise InvalidStateError("amplitudes contain non-finite values")
    norm2 = float(np.vdot(a, a).real)
    if norm2 == 0.0:
        raise InvalidStateError("zero vector is not a state")
    flagged = abs(norm2 - 1.0) > tolerances.renorm_warning
    if flagged:
        log.warning("state norm^2 = %.12g, renormalizing", norm2)
    return PureState(d1, d2, _frozen(a / np.sqrt(norm2)), flagged)


def random_haar_state(d1, d2, seed):
    """Unitarily invariant random pure state; identical seeds give identical states."""
    if d1 < 2 or d2 < 2:
        raise ContractViolation("random_haar_state needs d1, d2 >= 2")
    rng = np.random.default_rng(seed)
    n = d1 * d2
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(d1, d2, _frozen(z / np.linalg.norm(z)))


def _fix_phase(vec):
    k = np.argmax(np.abs(vec))
    ph = vec[k] / abs(vec[k])
    return vec / ph, ph


def schmidt(psi, tol=DEFAULT_TOLERANCES.schmidt_rank):
    """Schmidt decomposition of ``psi``.

    Coefficients are the squared singular values of the coefficient matrix,
    descending. The rank counts coefficients above ``tol * lambda_1``; the
    retained coefficients are renormalized to sum to one. Each side-1 basis
    vector has its largest-magnitude entry real positive, with the phase
    moved to the matching side-2 vector so the reconstruction is exact.
    """
    u, s, vh = matcore.svd(psi.coefficients)
    lam = s**2
    cut = tol * lam[0]
    rank = max(1, int(np.count_nonzero(lam > cut)))
    lam = lam[:rank] / lam[:rank].sum()
    b1 = np.empty((psi.d1, rank), dtype=complex)
    b2 = np.empty((psi.d2, rank), dtype=complex)
    for k in range(rank):
        b1[:, k], ph = _fix_phase(u[:, k])
        b2[:, k] = vh[k] * ph
    return SchmidtData(_frozen(lam), rank, _frozen(b1), _frozen(b2), float(cut))


def reduced_state(psi, side):
    """Reduced density matrix of ``|psi><psi|`` on subsystem ``side`` (1 or 2)."""
    m = psi.coefficients
    if side == 1:
        return m @ m.conj().T
    if side == 2:
        return m.T @ m.conj()
    raise ContractViolation(f"side must be 1 or 2, got {side!r}")


def schmidt_diagonal_state(lambdas):
    """State ``sum_k sqrt(lambda_k) |kk>`` with d1 = d2 = len(lambdas)."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ContractViolation("need a non-empty list of Schmidt coefficients")
    if np.any(lam < 0):
        raise InvalidStateError("Schmidt coefficients must be nonnegative")
    d = lam.size
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = np.sqrt(lam)
    return make_state(d, d, amps)


def bell_state():
    return schmidt_diagonal_state([0.5, 0.5])


def max_entangled_state(d):
    return schmidt_diagonal_state(np.full(d, 1.0 / d))


def product_state(d1, d2):
    """``|0> (x) |0>``."""
    amps = np.zeros(d1 * d2, dtype=complex)
    amps[0] = 1.0
    return make_state(d1, d2, amps)


def remark1_state():
    """Separable two-qubit state ``|0> (x) (|0> + i|1>)/sqrt(2)``."""
    return make_state(2, 2, np.array([1.0, 1.0j, 0.0, 0.0]) / np.sqrt(2))
