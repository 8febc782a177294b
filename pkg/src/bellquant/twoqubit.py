"""Pure two-qubit machinery: Bloch vectors, correlation matrix, Horodecki CHSH maximum.

Pauli convention: sigma_1 = X, sigma_2 = Y, sigma_3 = Z. The correlation
matrix is indexed ``T[i, j] = tr[rho (sigma_i (x) sigma_j)]`` with ``i`` on
side 1.
"""

from dataclasses import dataclass

import numpy as np

from . import matcore
from .config import DEFAULT_TOLERANCES
from .errors import ContractViolation, DegenerateInputError, NumericalFailure
from .states import PureState, reduced_state

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)


@dataclass(frozen=True)
class TwoQubitProfile:
    r1: np.ndarray
    r2: np.ndarray
    T: np.ndarray
    singulars: np.ndarray
    detT: float
    gamma: float


@dataclass(frozen=True)
class ChshSetting:
    """Local observables and the CHSH value <A1B1> + <A1B2> + <A2B1> - <A2B2>."""

    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    value: float


def spin(v):
    """Qubit observable ``v . sigma``."""
    return v[0] * SX + v[1] * SY + v[2] * SZ


def bloch_vector(tau):
    vals = np.array([np.trace(tau @ s) for s in PAULIS])
    return vals.real


def profile(psi: PureState) -> TwoQubitProfile:
    if psi.dims != (2, 2):
        raise ContractViolation(f"profile needs a two-qubit state, got {psi.dims}")
    rho = psi.density()
    T = np.empty((3, 3), dtype=complex)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            T[i, j] = np.trace(rho @ np.kron(si, sj))
    if np.max(np.abs(T.imag)) > DEFAULT_TOLERANCES.pauli_imag_residue:
        raise NumericalFailure("correlation matrix has an imaginary residue")
    T = T.real
    r1 = bloch_vector(reduced_state(psi, 1))
    r2 = bloch_vector(reduced_state(psi, 2))
    s = matcore.svd(T)[1]
    return TwoQubitProfile(
        r1=r1,
        r2=r2,
        T=T,
        singulars=s,
        detT=float(np.linalg.det(T)),
        gamma=float(np.linalg.norm(r1)),
    )


def pauli_reconstruct(r1, r2, T):
    """Density operator from its Pauli components."""
    rho = np.kron(I2, I2) + np.kron(spin(r1), I2) + np.kron(I2, spin(r2))
    for i in range(3):
        for j in range(3):
            rho = rho + T[i][j] * np.kron(PAULIS[i], PAULIS[j])
    return rho / 4.0


def cofactor_identity_check(prof: TwoQubitProfile) -> float:
    """Largest entry of ``|T - r1 r2^T + cof(T)|``; zero for pure states."""
    dev = prof.T - np.outer(prof.r1, prof.r2) + matcore.cofactor_matrix(prof.T)
    return float(np.max(np.abs(dev)))


def m_chsh(prof: TwoQubitProfile) -> float:
    return float(np.hypot(prof.singulars[0], prof.singulars[1]))


def horodecki_settings(prof: TwoQubitProfile) -> ChshSetting:
    """Traceless qubit observables attaining ``2 * m_chsh``.

    Bob's directions are rotated by ``phi = atan(u2/u1)`` around the top
    right singular vector; Alice measures along the normalized images of
    ``b1 + b2`` and ``b1 - b2`` under ``T``.
    """
    T = prof.T
    u, s, vh = matcore.svd(T)
    if s[0] <= 0.0:
        raise DegenerateInputError("correlation matrix vanishes")
    c1, c2 = vh[0], vh[1]
    phi = np.arctan2(s[1], s[0])
    b1 = np.cos(phi) * c1 + np.sin(phi) * c2
    b2 = np.cos(phi) * c1 - np.sin(phi) * c2
    plus, minus = T @ (b1 + b2), T @ (b1 - b2)
    a1 = plus / np.linalg.norm(plus)
    nm = np.linalg.norm(minus)
    # u2 == 0: b1 == b2 and the second term vanishes for any a2
    a2 = minus / nm if nm > 0.0 else u[:, 1]
    value = a1 @ T @ (b1 + b2) + a2 @ T @ (b1 - b2)
    return ChshSetting(spin(a1), spin(a2), spin(b1), spin(b2), float(value))


def chsh_from_correlation(T, a1, a2, b1, b2):
    """CHSH value of traceless settings given by unit Bloch directions."""
    T = np.asarray(T)
    return a1 @ T @ b1 + a1 @ T @ b2 + a2 @ T @ b1 - a2 @ T @ b2


@dataclass(frozen=True)
class DiagonalizabilityReport:
    char_poly: np.ndarray  # monic coefficients, highest degree first
    eigenvalues: list  # (value, algebraic multiplicity, geometric multiplicity)
    diagonalizable: bool


def _cluster_roots(roots, tol):
    clusters = []
    for z in roots:
        for c in clusters:
            if any(abs(z - w) <= tol for w in c):
                c.append(z)
                break
        else:
            clusters.append([z])
    return clusters


def non_diagonalizability_witness(
    prof_or_T,
    cluster_tol=DEFAULT_TOLERANCES.root_cluster,
    nullity_tol=DEFAULT_TOLERANCES.nullity,
) -> DiagonalizabilityReport:
    """Compare algebraic and geometric eigenvalue multiplicities of ``T``.

    Algebraic multiplicities come from clustering the roots of the
    characteristic polynomial; geometric ones from the nullity of
    ``T - lambda I``.
    """
    T = prof_or_T.T if isinstance(prof_or_T, TwoQubitProfile) else np.asarray(prof_or_T, float)
    cof = matcore.cofactor_matrix(T)
    coeffs = np.array([1.0, -np.trace(T), np.trace(cof), -np.linalg.det(T)])
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.linalg.norm(T, 2)))
    eigs = []
    diagonalizable = True
    for c in _cluster_roots(sorted(roots, key=lambda z: (z.real, z.imag)), cluster_tol):
        lam = complex(np.mean(c))
        if abs(lam.imag) <= cluster_tol:
            lam = lam.real
        if abs(lam) <= cluster_tol:
            lam = 0.0
        sv = matcore.svd(T - lam * np.eye(3))[1]
        geo = int(np.count_nonzero(sv <= nullity_tol * scale))
        eigs.append((lam, len(c), geo))
        diagonalizable &= geo == len(c)
    return DiagonalizabilityReport(coeffs, eigs, bool(diagonalizable))
