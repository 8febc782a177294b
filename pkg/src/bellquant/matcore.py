"""Dense complex-matrix primitives for small dimensions.

All functions are pure; inputs are never modified. Where noted, a leading
batch axis is accepted so the optimizer can run many restarts at once.
"""

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import ContractViolation, NumericalFailure


def is_hermitian(m, atol=DEFAULT_TOLERANCES.hermitian):
    m = np.asarray(m)
    return m.shape[-1] == m.shape[-2] and np.allclose(
        m, np.conj(np.swapaxes(m, -1, -2)), rtol=0.0, atol=atol
    )


def _require_square(m, name="matrix"):
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ContractViolation(f"{name} must be square, got shape {m.shape}")


def svd(m):
    """Singular value decomposition ``m = u @ diag(s) @ vh``.

    Singular values are returned in descending order. Works for complex
    and real input of any (small) shape.

    Returns
    -------
    u : ndarray
        Left singular vectors as columns.
    s : ndarray
        Singular values, nonnegative and descending.
    vh : ndarray
        Conjugate-transposed right singular vectors (rows).
    """
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise ContractViolation("svd input contains non-finite entries")
    try:
        return np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def hermitian_eig(m, atol=DEFAULT_TOLERANCES.hermitian):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending."""
    m = np.asarray(m)
    _require_square(m)
    if not is_hermitian(m, atol):
        raise ContractViolation("hermitian_eig called on a non-Hermitian matrix")
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigh did not converge: {exc}") from exc
    return w[..., ::-1], v[..., ::-1]


def partial_trace(rho, d1, d2, keep):
    """Reduced density matrix of a bipartite ``rho`` on the ``keep`` side (1 or 2)."""
    rho = np.asarray(rho)
    n = d1 * d2
    if rho.shape != (n, n):
        raise ContractViolation(f"rho has shape {rho.shape}, expected ({n}, {n})")
    if keep not in (1, 2):
        raise ContractViolation(f"keep must be 1 or 2, got {keep!r}")
    if not is_hermitian(rho):
        raise ContractViolation("rho is not Hermitian")
    if abs(np.trace(rho) - 1.0) > DEFAULT_TOLERANCES.unit_trace:
        raise ContractViolation("rho does not have unit trace")
    r4 = rho.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.einsum("ajbj->ab", r4)
    return np.einsum("jajb->ab", r4)


def conditioned_partial_trace(rho, x, side):
    """Partial trace of ``rho`` weighted by ``x`` acting on ``side``.

    For ``side == 2`` this is ``Tr_2[rho (I (x) x)]``, an operator ``R`` on
    subsystem 1 with ``tr(R Y) = tr(rho (Y (x) x))``. For ``side == 1`` it
    is ``Tr_1[rho (x (x) I)]``, an operator on subsystem 2.

    ``x`` may carry leading batch axes; the result has the same batch shape.
    """
    rho = np.asarray(rho)
    x = np.asarray(x)
    _require_square(rho, "rho")
    _require_square(x, "x")
    if side not in (1, 2):
        raise ContractViolation(f"side must be 1 or 2, got {side!r}")
    dx = x.shape[-1]
    n = rho.shape[0]
    if n % dx:
        raise ContractViolation(f"x of dimension {dx} does not divide rho dimension {n}")
    other = n // dx
    if side == 2:
        r4 = rho.reshape(other, dx, other, dx)
        return np.einsum("ajbk,...kj->...ab", r4, x)
    r4 = rho.reshape(dx, other, dx, other)
    return np.einsum("jakb,...kj->...ab", r4, x)


def sign_operator(m, zero_tol=DEFAULT_TOLERANCES.sign_zero):
    """Dichotomic operator ``sign(m)``; eigenvalues with ``|lambda| < zero_tol`` map to +1.

    Accepts a stack of Hermitian matrices. ``tr(sign(m) m)`` equals the trace
    norm of ``m`` up to the discarded near-zero eigenvalues.
    """
    m = np.asarray(m)
    _require_square(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigh did not converge: {exc}") from exc
    s = np.where(w <= -zero_tol, -1.0, 1.0)
    return (v * s[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def cofactor_matrix(t):
    """Matrix of cofactors of a real 3x3 matrix.

    Rows of the cofactor matrix are cross products of the other two rows,
    so ``t[i] @ cof[i] == det(t)`` for every row ``i``.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ContractViolation(f"cofactor_matrix expects 3x3, got {t.shape}")
    return np.array(
        [np.cross(t[1], t[2]), np.cross(t[2], t[0]), np.cross(t[0], t[1])]
    )
