"""Complex-matrix kernel: the embedding target and the eigensolver substrate.

Matrices are plain ``numpy.ndarray`` values with ``dtype=complex128``; this
module adds the shape/Hermiticity validation and the cyclic-Jacobi Hermitian
eigensolver the rest of the package relies on.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DimensionError, DomainError

HERMITIAN_TOL = 1e-9

# Off-diagonal Frobenius mass at which the Jacobi sweep loop stops, relative
# to the Frobenius norm of the input.
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a 2-D complex128 array (copying only when needed)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(m.T)


def frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def hermitian_defect(m: np.ndarray) -> float:
    """Max-entry magnitude of M - M* (0 for square Hermitian input)."""
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        return math.inf
    return float(np.max(np.abs(m - np.conj(m.T)))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = as_cmatrix(m)
    return hermitian_defect(m) <= tol * max(1.0, frob(m))


def hermitian_eig(m: np.ndarray,
                  tol: float = JACOBI_TOL,
                  max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Full eigensystem of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and the columns of
    ``v`` the corresponding orthonormal eigenvectors, so that
    ``m @ v[:, r] == w[r] * v[:, r]`` up to roundoff.  Sweeps stop once the
    off-diagonal Frobenius mass falls below ``tol * ||m||_F``; more than
    ``max_sweeps`` full sweeps raises :class:`ConvergenceError`.

    The routine is deterministic: identical input yields identical output,
    including the ordering of eigenvectors inside degenerate clusters.
    """
    a = as_cmatrix(m)
    n = a.shape[0]
    if n != a.shape[1]:
        raise DimensionError(f"eigensolver requires a square matrix, got {a.shape}")
    norm = frob(a)
    if hermitian_defect(a) > HERMITIAN_TOL * max(1.0, norm):
        raise DomainError(
            f"eigensolver input is not Hermitian (defect {hermitian_defect(a):.3e})")

    # Work on an exactly Hermitian copy so rotations preserve symmetry.
    a = (a + np.conj(a.T)) / 2.0
    v = np.eye(n, dtype=np.complex128)
    if n == 1 or norm == 0.0:
        return a.diagonal().real.copy(), v

    # Pivots below this threshold contribute at most tol*norm to the
    # off-diagonal mass even if every entry sits at the threshold.
    skip = tol * norm / (2.0 * n)

    def finished():
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        return off <= tol * norm

    for sweep in range(max_sweeps + 1):
        if finished():
            order = np.argsort(a.diagonal().real, kind="stable")
            return a.diagonal().real[order].copy(), v[:, order]
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                h = abs(apq)
                if h <= skip:
                    continue
                phase = apq / h
                tau = (a[q, q].real - a[p, p].real) / (2.0 * h)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sp = (t * c) * phase

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - np.conj(sp) * col_q
                a[:, q] = sp * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - sp * row_q
                a[q, :] = np.conj(sp) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - np.conj(sp) * vec_q
                v[:, q] = sp * vec_p + c * vec_q

    raise ConvergenceError(
        f"Jacobi eigensolver did not converge within {max_sweeps} sweeps")
