"""Injective *-homomorphism from quaternionic to complex matrices.

A p x d quaternionic matrix A = G1 + G2*j maps to the 2p x 2d block matrix

    [[ G1,        G2       ],
     [ -conj(G2), conj(G1) ]]

which is real-linear, multiplicative, and adjoint-compatible.  The image is
exactly the set of matrices M satisfying M = J_p conj(M) J_d^{-1} with
J_n = [[0, I_n], [-I_n, 0]]; membership is tested through that identity
rather than by block pattern matching.
"""

from __future__ import annotations

import numpy as np

from . import cmat
from .errors import DimensionError, DomainError
from .hmat import QMatrix, QVector

IMAGE_TOL = 1e-9


def psi(a: QMatrix) -> np.ndarray:
    """Complex image of a quaternionic matrix (2p x 2d)."""
    g1, g2 = a.gamma_pair()
    return np.block([[g1, g2], [-np.conj(g2), np.conj(g1)]])


def psi_vec(phi: QVector) -> np.ndarray:
    """Complex column vector representing phi = a + b*j: [a; -conj(b)].

    This is the first column of the 2d x 2 image of phi viewed as a d x 1
    matrix, and it carries eigenvector correspondences: if A phi = phi*t with
    real t then psi(A) psi_vec(phi) = t * psi_vec(phi).
    """
    g1 = phi.comps[0] + 1j * phi.comps[1]
    g2 = phi.comps[2] + 1j * phi.comps[3]
    return np.concatenate([g1, -np.conj(g2)])


def vector_from_complex(v: np.ndarray) -> QVector:
    """Inverse of :func:`psi_vec` on C^{2d}: (top; bot) -> top - conj(bot)*j."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] % 2:
        raise DimensionError(f"expected an even-length complex vector, got shape {v.shape}")
    d = v.shape[0] // 2
    top = v[:d]
    b = -np.conj(v[d:])
    return QVector(np.stack([top.real, top.imag, b.real, b.imag]))


def _symplectic_unit(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def image_residual(m: np.ndarray) -> float:
    """Frobenius norm of M - J_p conj(M) J_d^{-1} (zero exactly on the image)."""
    m = cmat.as_cmatrix(m)
    if m.shape[0] % 2 or m.shape[1] % 2:
        raise DimensionError(f"image test requires even dimensions, got {m.shape}")
    p = m.shape[0] // 2
    d = m.shape[1] // 2
    jp = _symplectic_unit(p)
    jd = _symplectic_unit(d)
    return float(np.linalg.norm(m - jp @ np.conj(m) @ jd.T))


def in_image(m: np.ndarray, tol: float = IMAGE_TOL) -> bool:
    m = cmat.as_cmatrix(m)
    return image_residual(m) <= tol * max(1.0, cmat.frob(m))


def psi_inv(m: np.ndarray, tol: float = IMAGE_TOL) -> QMatrix:
    """Left inverse of :func:`psi`; exact on the image, rejects anything else.

    The quaternionic components are read off the top block row, so the round
    trip ``psi_inv(psi(A)) == A`` holds bit-for-bit.
    """
    m = cmat.as_cmatrix(m)
    residual = image_residual(m)
    if residual > tol * max(1.0, cmat.frob(m)):
        raise DomainError(
            f"matrix is not in the embedding image (symmetry residual {residual:.3e})")
    p = m.shape[0] // 2
    d = m.shape[1] // 2
    return QMatrix.from_gamma_pair(m[:p, :d], m[:p, d:])
