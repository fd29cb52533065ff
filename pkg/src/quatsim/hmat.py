"""Linear algebra over right quaternionic modules.

Vectors in H^d take scalars on the right; matrices act from the left, with
entries multiplied in left-to-right order, so the usual matrix identities
hold without reordering.  Internally a p x d quaternionic matrix is stored as
a real array of shape (4, p, d) holding the {1, i, j, k} components; all
arithmetic is carried out on those components, independently of the complex
representation in :mod:`quatsim.embed`.

Values are immutable after construction and every operation is a pure
function, so concurrent use is safe.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from . import cmat
from .errors import (ConditioningError, ConvergenceError, DimensionError,
                     DomainError, QuatsimError)
from .quat import Quaternion

SA_TOL = 1e-9
PSD_TOL = 1e-9

_RE_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def _hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise Hamilton product of two (4, ...) stacks (broadcasting)."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 + a2 * b0 - a1 * b3 + a3 * b1,
        a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
    ])


def _hamilton_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of component stacks a: (4,p,d), b: (4,d,q)."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack([
        a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3,
        a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2,
        a0 @ b2 + a2 @ b0 - a1 @ b3 + a3 @ b1,
        a0 @ b3 + a3 @ b0 + a1 @ b2 - a2 @ b1,
    ])


def _conj(c: np.ndarray) -> np.ndarray:
    out = c.copy()
    out[1:] = -out[1:]
    return out


class QVector:
    """Element of the right module H^d."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        comps = np.array(comps, dtype=np.float64)
        if comps.ndim != 2 or comps.shape[0] != 4:
            raise DimensionError(f"QVector components must have shape (4, d), got {comps.shape}")
        comps.flags.writeable = False
        self.comps = comps

    @classmethod
    def from_quaternions(cls, qs) -> "QVector":
        return cls(np.array([q.components() for q in qs]).T)

    @classmethod
    def zeros(cls, d: int) -> "QVector":
        return cls(np.zeros((4, d)))

    @classmethod
    def basis(cls, d: int, r: int) -> "QVector":
        comps = np.zeros((4, d))
        comps[0, r] = 1.0
        return cls(comps)

    @property
    def dim(self) -> int:
        return self.comps.shape[1]

    def entry(self, r: int) -> Quaternion:
        return Quaternion(*(float(x) for x in self.comps[:, r]))

    def quaternions(self) -> list[Quaternion]:
        return [self.entry(r) for r in range(self.dim)]

    def __add__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(self.comps + other.comps)

    def __sub__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(self.comps - other.comps)

    def __neg__(self) -> "QVector":
        return QVector(-self.comps)

    def right_mul(self, h) -> "QVector":
        """Right-module scalar action (phi * h)_r = phi_r * h."""
        if isinstance(h, (int, float)):
            return QVector(self.comps * float(h))
        return QVector(_hamilton(self.comps, np.asarray(h.components())[:, None]))

    def inner(self, other: "QVector") -> Quaternion:
        """Symplectic inner product <phi|chi> = sum_r conj(phi_r) chi_r."""
        self._check_dim(other)
        prod = _hamilton(_conj(self.comps), other.comps)
        return Quaternion(*prod.sum(axis=1))

    def norm(self) -> float:
        return math.sqrt(float(np.sum(self.comps ** 2)))

    def normalized(self) -> "QVector":
        n = self.norm()
        if n == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return self.right_mul(1.0 / n)

    def outer(self, other: "QVector") -> "QMatrix":
        """Rank-one operator |self><other| with entries self_r * conj(other_s)."""
        prod = _hamilton(self.comps[:, :, None], _conj(other.comps)[:, None, :])
        return QMatrix(prod)

    def as_column(self) -> "QMatrix":
        return QMatrix(self.comps[:, :, None])

    def allclose(self, other: "QVector", tol: float = 1e-12) -> bool:
        scale = max(1.0, self.norm(), other.norm())
        return float(np.max(np.abs(self.comps - other.comps))) <= tol * scale

    def _check_dim(self, other: "QVector") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"vector dims differ: {self.dim} vs {other.dim}")

    def __repr__(self) -> str:
        return f"QVector(dim={self.dim})"


class QMatrix:
    """Dense p x d matrix over H, acting on H^d from the left."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        comps = np.array(comps, dtype=np.float64)
        if comps.ndim != 3 or comps.shape[0] != 4:
            raise DimensionError(
                f"QMatrix components must have shape (4, p, d), got {comps.shape}")
        comps.flags.writeable = False
        self.comps = comps

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_quaternions(cls, rows) -> "QMatrix":
        arr = np.array([[q.components() for q in row] for row in rows])
        return cls(arr.transpose(2, 0, 1))

    @classmethod
    def from_nested(cls, entries) -> "QMatrix":
        """Build from row-major nested lists of 4-component reals."""
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise DimensionError(
                f"nested entries must have shape (p, d, 4), got {arr.shape}")
        return cls(arr.transpose(2, 0, 1))

    @classmethod
    def zeros(cls, p: int, d: int) -> "QMatrix":
        return cls(np.zeros((4, p, d)))

    @classmethod
    def identity(cls, d: int) -> "QMatrix":
        comps = np.zeros((4, d, d))
        comps[0] = np.eye(d)
        return cls(comps)

    @classmethod
    def from_real(cls, arr) -> "QMatrix":
        arr = np.asarray(arr, dtype=np.float64)
        comps = np.zeros((4,) + arr.shape)
        comps[0] = arr
        return cls(comps)

    @classmethod
    def diag(cls, values) -> "QMatrix":
        return cls.from_real(np.diag(np.asarray(values, dtype=np.float64)))

    @classmethod
    def from_gamma_pair(cls, g1, g2) -> "QMatrix":
        """Recompose A = G1 + G2*j from complex component matrices."""
        g1 = np.asarray(g1, dtype=np.complex128)
        g2 = np.asarray(g2, dtype=np.complex128)
        if g1.shape != g2.shape or g1.ndim != 2:
            raise DimensionError("gamma pair must be two equal-shape 2-D matrices")
        return cls(np.stack([g1.real, g1.imag, g2.real, g2.imag]))

    @classmethod
    def from_columns(cls, vecs) -> "QMatrix":
        comps = np.stack([v.comps for v in vecs], axis=2)
        return cls(comps)

    # -- structure -----------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.comps.shape[1]

    @property
    def cols(self) -> int:
        return self.comps.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, r: int, s: int) -> Quaternion:
        return Quaternion(*(float(x) for x in self.comps[:, r, s]))

    def to_nested(self) -> list:
        """Row-major nested lists of 4-component reals (JSON layout)."""
        return self.comps.transpose(1, 2, 0).tolist()

    def column(self, s: int) -> QVector:
        return QVector(self.comps[:, :, s])

    def gamma_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """Complex pair (G1, G2) with A = G1 + G2*j."""
        g1 = self.comps[0] + 1j * self.comps[1]
        g2 = self.comps[2] + 1j * self.comps[3]
        return g1, g2

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same_shape(other)
        return QMatrix(self.comps + other.comps)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_same_shape(other)
        return QMatrix(self.comps - other.comps)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.comps)

    def __mul__(self, scalar) -> "QMatrix":
        if isinstance(scalar, (int, float)):
            return QMatrix(self.comps * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QVector):
            return self.apply(other)
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.shape} by {other.shape}")
        return QMatrix(_hamilton_matmul(self.comps, other.comps))

    def apply(self, vec: QVector) -> QVector:
        if self.cols != vec.dim:
            raise DimensionError(
                f"cannot apply {self.shape} matrix to dim-{vec.dim} vector")
        out = _hamilton_matmul(self.comps, vec.comps[:, :, None])
        return QVector(out[:, :, 0])

    def adjoint(self) -> "QMatrix":
        """[A*]_{rs} = conj(A_{sr})."""
        return QMatrix(_conj(self.comps.transpose(0, 2, 1)))

    def trace(self) -> float:
        """Re-trace: real part of the diagonal sum (basis-independent)."""
        self._check_square("trace")
        return float(np.trace(self.comps[0]))

    def frob(self) -> float:
        return math.sqrt(float(np.sum(self.comps ** 2)))

    def sa_defect(self) -> float:
        """Max-entry magnitude of A - A* (infinite for non-square input)."""
        if self.rows != self.cols:
            return math.inf
        diff = self.comps - _conj(self.comps.transpose(0, 2, 1))
        return math.sqrt(float(np.max(np.sum(diff ** 2, axis=0))))

    def is_self_adjoint(self, tol: float = SA_TOL) -> bool:
        return self.sa_defect() <= tol * max(1.0, self.frob())

    def allclose(self, other: "QMatrix", tol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        scale = max(1.0, self.frob(), other.frob())
        return float(np.max(np.abs(self.comps - other.comps))) <= tol * scale

    def _check_same_shape(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")

    def _check_square(self, what: str) -> None:
        if self.rows != self.cols:
            raise DimensionError(f"{what} requires a square matrix, got {self.shape}")

    def __repr__(self) -> str:
        return f"QMatrix(shape={self.shape})"


# -- traces and the real inner-product space of self-adjoint matrices ---------

def re_trace_product(a: QMatrix, b: QMatrix) -> float:
    """tr(AB) for conformable A (p x d) and B (d x p), without forming AB.

    Re(sum_{rs} A_rs B_sr); only the real component of each product survives.
    """
    if a.cols != b.rows or a.rows != b.cols:
        raise DimensionError(
            f"trace product needs shapes (p,d) and (d,p), got {a.shape} and {b.shape}")
    bt = b.comps.transpose(0, 2, 1)
    return float(np.einsum("c,crs,crs->", _RE_SIGNS, a.comps, bt))


def hs_form(a: QMatrix, b: QMatrix) -> float:
    """Real inner product (A, B) = tr(AB) on self-adjoint matrices.

    Symmetric and positive definite; rejects operands whose self-adjointness
    defect exceeds tolerance, since the form is only real-valued there.
    """
    for name, m in (("first", a), ("second", b)):
        if not m.is_self_adjoint():
            raise DomainError(
                f"hs_form requires self-adjoint operands; {name} has defect {m.sa_defect():.3e}")
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return re_trace_product(a, b)


def sa_basis(d: int) -> list[QMatrix]:
    """Orthonormal basis of the d(2d-1)-dimensional real space of
    self-adjoint d x d quaternionic matrices.

    Unit diagonal matrices first, then for each r < s the four symmetrized
    off-diagonal elements (E_rs q + E_sr conj(q)) / sqrt(2), q in {1,i,j,k},
    in that order.  The Gram matrix under :func:`hs_form` is the identity.
    """
    if d < 1:
        raise DimensionError("sa_basis requires d >= 1")
    out = []
    for r in range(d):
        comps = np.zeros((4, d, d))
        comps[0, r, r] = 1.0
        out.append(QMatrix(comps))
    w = 1.0 / math.sqrt(2.0)
    for r in range(d - 1):
        for s in range(r + 1, d):
            for c in range(4):
                comps = np.zeros((4, d, d))
                comps[c, r, s] = w
                comps[c, s, r] = w if c == 0 else -w
                out.append(QMatrix(comps))
    return out


# -- spectral theory -----------------------------------------------------------

@dataclass(frozen=True)
class SpectralDecomposition:
    """Real eigenvalues (ascending) with orthonormal quaternionic eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: list[QVector]

    def reconstruct(self) -> QMatrix:
        d = self.eigenvectors[0].dim
        out = QMatrix.zeros(d, d)
        for lam, xi in zip(self.eigenvalues, self.eigenvectors):
            out = out + xi.outer(xi) * float(lam)
        return out

    def eigenvector_matrix(self) -> QMatrix:
        """Unitary matrix whose columns are the eigenvectors."""
        return QMatrix.from_columns(self.eigenvectors)


def _require_self_adjoint(a: QMatrix, op: str) -> float:
    a._check_square(op)
    scale = max(1.0, a.frob())
    if a.sa_defect() > SA_TOL * scale:
        raise DomainError(
            f"{op} requires a self-adjoint matrix (defect {a.sa_defect():.3e})")
    return scale


def spectral_decompose(a: QMatrix, cluster_tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition of a self-adjoint quaternionic matrix.

    Route: diagonalize the complex image of A, whose spectrum repeats each
    quaternionic eigenvalue twice (Kramers pairing), then recover one
    quaternionic eigenvector per pair from the complex eigenvectors and
    re-orthonormalize inside each degenerate cluster by quaternionic
    Gram-Schmidt with residual pivoting.
    """
    from . import embed  # deferred: embed depends on this module's types

    scale = _require_self_adjoint(a, "spectral_decompose")
    if cluster_tol is None:
        cluster_tol = 1e-8 * scale
    w, v = cmat.hermitian_eig(embed.psi(a))

    bounds = [0]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > cluster_tol:
            bounds.append(i)
    bounds.append(len(w))

    eigenvalues: list[float] = []
    eigenvectors: list[QVector] = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        size = hi - lo
        if size % 2:
            raise QuatsimError(
                f"eigenvalue cluster of odd size {size}: Kramers pairing violated "
                f"(cluster tolerance {cluster_tol:.3e})")
        k = size // 2
        lam = float(np.mean(w[lo:hi]))
        candidates = [embed.vector_from_complex(v[:, idx]) for idx in range(lo, hi)]
        eigenvectors.extend(_pivoted_gram_schmidt(candidates, k))
        eigenvalues.extend([lam] * k)
    return SpectralDecomposition(np.asarray(eigenvalues), eigenvectors)


def _pivoted_gram_schmidt(candidates: list[QVector], k: int) -> list[QVector]:
    """Keep the k most independent directions of a redundant candidate set."""
    residual = list(candidates)
    accepted: list[QVector] = []
    while len(accepted) < k:
        norms = [v.norm() for v in residual]
        i = max(range(len(residual)), key=norms.__getitem__)
        if norms[i] < 1e-6:
            raise ConvergenceError(
                "eigenvector recovery lost rank inside a degenerate cluster")
        u = residual.pop(i).right_mul(1.0 / norms[i])
        accepted.append(u)
        residual = [v - u.right_mul(u.inner(v)) for v in residual]
    return accepted


def min_eigenvalue(a: QMatrix) -> float:
    """Smallest eigenvalue of a self-adjoint matrix.

    Computed from the complex image with a LAPACK Hermitian solver; the image
    spectrum equals the quaternionic spectrum with doubled multiplicity, so
    the minimum agrees with the spectral-decomposition route.
    """
    from . import embed

    _require_self_adjoint(a, "min_eigenvalue")
    return float(np.linalg.eigvalsh(embed.psi(a))[0])


def is_psd(a: QMatrix, tol: float = PSD_TOL) -> bool:
    """Positive semi-definiteness test (implies self-adjointness)."""
    a._check_square("is_psd")
    scale = max(1.0, a.frob())
    if a.sa_defect() > tol * scale:
        return False
    return min_eigenvalue(a) >= -tol * scale


def inv_sqrt_psd(a: QMatrix, floor: float) -> QMatrix:
    """Inverse square root S of a PSD matrix, with S A S = I.

    All eigenvalues must sit at or above ``floor`` (> 0); anything smaller is
    reported as a conditioning failure rather than amplified.
    """
    if floor <= 0.0:
        raise ConditioningError("inv_sqrt_psd requires floor > 0")
    dec = spectral_decompose(a)
    lam_min = float(dec.eigenvalues.min())
    if lam_min < floor:
        raise ConditioningError(
            f"eigenvalue {lam_min:.3e} below floor {floor:.3e}")
    d = a.rows
    out = QMatrix.zeros(d, d)
    for lam, xi in zip(dec.eigenvalues, dec.eigenvectors):
        out = out + xi.outer(xi) * float(lam ** -0.5)
    return out


# -- seeded random generators ---------------------------------------------------

def as_rng(seed) -> np.random.Generator:
    """Accept an integer seed or a Generator; integers give fresh streams."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seed(master: int, index: int, label: str = "") -> int:
    """Stable per-trial seed: a 64-bit hash of (master, index, label)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(label.encode())
    h.update(int(master).to_bytes(16, "little", signed=True))
    h.update(int(index).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


def random_matrix(seed, p: int, d: int) -> QMatrix:
    """Ginibre-style matrix: every real component standard normal."""
    rng = as_rng(seed)
    return QMatrix(rng.standard_normal((4, p, d)))


def random_vector(seed, d: int) -> QVector:
    rng = as_rng(seed)
    return QVector(rng.standard_normal((4, d))).normalized()


def random_psd(seed, d: int) -> QMatrix:
    g = random_matrix(seed, d, d)
    return g @ g.adjoint()


def random_self_adjoint(seed, d: int) -> QMatrix:
    g = random_matrix(seed, d, d)
    return (g + g.adjoint()) * 0.5


def random_state_matrix(seed, d: int) -> QMatrix:
    """Unit-trace PSD matrix G G* / tr(G G*)."""
    g = random_psd(seed, d)
    return g * (1.0 / g.trace())


def random_unitary(seed, d: int) -> QMatrix:
    """Eigenvector matrix of a random self-adjoint matrix (Haar-like)."""
    dec = spectral_decompose(random_self_adjoint(seed, d))
    return dec.eigenvector_matrix()
