"""Quaternion scalars over the basis {1, i, j, k} with i^2 = j^2 = k^2 = ijk = -1.

Values are immutable; every operation returns a fresh quaternion, so they are
safe to share between threads.  Components are IEEE doubles; comparisons in
numerical code should therefore go through :func:`allclose` rather than ``==``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Quaternion:
    """h = h0 + i*h1 + j*h2 + k*h3."""

    h0: float = 0.0
    h1: float = 0.0
    h2: float = 0.0
    h3: float = 0.0

    @staticmethod
    def from_real(x: float) -> "Quaternion":
        return Quaternion(float(x), 0.0, 0.0, 0.0)

    @staticmethod
    def from_complex_pair(g1: complex, g2: complex) -> "Quaternion":
        """Recompose h = g1 + g2*j from the symplectic component pair."""
        g1 = complex(g1)
        g2 = complex(g2)
        return Quaternion(g1.real, g1.imag, g2.real, g2.imag)

    def components(self) -> tuple[float, float, float, float]:
        return (self.h0, self.h1, self.h2, self.h3)

    # -- ring structure -----------------------------------------------------

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.h0 + other.h0, self.h1 + other.h1,
                          self.h2 + other.h2, self.h3 + other.h3)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.h0 - other.h0, self.h1 - other.h1,
                          self.h2 - other.h2, self.h3 - other.h3)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.h0, -self.h1, -self.h2, -self.h3)

    def __mul__(self, other):
        """Hamilton product; noncommutative (i*j = k but j*i = -k)."""
        if isinstance(other, (int, float)):
            return Quaternion(self.h0 * other, self.h1 * other,
                              self.h2 * other, self.h3 * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        a0, a1, a2, a3 = self.h0, self.h1, self.h2, self.h3
        b0, b1, b2, b3 = other.h0, other.h1, other.h2, other.h3
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 - a1 * b3 + a3 * b1,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, float)):
            return Quaternion(self.h0 / scalar, self.h1 / scalar,
                              self.h2 / scalar, self.h3 / scalar)
        return NotImplemented

    # -- conjugation, norm, inverse ------------------------------------------

    def conj(self) -> "Quaternion":
        """Involutory anti-automorphism: flips the sign of the i, j, k parts."""
        return Quaternion(self.h0, -self.h1, -self.h2, -self.h3)

    def norm_sq(self) -> float:
        return self.h0 ** 2 + self.h1 ** 2 + self.h2 ** 2 + self.h3 ** 2

    def norm(self) -> float:
        """Multiplicative norm |h| = sqrt(h * conj(h))."""
        return math.sqrt(self.norm_sq())

    def inverse(self) -> "Quaternion":
        """conj(h) / |h|^2.  Quaternions form a division ring, so only the
        zero quaternion is rejected."""
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise DomainError("the zero quaternion has no inverse")
        return self.conj() / n2

    # -- symplectic (complex-pair) representation ----------------------------

    def complex_pair(self) -> tuple[complex, complex]:
        """Split h = g1 + g2*j with g1 = h0 + i*h1 and g2 = h2 + i*h3.

        Round-trips exactly through :meth:`from_complex_pair`.
        """
        return (complex(self.h0, self.h1), complex(self.h2, self.h3))

    def is_real(self, tol: float = 0.0) -> bool:
        return abs(self.h1) <= tol and abs(self.h2) <= tol and abs(self.h3) <= tol


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def allclose(a: Quaternion, b: Quaternion, tol: float = 1e-12) -> bool:
    """Componentwise comparison with tolerance scaled by operand magnitude."""
    scale = max(1.0, a.norm(), b.norm())
    return (a - b).norm() <= tol * scale


def sp1_to_su2(phi: Quaternion, tol: float = 1e-9) -> np.ndarray:
    """Map a unit quaternion to its 2x2 special-unitary image.

    With phi = g1 + g2*j the image is [[g1, g2], [-conj(g2), conj(g1)]];
    the map is a group isomorphism Sp(1) -> SU(2).
    """
    if abs(phi.norm() - 1.0) > tol:
        raise DomainError(
            f"sp1_to_su2 requires a unit quaternion, got norm {phi.norm()!r}")
    g1, g2 = phi.complex_pair()
    return np.array([[g1, g2], [-g2.conjugate(), g1.conjugate()]],
                    dtype=np.complex128)
