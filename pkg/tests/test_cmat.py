import numpy as np
import pytest

from quatsim import cmat, embed, hmat
from quatsim.errors import DimensionError, DomainError


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def test_basic_arithmetic_semantics():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(np.eye(3) @ a, a)
    assert np.trace(np.eye(4)) == 4.0


def test_adjoint_of_product():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        b = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        np.testing.assert_allclose(cmat.adjoint(a @ b),
                                   cmat.adjoint(b) @ cmat.adjoint(a), atol=1e-12)


def test_eig_diagonal():
    w, v = cmat.hermitian_eig(np.diag([3.0, 1.0]).astype(complex))
    np.testing.assert_allclose(w, [1.0, 3.0])
    np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]])


def test_eig_pauli_like():
    # [[0, -i], [i, 0]]: characteristic polynomial l^2 - 1, eigenvalues -1, 1
    m = np.array([[0, -1j], [1j, 0]])
    w, v = cmat.hermitian_eig(m)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(m @ v, v @ np.diag(w), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 12, 16])
def test_eig_random_hermitian(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        m = random_hermitian(rng, n)
        scale = max(1.0, np.linalg.norm(m))
        w, v = cmat.hermitian_eig(m)
        assert np.all(np.diff(w) >= 0.0)
        # residual per eigenpair
        res = np.linalg.norm(m @ v - v @ np.diag(w))
        assert res <= 1e-10 * scale
        # eigenvector matrix unitary
        assert np.linalg.norm(v.conj().T @ v - np.eye(n)) <= 1e-10
        # reconstruction
        assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - m) <= 1e-9 * scale
        # independent oracle: LAPACK eigenvalues
        np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-10 * scale)


def test_eig_sweep_cap():
    from quatsim.errors import ConvergenceError
    rng = np.random.default_rng(4)
    m = random_hermitian(rng, 5)
    with pytest.raises(ConvergenceError):
        cmat.hermitian_eig(m, max_sweeps=0)
    # an already-diagonal matrix needs no sweeps at all
    w, _ = cmat.hermitian_eig(np.diag([2.0, 1.0]).astype(complex), max_sweeps=0)
    np.testing.assert_allclose(w, [1.0, 2.0])


def test_eig_rejects_non_hermitian():
    with pytest.raises(DomainError):
        cmat.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_rejects_non_square():
    with pytest.raises(DimensionError):
        cmat.hermitian_eig(np.zeros((2, 3)))


def test_embedded_matrices_have_even_multiplicities():
    # Kramers pairing: each eigenvalue of the complex image of a self-adjoint
    # quaternionic matrix appears an even number of times.
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = int(rng.integers(1, 7))
        a = hmat.random_self_adjoint(rng, d)
        w, _ = cmat.hermitian_eig(embed.psi(a))
        tol = 1e-8 * max(1.0, a.frob())
        run = 1
        sizes = []
        for i in range(1, len(w)):
            if w[i] - w[i - 1] > tol:
                sizes.append(run)
                run = 1
            else:
                run += 1
        sizes.append(run)
        assert all(size % 2 == 0 for size in sizes), sizes


def test_hermitian_check_helpers():
    assert cmat.is_hermitian(np.eye(3))
    assert not cmat.is_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert cmat.hermitian_defect(np.eye(2)) == 0.0
