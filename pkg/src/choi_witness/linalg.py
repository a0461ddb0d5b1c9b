"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays of shape ``(d, d)``. Everything here
targets d <= 16, so clarity wins over speed.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-9
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def mat_trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def symmetrize(a) -> np.ndarray:
    """Hermitian part (M + M^dagger)/2."""
    m = as_matrix(a)
    return 0.5 * (m + m.conj().T)


class HermitianEigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    """Real eigenvalues, ascending."""
    eigenvectors: np.ndarray
    """Orthonormal eigenvectors stored as columns."""

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eigen(a, tol: float = HERMITIAN_TOL) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then applies
    a real Givens rotation that zeroes it. Sweeps stop once the off-diagonal
    Frobenius norm drops below ``JACOBI_TOL`` (relative to the matrix norm when
    that exceeds one) or after ``JACOBI_MAX_SWEEPS`` sweeps.

    :param a: square complex matrix, Hermitian within ``tol``.
    :param tol: Hermiticity tolerance on the entrywise deviation.
    :raises ValueError: if ``a`` is not Hermitian within ``tol``.
    """
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    m = symmetrize(m)
    n = m.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(m)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(m) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                theta = (m[q, q].real - m[p, p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) on (p, q) followed by a real rotation
                j_pp, j_pq = c, s
                j_qp, j_qq = -s * np.conj(phase), c * np.conj(phase)
                col_p = m[:, p].copy()
                col_q = m[:, q].copy()
                m[:, p] = col_p * j_pp + col_q * j_qp
                m[:, q] = col_p * j_pq + col_q * j_qq
                row_p = m[p, :].copy()
                row_q = m[q, :].copy()
                m[p, :] = np.conj(j_pp) * row_p + np.conj(j_qp) * row_q
                m[q, :] = np.conj(j_pq) * row_p + np.conj(j_qq) * row_q
                m[p, q] = 0.0
                m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * j_pp + vq * j_qp
                v[:, q] = vp * j_pq + vq * j_qq

    eigenvalues = np.real(np.diag(m)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return HermitianEigenSystem(eigenvalues[order], v[:, order])


def matrix_power_int(a, n: int) -> np.ndarray:
    """Integer power ``a**n`` by binary exponentiation, ``n >= 1``."""
    m = as_matrix(a)
    if int(n) != n or n < 1:
        raise ValueError(f"power must be a positive integer, got {n!r}")
    n = int(n)
    result = None
    base = m
    while n:
        if n & 1:
            result = base if result is None else result @ base
        n >>= 1
        if n:
            base = base @ base
    return result
