# eigen.py
"""Cyclic Jacobi eigensolver for real symmetric and complex Hermitian matrices.

A complex Hermitian H = A + iB is handled through its real symmetric embedding
[[A, -B], [B, A]]: every eigenvalue of H appears there twice, and an
eigenvector (x, y) of the embedding gives the eigenvector x + iy of H.
"""
from typing import Tuple
import logging
import math

import numpy as np

from python_super_quantum.errors import ConvergenceError, DimensionMismatchError

logger = logging.getLogger(__name__)

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100


def jacobi_symmetric(
    matrix: np.ndarray, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS
) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns).

    Sweeps rotate every off-diagonal pair in row order until the off-diagonal
    Frobenius norm drops to ``tol`` (scaled by the matrix norm when that
    exceeds 1).
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off={off:.3e})")
            order = np.argsort(np.diag(a), kind="stable")
            return np.diag(a)[order], v[:, order]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                negligible = 100.0 * abs(apq)
                if abs(a[p, p]) + negligible == abs(a[p, p]) and abs(a[q, q]) + negligible == abs(a[q, q]):
                    a[p, q] = a[q, p] = 0.0
                    continue
                gap = a[q, q] - a[p, p]
                if abs(gap) + negligible == abs(gap):
                    t = apq / gap
                else:
                    tau = gap / (2.0 * apq)
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")


def real_embedding(hermitian: np.ndarray) -> np.ndarray:
    h = np.asarray(hermitian, dtype=complex)
    a, b = h.real, h.imag
    return np.block([[a, -b], [b, a]])


def hermitian_eigvalsh(hermitian: np.ndarray) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix, ascending"""
    values, _ = jacobi_symmetric(real_embedding(hermitian))
    return values[::2]


def top_eigenpair(hermitian: np.ndarray) -> Tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector of a Hermitian matrix"""
    h = np.asarray(hermitian, dtype=complex)
    n = h.shape[0]
    values, vectors = jacobi_symmetric(real_embedding(h))
    top = vectors[:, -1]
    return float(values[-1]), top[:n] + 1j * top[n:]


def lambda_max(hermitian: np.ndarray) -> float:
    return float(hermitian_eigvalsh(hermitian)[-1])


def lambda_min(hermitian: np.ndarray) -> float:
    return float(hermitian_eigvalsh(hermitian)[0])
