"""Small dense Hermitian eigensolver (cyclic complex Jacobi) and trace norm."""

from __future__ import annotations

import numpy as np

from ..errors import NotHermitian
from ..tolerances import TOL

MAX_SWEEPS = 100
MAX_DIM = 64


def _as_hermitian(m, tol: float = TOL.structural) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise NotHermitian(f"dimension {a.shape[0]} exceeds {MAX_DIM}")
    if a.size and np.max(np.abs(a - a.conj().T)) > tol:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return 0.5 * (a + a.conj().T)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(m, tol: float = TOL.convergence, max_sweeps: int = MAX_SWEEPS):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Each pivot ``a[p, q] = g e^{i alpha}`` is first made real by rephasing
    column ``q``, then annihilated by the classic real rotation.  Returns
    ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues ascending and
    eigenvectors in the columns.
    """
    a = _as_hermitian(m)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))
    sweeps = 0
    while sweeps < max_sweeps and _off_norm(a) >= tol * scale:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g < 1e-300:
                    continue
                phase = apq / g
                theta = (a[q, q].real - a[p, p].real) / (2.0 * g)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = [[c, s], [-s e^{-ia}, c e^{-ia}]] on (p, q); A <- G^H A G
                col_p = a[:, p].copy()
                col_q = a[:, q] * np.conj(phase)
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :] * phase
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q] * np.conj(phase)
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweeps


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending."""
    return jacobi_eigh(m)[0]


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.sum(np.abs(hermitian_eigenvalues(a))))
