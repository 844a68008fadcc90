"""Dense complex matrix helpers for small multi-qubit operators.

Matrices are plain ``numpy`` complex arrays. Qubit 0 is the leftmost
tensor factor, i.e. the most significant bit of a basis label.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
MAX_QUBITS = 5


def num_qubits(m: np.ndarray) -> int:
    """Number of qubits of a square ``2**n x 2**n`` matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    n = d.bit_length() - 1
    if d < 2 or 2**n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


def check_partition(n_qubits: int, subset: Iterable[int]) -> tuple[int, ...]:
    """Validate an ordered list of distinct qubit indices in ``[0, n_qubits)``."""
    subset = tuple(int(q) for q in subset)
    if any(q < 0 or q >= n_qubits for q in subset):
        raise ValueError(f"qubit indices {subset} out of range for {n_qubits} qubits")
    if any(b <= a for a, b in zip(subset, subset[1:])):
        raise ValueError(f"qubit indices {subset} must be strictly increasing")
    return subset


def tensor_product(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product; the first argument is the most significant factor."""
    if not ops:
        raise ValueError("need at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Trace out every qubit not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        ``2**n x 2**n`` operator.
    keep : sequence of int
        Strictly increasing indices of the qubits to keep.

    Returns
    -------
    ndarray
        Reduced operator of dimension ``2**len(keep)``.
    """
    n = num_qubits(rho)
    keep = check_partition(n, keep)
    t = np.asarray(rho, dtype=complex).reshape((2,) * (2 * n))
    traced = [q for q in range(n) if q not in keep]
    # trace the highest index first so remaining axis positions stay valid
    for k, q in enumerate(sorted(traced, reverse=True)):
        m = n - k
        t = np.trace(t, axis1=q, axis2=q + m)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def partial_transpose(rho: np.ndarray, subset: Sequence[int]) -> np.ndarray:
    """Transpose the row/column indices of the qubits in ``subset``."""
    n = num_qubits(rho)
    subset = check_partition(n, subset)
    t = np.asarray(rho, dtype=complex).reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in subset:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return t.transpose(axes).reshape(rho.shape)


def hermitian_asymmetry(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eigen(
    m: np.ndarray, tol: float = HERMITIAN_TOL, max_sweeps: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each off-diagonal pair ``(p, q)`` is annihilated by a phase shift that
    makes ``a[p, q]`` real, followed by a real plane rotation. Sweeps repeat
    until the off-diagonal mass is negligible relative to the matrix norm.

    Parameters
    ----------
    m : ndarray
        Square Hermitian matrix.
    tol : float
        Largest accepted entry of ``|m - m^H|``.
    max_sweeps : int
        Safety cap on the number of full sweeps.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in descending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.

    Raises
    ------
    ValueError
        If ``m`` is not square or not Hermitian within ``tol``.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = hermitian_asymmetry(a)
    if asym > tol:
        raise ValueError(f"matrix is not Hermitian (max |m - m^H| = {asym:.3e})")
    a = 0.5 * (a + a.conj().T)
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    scale = np.linalg.norm(a)
    if d == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v

    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= eps * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r <= eps * 1e-3 * scale:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                v[:, idx] = v[:, idx] @ j
    else:
        raise RuntimeError("Jacobi eigensolver did not converge")

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    is rejected.
    """
    w, v = hermitian_eigen(m)
    if w.size and w[-1] < -tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = hermitian_eigen(m)
    return float(np.sum(np.abs(w)))
