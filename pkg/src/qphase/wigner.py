"""Multi-qubit Wigner function on the product of Bloch-sphere phase spaces.

Each qubit carries Euler angles ``(theta, phi)`` with ``theta`` in
``[0, pi/2]`` and ``phi`` in ``[0, 2 pi)``. The single-qubit kernel is

    Delta(theta, phi) = U (I - sqrt(3) sigma_z) U^H / 2,
    U = exp(i sigma_z phi) exp(i sigma_y theta),

and the n-qubit kernel is the tensor product of single-qubit kernels.
The phase-space measure per qubit is ``sin(2 theta) dtheta dphi / pi``;
with ``u = sin(theta)**2`` it becomes ``du dphi / pi`` on the unit
interval, total mass 2. Under this measure ``W`` integrates to one and
``int W1 W2 = Tr[rho1 rho2]``.

Evaluation never forms kernel matrices. A state is expanded in the Pauli
basis, ``rho = sum_a c_a sigma_a``, and

    W(Omega) = sum_a c_a prod_i f_{a_i}(theta_i, phi_i),

with ``f_0 = 1`` and ``f_k = -sqrt(3) n_k`` for the Bloch direction ``n``
of the rotated parity axis. Sums over grids are contracted one qubit at a
time.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .linalg import num_qubits, tensor_product
from .states import SIGMA_X, SIGMA_Y, SIGMA_Z, check_density, rotate_qubit

SQRT3 = math.sqrt(3.0)
PAULIS = np.stack([np.eye(2, dtype=complex), SIGMA_X, SIGMA_Y, SIGMA_Z])
PARITY = np.diag([1.0 - SQRT3, 1.0 + SQRT3]).astype(complex)

_CHUNK = 1 << 16


def worker_count() -> int:
    """Worker threads for grid sweeps, capped by ``QPHASE_THREADS``."""
    cap = os.environ.get("QPHASE_THREADS")
    default = os.cpu_count() or 1
    if not cap:
        return default
    try:
        value = int(cap)
    except ValueError:
        raise ValueError(f"QPHASE_THREADS must be a positive integer, got {cap!r}") from None
    if value < 1:
        raise ValueError(f"QPHASE_THREADS must be a positive integer, got {cap!r}")
    return min(value, default)


def _map_ordered(fn, items):
    # results come back in input order, so merged sums do not depend on threading
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# kernels
# --------------------------------------------------------------------------


def euler_unitary(theta, phi, big_phi=0.0) -> np.ndarray:
    """``exp(i sz phi) exp(i sy theta) exp(i sz big_phi)``, broadcast over angles."""
    theta, phi, big_phi = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float), np.asarray(big_phi, dtype=float)
    )
    c, s = np.cos(theta), np.sin(theta)
    ry = np.empty(theta.shape + (2, 2), dtype=complex)
    ry[..., 0, 0] = c
    ry[..., 0, 1] = s
    ry[..., 1, 0] = -s
    ry[..., 1, 1] = c
    ep = np.exp(1j * phi)
    eb = np.exp(1j * big_phi)
    # diagonal phases on the left (phi) and right (big_phi)
    left = np.stack([ep, ep.conj()], axis=-1)[..., :, None]
    right = np.stack([eb, eb.conj()], axis=-1)[..., None, :]
    return left * ry * right


def single_qubit_kernel(theta, phi, big_phi=0.0) -> np.ndarray:
    """Rotated extended parity ``U (I - sqrt(3) sz) U^H / 2``.

    Broadcasts over array-valued angles; the trailing two axes hold the
    2x2 matrix. Hermitian, unit trace, eigenvalues ``(1 +- sqrt(3)) / 2``.
    """
    u = euler_unitary(theta, phi, big_phi)
    return 0.5 * (u @ PARITY @ np.swapaxes(u.conj(), -1, -2))


def kernel(angles) -> np.ndarray:
    """n-qubit kernel for an ``(n, 2)`` array of ``(theta, phi)`` pairs."""
    angles = np.asarray(angles, dtype=float).reshape(-1, 2)
    return tensor_product(*(single_qubit_kernel(t, p) for t, p in angles))


def bloch_direction(theta, phi) -> np.ndarray:
    """Unit vector ``U sz U^H`` in Bloch coordinates, shape ``(..., 3)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    s2 = np.sin(2 * theta)
    return np.stack([-s2 * np.cos(2 * phi), s2 * np.sin(2 * phi), np.cos(2 * theta)], axis=-1)


def kernel_factors(theta, phi) -> np.ndarray:
    """Pauli expectations ``Tr[sigma_a Delta]`` of the single-qubit kernel, shape ``(..., 4)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    s2 = SQRT3 * np.sin(2 * theta)
    out = np.empty(np.broadcast(theta, phi).shape + (4,))
    out[..., 0] = 1.0
    out[..., 1] = s2 * np.cos(2 * phi)
    out[..., 2] = -s2 * np.sin(2 * phi)
    out[..., 3] = -SQRT3 * np.cos(2 * theta)
    return out


def _factors_from_u(u, phi) -> np.ndarray:
    # same as kernel_factors with sin(theta)**2 = u, avoiding arcsin round-off
    u = np.asarray(u, dtype=float)
    phi = np.asarray(phi, dtype=float)
    s2 = 2.0 * np.sqrt(np.clip(u * (1.0 - u), 0.0, None))
    out = np.empty(np.broadcast(u, phi).shape + (4,))
    out[..., 0] = 1.0
    out[..., 1] = SQRT3 * s2 * np.cos(2 * phi)
    out[..., 2] = -SQRT3 * s2 * np.sin(2 * phi)
    out[..., 3] = -SQRT3 * (1.0 - 2.0 * u)
    return out


# --------------------------------------------------------------------------
# Pauli coefficients and contractions
# --------------------------------------------------------------------------


def pauli_coefficients(rho) -> np.ndarray:
    """Real tensor ``c[a1, ..., an] = Tr[rho sigma_a1 x ... x sigma_an] / 2**n``.

    Index 0, 1, 2, 3 stands for I, X, Y, Z on each qubit.
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    t = rho.reshape((2,) * (2 * n))
    rows, cols = list(range(n)), list(range(n, 2 * n))
    labels = list(range(2 * n, 3 * n))
    operands = [t, rows + cols]
    for q in range(n):
        operands += [PAULIS, [labels[q], cols[q], rows[q]]]
    c = np.einsum(*operands, labels, optimize=True) / 2**n
    residue = np.max(np.abs(c.imag))
    if residue > 1e-10:
        raise ValueError(f"operator is not Hermitian (imaginary Pauli residue {residue:.3e})")
    return np.ascontiguousarray(c.real)


def density_from_coefficients(coeffs) -> np.ndarray:
    """Inverse of :func:`pauli_coefficients`."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.ndim
    rows, cols = list(range(n)), list(range(n, 2 * n))
    labels = list(range(2 * n, 3 * n))
    operands = [coeffs, labels]
    for q in range(n):
        operands += [PAULIS, [labels[q], rows[q], cols[q]]]
    t = np.einsum(*operands, rows + cols, optimize=True)
    return t.reshape(2**n, 2**n)


def _contract_pointwise(coeffs: np.ndarray, factors: Sequence[np.ndarray]) -> np.ndarray:
    """``sum_a c_a prod_i F_i[m, a_i]`` for per-point factor arrays ``F_i`` of shape ``(M, 4)``."""
    t = factors[0] @ coeffs.reshape(4, -1)
    for f in factors[1:]:
        t = np.einsum("ma,mar->mr", f, t.reshape(t.shape[0], 4, -1))
    return t[:, 0]


def _contract_product(coeffs: np.ndarray, factors: Sequence[np.ndarray]) -> np.ndarray:
    """W on the outer-product grid of per-qubit factor arrays ``(m_i, 4)``.

    Returns shape ``(m_0 * ... * m_{n-1},)`` in row-major order.
    """
    t = coeffs.reshape(1, 4, -1)
    for f in factors:
        p, _, r = t.shape
        # (p, 4, r) -> (p, m, r)
        t = np.matmul(f, t)
        t = t.reshape(p * f.shape[0], 4, r // 4) if r >= 4 else t.reshape(p * f.shape[0], 1, 1)
    return t.reshape(-1)


def _check_coeffs(coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim < 1 or any(s != 4 for s in coeffs.shape):
        raise ValueError(f"Pauli coefficient tensor must have shape (4,)*n, got {coeffs.shape}")
    return coeffs


def evaluate(coeffs, angles) -> Union[float, np.ndarray]:
    """Wigner function at one or many phase-space points.

    Parameters
    ----------
    coeffs : ndarray
        Pauli coefficient tensor of shape ``(4,) * n``.
    angles : array_like
        ``(..., n, 2)`` array of ``(theta, phi)`` pairs.

    Returns
    -------
    float or ndarray
        ``W`` with the leading shape of ``angles``.
    """
    coeffs = _check_coeffs(coeffs)
    n = coeffs.ndim
    angles = np.asarray(angles, dtype=float)
    if angles.shape[-2:] != (n, 2):
        raise ValueError(f"angles must have trailing shape ({n}, 2), got {angles.shape}")
    lead = angles.shape[:-2]
    flat = angles.reshape(-1, n, 2)

    def chunk(start: int) -> np.ndarray:
        # (qubit, angle, point) layout keeps the trig inputs contiguous
        block = np.ascontiguousarray(flat[start : start + _CHUNK].transpose(1, 2, 0))
        factors = [kernel_factors(block[q, 0], block[q, 1]) for q in range(n)]
        return _contract_pointwise(coeffs, factors)

    # pointwise values, so threading cannot change them
    parts = _map_ordered(chunk, range(0, flat.shape[0], _CHUNK))
    out = np.concatenate(parts) if parts else np.empty(0)
    return float(out[0]) if not lead else out.reshape(lead)


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureGrid:
    """Per-qubit product rule for ``du dphi / pi``.

    Gauss-Legendre in ``u = sin(theta)**2`` (weights sum to 1) times the
    periodic trapezoid in ``phi`` (weights sum to ``2 pi``). With the
    defaults the rule is exact for every integrand used here: W, W1 W2 and
    W times the kernel are trigonometric polynomials of low degree per qubit.
    """

    nodes_u: np.ndarray
    weights_u: np.ndarray
    nodes_phi: np.ndarray
    weights_phi: np.ndarray

    @classmethod
    def gauss(cls, n_u: int = 8, n_phi: int = 16) -> "QuadratureGrid":
        if n_u < 1 or n_phi < 1:
            raise ValueError("quadrature needs at least one node per axis")
        x, w = np.polynomial.legendre.leggauss(n_u)
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        return cls((x + 1) / 2, w / 2, phi, np.full(n_phi, 2 * np.pi / n_phi))

    def check_exact(self):
        if self.nodes_u.size < 3 or self.nodes_phi.size < 8:
            raise ValueError("exact integration needs at least 3 u-nodes and 8 phi-nodes")

    @property
    def size(self) -> int:
        return self.nodes_u.size * self.nodes_phi.size

    def points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened single-qubit ``(u, phi, weight)``; weights sum to 2."""
        u, phi = np.meshgrid(self.nodes_u, self.nodes_phi, indexing="ij")
        w = np.outer(self.weights_u, self.weights_phi) / np.pi
        return u.ravel(), phi.ravel(), w.ravel()

    def angles(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Like :meth:`points` but with ``theta`` in place of ``u``."""
        u, phi, w = self.points()
        return np.arcsin(np.sqrt(u)), phi, w


DEFAULT_GRID = QuadratureGrid.gauss()


def integrate(coeffs, grid: QuadratureGrid = DEFAULT_GRID) -> float:
    """Integral of W over the full 2n-dimensional phase space."""
    coeffs = _check_coeffs(coeffs)
    grid.check_exact()
    u, phi, w = grid.points()
    per_qubit = (w[:, None] * _factors_from_u(u, phi)).sum(axis=0)
    # contracting each qubit against the weighted factor sum equals the full product-grid sum
    t = coeffs
    for _ in range(coeffs.ndim):
        t = np.tensordot(per_qubit, t, axes=([0], [0]))
    return float(t)


def _product_wigner(coeffs: np.ndarray, grid: QuadratureGrid) -> tuple[np.ndarray, np.ndarray]:
    u, phi, w = grid.points()
    f = _factors_from_u(u, phi)
    n = coeffs.ndim
    values = _contract_product(coeffs, [f] * n)
    weights = w
    for _ in range(n - 1):
        weights = np.multiply.outer(weights, w).ravel()
    return values, weights


def overlap(coeffs1, coeffs2, grid: QuadratureGrid = DEFAULT_GRID) -> float:
    """``int W1 W2 dOmega``; equals ``Tr[rho1 rho2]`` under this measure."""
    coeffs1, coeffs2 = _check_coeffs(coeffs1), _check_coeffs(coeffs2)
    if coeffs1.ndim != coeffs2.ndim:
        raise ValueError(f"qubit counts differ: {coeffs1.ndim} vs {coeffs2.ndim}")
    grid.check_exact()
    w1, weights = _product_wigner(coeffs1, grid)
    w2, _ = _product_wigner(coeffs2, grid)
    return math.fsum(weights * w1 * w2)


def reconstruct_from_wigner(
    wigner_fn: Callable[[np.ndarray], np.ndarray], n_qubits: int, grid: QuadratureGrid = DEFAULT_GRID
) -> np.ndarray:
    """Recover ``rho = int W(Omega) Delta(Omega) dOmega`` from point evaluations.

    ``wigner_fn`` receives an ``(..., n_qubits, 2)`` array of angles and
    returns W at each point. The kernel side is built from explicit 2x2
    matrices.
    """
    grid.check_exact()
    theta, phi, w = grid.angles()
    m = theta.size
    angles = np.empty((m,) * n_qubits + (n_qubits, 2))
    for q in range(n_qubits):
        shape = [1] * n_qubits
        shape[q] = m
        angles[..., q, 0] = theta.reshape(shape)
        angles[..., q, 1] = phi.reshape(shape)
    values = np.asarray(wigner_fn(angles), dtype=float).reshape((m,) * n_qubits)
    t = values
    for _ in range(n_qubits):
        t = t * w.reshape((m,) + (1,) * (t.ndim - 1))
        t = np.tensordot(t, single_qubit_kernel(theta, phi), axes=([0], [0]))
    # axes are now (r0, c0, r1, c1, ...)
    order = list(range(0, 2 * n_qubits, 2)) + list(range(1, 2 * n_qubits, 2))
    d = 2**n_qubits
    return t.transpose(order).reshape(d, d)


# --------------------------------------------------------------------------
# slices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceSpec:
    """Equal-angle slice grid. ``theta`` includes both ends, ``phi`` excludes ``2 pi``.

    ``pre_rotation`` is ``(qubit, axis, angle)`` applied as
    ``exp(-i angle sigma_axis / 2)`` to that qubit before slicing.
    """

    grid_theta: int = 201
    grid_phi: int = 201
    pre_rotation: Optional[tuple[int, str, float]] = None

    def __post_init__(self):
        if self.grid_theta < 2 or self.grid_phi < 2:
            raise ValueError("slice grids need at least 2 points per axis")

    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, np.pi / 2, self.grid_theta)

    def phis(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.grid_phi) / self.grid_phi


def _equal_angle_values(coeffs: np.ndarray, u, phi) -> np.ndarray:
    f = _factors_from_u(u, phi).reshape(-1, 4)
    return _contract_pointwise(coeffs, [f] * coeffs.ndim)


def equal_angle_slice(rho, spec: SliceSpec = SliceSpec()) -> np.ndarray:
    """W with every ``theta_i = theta`` and ``phi_i = phi``, shape ``(grid_theta, grid_phi)``."""
    rho = check_density(rho)
    if spec.pre_rotation is not None:
        qubit, axis, angle = spec.pre_rotation
        rho = rotate_qubit(rho, qubit, axis, angle)
    coeffs = pauli_coefficients(rho)
    theta, phi = np.meshgrid(spec.thetas(), spec.phis(), indexing="ij")
    f = kernel_factors(theta.ravel(), phi.ravel())
    values = _contract_pointwise(coeffs, [f] * coeffs.ndim)
    return values.reshape(theta.shape)


def integrated_ea_slice(rho, grid: QuadratureGrid = DEFAULT_GRID) -> float:
    """Integral of the equal-angle slice over one qubit's measure (mass 2)."""
    coeffs = pauli_coefficients(check_density(rho))
    grid.check_exact()
    u, phi, w = grid.points()
    return math.fsum(w * _equal_angle_values(coeffs, u, phi))


# --------------------------------------------------------------------------
# negative volume
# --------------------------------------------------------------------------


def _grid_shape(points) -> tuple[int, int]:
    if np.isscalar(points):
        points = (points, points)
    n_u, n_phi = (int(p) for p in points)
    if n_u < 2 or n_phi < 1:
        raise ValueError(f"grid method needs at least 2 points in u, got {points}")
    return n_u, n_phi


def _negative_volume_grid(coeffs: np.ndarray, points) -> float:
    n_u, n_phi = _grid_shape(points)
    u = (np.arange(n_u) + 0.5) / n_u
    phi = 2 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    uu, pp = np.meshgrid(u, phi, indexing="ij")
    f = _factors_from_u(uu.ravel(), pp.ravel())
    n = coeffs.ndim
    m = f.shape[0]
    block = max(1, min(m, (1 << 21) // max(1, m ** (n - 1))))

    def partial(start: int) -> float:
        values = _contract_product(coeffs, [f[start : start + block]] + [f] * (n - 1))
        return float(np.sum(np.abs(values) - values))

    sums = _map_ordered(partial, range(0, m, block))
    # midpoint weights are uniform: each cell has mass 2 / m per qubit
    return 2.0**n * math.fsum(sums) / m**n


def _negative_volume_mc(coeffs: np.ndarray, samples: int, seed: int) -> tuple[float, float]:
    n = coeffs.ndim
    rng = np.random.Generator(np.random.PCG64(seed))
    sizes = [min(_CHUNK, samples - s) for s in range(0, samples, _CHUNK)]
    draws = [rng.random((size, n, 2)) for size in sizes]

    def partial(draw: np.ndarray) -> tuple[float, float]:
        factors = [_factors_from_u(draw[:, q, 0], 2 * np.pi * draw[:, q, 1]) for q in range(n)]
        values = _contract_pointwise(coeffs, factors)
        g = np.abs(values) - values
        return float(np.sum(g)), float(np.sum(g * g))

    parts = _map_ordered(partial, draws)
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1) if samples > 1 else 0.0
    scale = 2.0**n
    return scale * mean, scale * math.sqrt(var / samples)


def negative_volume(
    rho,
    method: str = "monte-carlo",
    *,
    samples: int = 1_000_000,
    seed: int = 0,
    points: Union[int, tuple[int, int]] = 20,
) -> tuple[float, Optional[float]]:
    """Negative volume ``int (|W| - W) dOmega``.

    Parameters
    ----------
    rho : ndarray
        Density operator.
    method : {"monte-carlo", "grid"}
        ``monte-carlo`` samples ``(u_i, phi_i)`` uniformly, which samples the
        measure exactly, and reports a standard error. ``grid`` uses a
        midpoint product grid in ``(u, phi)`` with ``points`` nodes per
        axis (an int, or a ``(n_u, n_phi)`` pair) and reports no error.
    samples, seed : int
        Monte Carlo sample count and PCG64 seed.

    Returns
    -------
    value : float
    std_error : float or None
    """
    coeffs = pauli_coefficients(check_density(rho))
    if method in ("monte-carlo", "mc"):
        if samples < 1:
            raise ValueError("Monte Carlo needs at least one sample")
        return _negative_volume_mc(coeffs, int(samples), int(seed))
    if method == "grid":
        return _negative_volume_grid(coeffs, points), None
    raise ValueError(f"unknown negative-volume method {method!r}")
