"""Entanglement and purity figures of merit, collected into a per-state fingerprint."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import wigner
from .linalg import PSD_TOL, check_partition, hermitian_eigen, num_qubits, partial_trace, partial_transpose, trace_norm
from .states import SIGMA_Y, check_density, fidelity, purity

YY = np.kron(SIGMA_Y, SIGMA_Y)


def linear_entropy(rho) -> float:
    """Normalised purity deficit ``(1 - Tr[rho^2]) / (1 - 2**-n)``."""
    n = num_qubits(np.asarray(rho))
    return min(1.0, max(0.0, (1.0 - purity(rho)) / (1.0 - 2.0**-n)))


def log_negativity(rho, bipartition) -> float:
    """``log2`` of the trace norm of the partial transpose over ``bipartition``."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    subset = check_partition(n, bipartition)
    if not 0 < len(subset) < n:
        raise ValueError(f"bipartition {subset} must be a nonempty proper subset of {n} qubits")
    return max(0.0, math.log2(trace_norm(partial_transpose(rho, subset))))


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    The ``lambda_k`` are the eigenvalues of ``R = sqrt(sqrt(rho) rho~ sqrt(rho))``,
    which are the singular values of ``A = sqrt(rho) sqrt(rho~)``. They are read
    off the Hermitian dilation ``[[0, A], [A^H, 0]]`` so that small values are not
    squared and square-rooted again.
    """
    rho = np.asarray(rho, dtype=complex)
    if num_qubits(rho) != 2:
        raise ValueError("concurrence is defined for two-qubit states only")
    w, v = hermitian_eigen(rho)
    if w[-1] < -PSD_TOL:
        raise ValueError(f"matrix is not PSD (eigenvalue {w[-1]:.3e})")
    # eigenvalues at roundoff level carry no information; their roots would be ~1e-8 noise
    w = np.where(w > 16 * np.finfo(float).eps * max(w[0], 1.0), w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    a = root @ YY @ root.conj() @ YY
    dilation = np.block([[np.zeros((4, 4)), a], [a.conj().T, np.zeros((4, 4))]])
    lam, _ = hermitian_eigen(dilation)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def _require_three(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if num_qubits(rho) != 3:
        raise ValueError("tangles are defined for three-qubit states only")
    return rho


def pair_tangles(rho) -> dict[tuple[int, int], float]:
    """Squared concurrence of each two-qubit reduction, keyed by qubit pair."""
    rho = _require_three(rho)
    return {pair: concurrence(partial_trace(rho, pair)) ** 2 for pair in combinations(range(3), 2)}


def tau2(rho) -> float:
    return math.fsum(pair_tangles(rho).values()) / 3.0


def _single_linear_entropy(rho, qubit: int) -> float:
    return linear_entropy(partial_trace(rho, [qubit]))


def _others(pivot: int) -> tuple[tuple[int, int], tuple[int, int]]:
    j, k = (q for q in range(3) if q != pivot)
    return tuple(sorted((pivot, j))), tuple(sorted((pivot, k)))


def tau3_paper(rho, pivot: int, tangles: Optional[dict] = None) -> float:
    """``sqrt(7/4 S_lin(rho_i)) - (tau_ij + tau_ik)``, not clipped.

    ``S_lin(rho_i)`` is the single-qubit linear entropy (n = 1
    normalisation). The value exceeds 1 for the ideal GHZ state.
    """
    rho = _require_three(rho)
    tangles = pair_tangles(rho) if tangles is None else tangles
    ij, ik = _others(pivot)
    return float(math.sqrt(1.75 * _single_linear_entropy(rho, pivot)) - (tangles[ij] + tangles[ik]))


def tau3_ckw(rho, pivot: int, tangles: Optional[dict] = None) -> float:
    """Residual tangle ``4 det(rho_i) - tau_ij - tau_ik``, clipped at 0.

    Exact for pure states only.
    """
    rho = _require_three(rho)
    tangles = pair_tangles(rho) if tangles is None else tangles
    ij, ik = _others(pivot)
    det = np.linalg.det(partial_trace(rho, [pivot])).real
    return max(0.0, float(4.0 * det - tangles[ij] - tangles[ik]))


def tau3_paper_mean(rho, tangles: Optional[dict] = None) -> float:
    tangles = pair_tangles(rho) if tangles is None else tangles
    return math.fsum(tau3_paper(rho, i, tangles) for i in range(3)) / 3.0


def tau3_ckw_mean(rho, tangles: Optional[dict] = None) -> float:
    tangles = pair_tangles(rho) if tangles is None else tangles
    return math.fsum(tau3_ckw(rho, i, tangles) for i in range(3)) / 3.0


def _cut_label(n: int, qubit: int) -> str:
    rest = "".join(str(q + 1) for q in range(n) if q != qubit)
    return f"{qubit + 1}|{rest}"


@dataclass
class WignerConfig:
    """How the Wigner-based entries of a fingerprint are computed."""

    method: str = "monte-carlo"
    samples: int = 1_000_000
    seed: int = 0
    points: int = 20
    grid: wigner.QuadratureGrid = field(default_factory=wigner.QuadratureGrid.gauss)


@dataclass
class QuantifierReport:
    negative_volume: float
    negative_volume_std_error: Optional[float]
    integrated_ea: float
    linear_entropy: float
    log_negativity: dict[str, Optional[float]]
    tau2: Optional[float]
    tau3_paper: Optional[float]
    tau3_ckw: Optional[float]
    fidelity_vs_target: Optional[float]
    purity: float

    def to_dict(self) -> dict:
        return asdict(self)


def fingerprint(rho, target: Optional[np.ndarray] = None, config: Optional[WignerConfig] = None) -> QuantifierReport:
    """Wigner-based and density-matrix-based indicators for one state.

    Tangle entries are ``None`` unless the state has three qubits. The
    log-negativity dictionary holds every single-qubit cut plus ``mean``.
    """
    rho = check_density(rho)
    config = config or WignerConfig()
    n = num_qubits(rho)
    nv, nv_err = wigner.negative_volume(
        rho, config.method, samples=config.samples, seed=config.seed, points=config.points
    )
    cuts: dict[str, Optional[float]] = {}
    if n > 1:
        for q in range(n):
            cuts[_cut_label(n, q)] = log_negativity(rho, [q])
        cuts["mean"] = math.fsum(cuts.values()) / n
    t2 = t3p = t3c = None
    if n == 3:
        tangles = pair_tangles(rho)
        t2 = math.fsum(tangles.values()) / 3.0
        t3p = tau3_paper_mean(rho, tangles)
        t3c = tau3_ckw_mean(rho, tangles)
    return QuantifierReport(
        negative_volume=nv,
        negative_volume_std_error=nv_err,
        integrated_ea=wigner.integrated_ea_slice(rho, config.grid),
        linear_entropy=linear_entropy(rho),
        log_negativity=cuts,
        tau2=t2,
        tau3_paper=t3p,
        tau3_ckw=t3c,
        fidelity_vs_target=None if target is None else fidelity(target, rho),
        purity=purity(rho),
    )
