"""Ideal three-qubit states, noise channels and state comparisons.

Pure states are 1-D complex amplitude vectors and density operators are
``2**n x 2**n`` complex arrays. Polarisation is encoded as H -> 0, V -> 1.
The third qubit is a path label (c or a) whose bit value is chosen per
state, see :func:`make_ghz` and :func:`make_w`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import HERMITIAN_TOL, PSD_TOL, hermitian_asymmetry, num_qubits

NORM_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

NOISE_KINDS = ("global-depolarizing", "per-qubit-dephasing", "population-imbalance")


def _ket(amplitudes: dict[str, complex]) -> np.ndarray:
    n = len(next(iter(amplitudes)))
    psi = np.zeros(2**n, dtype=complex)
    for bits, amp in amplitudes.items():
        psi[int(bits, 2)] = amp
    return psi


def _path_bits(path_zero: str) -> dict[str, str]:
    if path_zero not in ("c", "a"):
        raise ValueError(f"path_zero must be 'c' or 'a', got {path_zero!r}")
    return {"c": "0", "a": "1"} if path_zero == "c" else {"c": "1", "a": "0"}


def make_ghz(path_zero: str = "c") -> np.ndarray:
    """Cluster-form GHZ state on two polarisation qubits and a path qubit.

    ``(|HHc> - |VVc> + |HVa> + |VHa>) / 2``. With the default encoding
    (path c -> 0) the amplitudes sit on ``|000>, |110>, |011>,
    |101>`` with a minus sign on ``|110>``.
    """
    p = _path_bits(path_zero)
    return _ket(
        {
            "00" + p["c"]: 0.5,
            "11" + p["c"]: -0.5,
            "01" + p["a"]: 0.5,
            "10" + p["a"]: 0.5,
        }
    )


def make_w(path_zero: str = "a") -> np.ndarray:
    """W state on two polarisation qubits and a path qubit.

    ``(|HHc> + |HVa> + |VHa>) / sqrt(3)``. The default encoding maps the
    path a -> 0, which gives the single-excitation form
    ``(|001> + |010> + |100>) / sqrt(3)``. ``path_zero="c"`` gives the
    literal relabelling ``(|000> + |011> + |101>) / sqrt(3)``.
    """
    p = _path_bits(path_zero)
    amp = 1.0 / np.sqrt(3.0)
    return _ket({"00" + p["c"]: amp, "01" + p["a"]: amp, "10" + p["a"]: amp})


def make_bell() -> np.ndarray:
    """``(|00> + |11>) / sqrt(2)``."""
    return _ket({"00": 1 / np.sqrt(2), "11": 1 / np.sqrt(2)})


def basis_state(bits: str) -> np.ndarray:
    return _ket({bits: 1.0})


def maximally_mixed(n_qubits: int) -> np.ndarray:
    d = 2**n_qubits
    return np.eye(d, dtype=complex) / d


def check_pure(psi: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"pure state must be a vector, got shape {psi.shape}")
    if psi.size < 2 or psi.size & (psi.size - 1):
        raise ValueError(f"state length {psi.size} is not a power of two")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalised (norm {norm:.12g})")
    return psi


def check_density(rho: np.ndarray) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return ``rho`` as complex."""
    rho = np.asarray(rho, dtype=complex)
    num_qubits(rho)
    asym = hermitian_asymmetry(rho)
    if asym > HERMITIAN_TOL:
        raise ValueError(f"density operator is not Hermitian (max |rho - rho^H| = {asym:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > HERMITIAN_TOL:
        raise ValueError(f"density operator trace is {tr.real:.12g}, expected 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if lam[0] < -PSD_TOL:
        raise ValueError(f"density operator has negative eigenvalue {lam[0]:.3e}")
    return rho


def projector(psi: np.ndarray) -> np.ndarray:
    """``|psi><psi|`` for a normalised vector."""
    psi = check_pure(psi)
    return np.outer(psi, psi.conj())


def embed(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Single-qubit operator acting on ``qubit`` of an ``n_qubits`` register."""
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {n_qubits} qubits")
    left = np.eye(2**qubit)
    right = np.eye(2 ** (n_qubits - qubit - 1))
    return np.kron(np.kron(left, op), right)


@dataclass(frozen=True)
class NoiseSpec:
    """One noise channel.

    ``kind`` is one of ``global-depolarizing``, ``per-qubit-dephasing`` or
    ``population-imbalance``; the per-qubit kinds need ``target_qubit``.
    """

    kind: str
    strength: float
    target_qubit: Optional[int] = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if not 0.0 <= self.strength <= 1.0:
            raise ValueError(f"noise strength {self.strength} outside [0, 1]")
        if self.kind != "global-depolarizing" and self.target_qubit is None:
            raise ValueError(f"noise kind {self.kind!r} requires a target qubit")


def apply_noise(rho: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    p = spec.strength
    if spec.kind == "global-depolarizing":
        return (1 - p) * rho + p * maximally_mixed(n)
    z = embed(SIGMA_Z, spec.target_qubit, n)
    if spec.kind == "per-qubit-dephasing":
        return (1 - p) * rho + p * (z @ rho @ z)
    k = embed(np.diag([1.0, np.sqrt(1.0 - p)]), spec.target_qubit, n)
    out = k @ rho @ k.conj().T
    tr = np.trace(out).real
    if tr <= 0.0:
        raise ValueError("population-imbalance removed the whole state")
    return out / tr


def fidelity(psi: np.ndarray, rho: np.ndarray) -> float:
    """``<psi| rho |psi>`` for a pure target and a density operator."""
    psi = check_pure(psi)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (psi.size, psi.size):
        raise ValueError(f"dimension mismatch: state {psi.size}, operator {rho.shape}")
    return float(np.real(psi.conj() @ rho @ psi))


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def rotation(axis: str, angle: float) -> np.ndarray:
    """``exp(-i angle sigma_axis / 2)``."""
    pauli = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
    if axis not in pauli:
        raise ValueError(f"rotation axis must be x, y or z, got {axis!r}")
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * pauli[axis]


def rotate_qubit(rho: np.ndarray, qubit: int, axis: str, angle: float) -> np.ndarray:
    """Apply a single-qubit rotation to one qubit of ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    u = embed(rotation(axis, angle), qubit, num_qubits(rho))
    return u @ rho @ u.conj().T


def random_density(n_qubits: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Random density operator from a Ginibre matrix of the given rank."""
    d = 2**n_qubits
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    d = 2**n_qubits
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return psi / np.linalg.norm(psi)
