"""Pauli-basis measurement simulation and maximum-likelihood reconstruction."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .linalg import num_qubits
from .states import check_density, maximally_mixed
from .wigner import density_from_coefficients

PROB_FLOOR = 1e-12

_BASES = {
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
    "Z": np.eye(2, dtype=complex),
}


def all_settings(n_qubits: int) -> list[str]:
    """The ``3**n`` setting strings in lexicographic order ``XX..X`` to ``ZZ..Z``."""
    return ["".join(s) for s in itertools.product("XYZ", repeat=n_qubits)]


def outcomes(n_qubits: int) -> list[str]:
    return [format(k, f"0{n_qubits}b") for k in range(2**n_qubits)]


def check_setting(setting: str, n_qubits: int) -> str:
    if len(setting) != n_qubits or any(ch not in "XYZ" for ch in setting):
        raise ValueError(f"invalid setting {setting!r} for {n_qubits} qubits")
    return setting


def measurement_basis(setting: str) -> np.ndarray:
    """Unitary whose column ``k`` is the eigenvector for outcome bitstring ``k``.

    Bit 0 on a qubit is the +1 eigenvector of its Pauli, bit 1 the -1 one.
    """
    out = np.ones((1, 1), dtype=complex)
    for ch in setting:
        out = np.kron(out, _BASES[ch])
    return out


def born_probabilities(rho, setting: str) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    check_setting(setting, num_qubits(rho))
    v = measurement_basis(setting)
    return np.real(np.einsum("io,ij,jo->o", v.conj(), rho, v))


@dataclass
class TomographyDataset:
    """Counts per setting; ``counts[setting][k]`` is the count of outcome ``k``."""

    n_qubits: int
    shots_per_setting: int
    counts: dict[str, np.ndarray]

    def __post_init__(self):
        for setting, row in self.counts.items():
            check_setting(setting, self.n_qubits)
            row = np.asarray(row)
            if row.shape != (2**self.n_qubits,) or np.any(row < 0):
                raise ValueError(f"setting {setting}: expected {2**self.n_qubits} nonnegative counts")
            if int(row.sum()) != self.shots_per_setting:
                raise ValueError(
                    f"setting {setting}: counts sum to {int(row.sum())}, expected {self.shots_per_setting}"
                )

    @classmethod
    def from_records(cls, records) -> "TomographyDataset":
        """Build from ``(setting, outcome, count)`` triples."""
        records = list(records)
        if not records:
            raise ValueError("no measurement records")
        n = len(records[0][0])
        counts: dict[str, np.ndarray] = {}
        for setting, outcome, count in records:
            check_setting(setting, n)
            if len(outcome) != n or any(b not in "01" for b in outcome):
                raise ValueError(f"invalid outcome {outcome!r} for setting {setting!r}")
            if count < 0:
                raise ValueError(f"negative count for {setting}/{outcome}")
            row = counts.setdefault(setting, np.zeros(2**n, dtype=np.int64))
            row[int(outcome, 2)] += int(count)
        totals = {int(row.sum()) for row in counts.values()}
        if len(totals) != 1:
            raise ValueError(f"settings have different shot totals: {sorted(totals)}")
        return cls(n, totals.pop(), counts)

    def records(self) -> Iterator[tuple[str, str, int]]:
        labels = outcomes(self.n_qubits)
        for setting in all_settings(self.n_qubits):
            if setting in self.counts:
                for label, count in zip(labels, self.counts[setting]):
                    yield setting, label, int(count)

    def missing_settings(self) -> list[str]:
        return [s for s in all_settings(self.n_qubits) if s not in self.counts]

    def is_complete(self) -> bool:
        return not self.missing_settings()


def simulate_counts(rho, shots: int, seed: int) -> TomographyDataset:
    """One multinomial draw of ``shots`` per Pauli setting, from a PCG64 stream."""
    rho = check_density(rho)
    if shots < 1:
        raise ValueError("shots must be positive")
    n = num_qubits(rho)
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = {}
    for setting in all_settings(n):
        p = np.clip(born_probabilities(rho, setting), 0.0, None)
        counts[setting] = rng.multinomial(shots, p / p.sum())
    return TomographyDataset(n, shots, counts)


def log_likelihood(rho, data: TomographyDataset) -> float:
    rho = np.asarray(rho, dtype=complex)
    if num_qubits(rho) != data.n_qubits:
        raise ValueError(f"state has {num_qubits(rho)} qubits, data has {data.n_qubits}")
    total = []
    for setting, row in data.counts.items():
        p = np.maximum(born_probabilities(rho, setting), PROB_FLOOR)
        total.append(float(np.dot(row, np.log(p))))
    return math.fsum(total)


@dataclass
class MleConfig:
    max_iterations: int = 5000
    convergence_tol: float = 1e-10
    dilution: float = 0.5
    seed_state: str = "maximally-mixed"
    debug: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not 0.0 < self.dilution <= 1.0:
            raise ValueError("dilution must lie in (0, 1]")
        if self.seed_state not in ("maximally-mixed", "linear-inversion-projected"):
            raise ValueError(f"unknown seed state {self.seed_state!r}")


@dataclass
class MleResult:
    rho: np.ndarray
    iterations: int
    loglik: float
    converged: bool
    history: list[float]


def linear_inversion(data: TomographyDataset) -> np.ndarray:
    """Unconstrained estimate from averaged Pauli expectation values."""
    n = data.n_qubits
    labels = np.array([[int(b) for b in o] for o in outcomes(n)])
    signs = 1 - 2 * labels  # (2**n, n)
    sums = np.zeros((4,) * n)
    hits = np.zeros((4,) * n)
    letter = {"X": 1, "Y": 2, "Z": 3}
    for setting, row in data.counts.items():
        freq = np.asarray(row, dtype=float) / data.shots_per_setting
        for mask in itertools.product((0, 1), repeat=n):
            idx = tuple(letter[ch] if m else 0 for ch, m in zip(setting, mask))
            parity = np.prod(np.where(np.array(mask, bool), signs, 1), axis=1)
            sums[idx] += float(freq @ parity)
            hits[idx] += 1
    expect = np.divide(sums, hits, out=np.zeros_like(sums), where=hits > 0)
    return density_from_coefficients(expect / 2**n)


def _project_physical(m: np.ndarray, mix: float = 0.01) -> np.ndarray:
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        return maximally_mixed(num_qubits(m))
    rho = (v * (w / w.sum())) @ v.conj().T
    # keep full rank so the multiplicative update can reach every direction
    return (1 - mix) * rho + mix * maximally_mixed(num_qubits(m))


def mle_reconstruct(data: TomographyDataset, config: MleConfig = MleConfig()) -> MleResult:
    """Diluted ``R rho R`` iteration for the maximum-likelihood state.

    Each step proposes ``N[(1 - eps) rho + eps R rho R]`` with
    ``R = sum f / p(rho) Pi`` over normalised frequencies, so that
    ``Tr[R rho] = 1``. A proposal that lowers the log-likelihood is
    rejected and ``eps`` is halved, so accepted steps never decrease it.
    Iteration stops when the relative log-likelihood gain drops below
    ``convergence_tol`` or after ``max_iterations``.
    """
    missing = data.missing_settings()
    if missing:
        raise ValueError(f"incomplete dataset: missing settings {missing}")
    n = data.n_qubits
    settings = all_settings(n)
    bases = np.stack([measurement_basis(s) for s in settings])
    counts = np.stack([np.asarray(data.counts[s], dtype=float) for s in settings])
    freqs = counts / counts.sum()

    def probs(rho):
        return np.real(np.einsum("sio,ij,sjo->so", bases.conj(), rho, bases))

    def loglik(p):
        return float(np.sum(counts * np.log(np.maximum(p, PROB_FLOOR))))

    if config.seed_state == "maximally-mixed":
        rho = maximally_mixed(n)
    else:
        rho = _project_physical(linear_inversion(data))
    p = probs(rho)
    ll = loglik(p)
    history = [ll]
    eps = config.dilution
    converged = False
    iterations = 0
    while iterations < config.max_iterations:
        iterations += 1
        ratio = freqs / np.maximum(p, PROB_FLOOR)
        r = np.einsum("sio,so,sjo->ij", bases, ratio, bases.conj())
        rrr = r @ rho @ r
        while True:
            cand = (1 - eps) * rho + eps * rrr
            cand = 0.5 * (cand + cand.conj().T)
            cand /= np.trace(cand).real
            p_new = probs(cand)
            ll_new = loglik(p_new)
            if ll_new >= ll or eps < 1e-12:
                break
            eps *= 0.5
        if ll_new < ll:
            # no ascent left at machine precision
            converged = True
            break
        gain = (ll_new - ll) / max(abs(ll), 1e-300)
        rho, p, ll = cand, p_new, ll_new
        history.append(ll)
        if config.debug:
            check_density(rho)
        eps = min(2 * eps, config.dilution)
        if gain < config.convergence_tol:
            converged = True
            break
    return MleResult(rho, iterations, ll, converged, history)
