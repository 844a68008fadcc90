"""Wigner functions, entanglement quantifiers and MLE tomography for a few qubits."""

from .linalg import hermitian_eigen, partial_trace, partial_transpose, psd_sqrt, tensor_product, trace_norm
from .quantifiers import (
    QuantifierReport,
    WignerConfig,
    concurrence,
    fingerprint,
    linear_entropy,
    log_negativity,
    tau2,
    tau3_ckw,
    tau3_paper,
)
from .states import NoiseSpec, apply_noise, fidelity, make_bell, make_ghz, make_w, maximally_mixed, projector, purity
from .tomography import MleConfig, TomographyDataset, born_probabilities, log_likelihood, mle_reconstruct, simulate_counts
from .wigner import (
    QuadratureGrid,
    SliceSpec,
    equal_angle_slice,
    evaluate,
    integrate,
    integrated_ea_slice,
    kernel,
    negative_volume,
    overlap,
    pauli_coefficients,
    reconstruct_from_wigner,
    single_qubit_kernel,
)

__version__ = "0.1.0"
