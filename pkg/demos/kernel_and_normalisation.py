"""
The qubit Wigner kernel and its normalisation
=============================================

Build the single-qubit kernel, look at its spectrum, and check that a
random three-qubit state integrates to one and can be rebuilt from its
Wigner function.
"""

import numpy as np

from qphase import states, wigner

# at the origin the kernel is just the extended parity over two
print(np.round(wigner.single_qubit_kernel(0.0, 0.0).real, 4))

# rotating it leaves the spectrum (1 -+ sqrt 3) / 2 alone
k = wigner.single_qubit_kernel(0.4, 1.3)
print("eigenvalues:", np.round(np.linalg.eigvalsh(k), 6), "trace:", np.trace(k).real)

# the third Euler angle drops out
print("big-phi shift:", np.abs(wigner.single_qubit_kernel(0.4, 1.3, 2.0) - k).max())

rng = np.random.default_rng(0)
rho = states.random_density(3, rng)
c = wigner.pauli_coefficients(rho)

# 8 Gauss-Legendre nodes in u = sin^2(theta) times 16 trapezoid nodes in phi per qubit
print("int W =", wigner.integrate(c))

rebuilt = wigner.reconstruct_from_wigner(lambda a: wigner.evaluate(c, a), 3)
print("round-trip error:", np.abs(rebuilt - rho).max())

sigma = states.random_density(3, rng)
print("overlap:", wigner.overlap(c, wigner.pauli_coefficients(sigma)), "trace:", np.trace(rho @ sigma).real)
