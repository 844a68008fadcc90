"""
Negative volume: grid against Monte Carlo
=========================================

For |0> the negative volume reduces to a 1-D integral with value
2/sqrt(3) - 1. For GHZ the full 6-D integral is needed.
"""

import math
import time

import numpy as np

from qphase import states, wigner

zero = np.diag([1.0, 0.0])
print("analytic |0>:", 2 / math.sqrt(3) - 1)
for n_u in (10, 50, 200, 1000):
    print(f"  grid {n_u:5d} x 1   ", wigner.negative_volume(zero, "grid", points=(n_u, 1))[0])
print("  monte carlo 1e6 ", wigner.negative_volume(zero, "mc", samples=1_000_000, seed=1))

ghz = states.projector(states.make_ghz())
for points in (8, 12, 16, 20):
    t = time.perf_counter()
    value, _ = wigner.negative_volume(ghz, "grid", points=points)
    print(f"GHZ grid N={points:2d}: {value:.5f}  ({time.perf_counter() - t:.2f} s)")
for seed in range(3):
    value, se = wigner.negative_volume(ghz, "mc", samples=1_000_000, seed=seed)
    print(f"GHZ mc seed {seed}: {value:.5f} +- {se:.5f}")

# depolarising noise washes the negativity out
for p in (0.0, 0.2, 0.4, 0.6):
    rho = states.apply_noise(ghz, states.NoiseSpec("global-depolarizing", p))
    print(f"p = {p:.1f}: V = {wigner.negative_volume(rho, 'grid', points=12)[0]:.4f}")
