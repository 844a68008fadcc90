"""
Equal-angle slices of GHZ and W
===============================

Set every theta_i = theta and phi_i = phi. The GHZ slice oscillates in phi,
the W slice does not. A pi/2 rotation of one qubit changes the picture.
"""

import numpy as np

from qphase import states, wigner

ghz = states.projector(states.make_ghz())
w = states.projector(states.make_w())
spec = wigner.SliceSpec(101, 101)
theta, phi = spec.thetas(), spec.phis()

panels = {
    "GHZ": wigner.equal_angle_slice(ghz, spec),
    "W": wigner.equal_angle_slice(w, spec),
    "GHZ, qubit 0 rotated about y": wigner.equal_angle_slice(ghz, wigner.SliceSpec(101, 101, (0, "y", np.pi / 2))),
    "W, qubit 0 rotated about x": wigner.equal_angle_slice(w, wigner.SliceSpec(101, 101, (0, "x", np.pi / 2))),
}

for name, values in panels.items():
    print(f"{name:30s} min {values.min():+.3f}  max {values.max():+.3f}  max phi-spread {np.ptp(values, axis=1).max():.2e}")

print("integrated EA slice: GHZ", wigner.integrated_ea_slice(ghz), " W", wigner.integrated_ea_slice(w))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(2, 2, figsize=(9, 8), subplot_kw={"projection": "polar"})
    for ax, (name, values) in zip(axes.ravel(), panels.items()):
        # theta as the radius, phi as the angle
        mesh = ax.pcolormesh(phi, theta, values, cmap="RdBu_r", vmin=-1.5, vmax=1.5, shading="auto")
        ax.set_title(name, fontsize=9)
        ax.set_yticklabels([])
    fig.colorbar(mesh, ax=axes, shrink=0.6)
    fig.savefig("equal_angle_slices.png", dpi=120)
    print("wrote equal_angle_slices.png")
