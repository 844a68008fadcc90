"""
Fingerprints of GHZ, W and their noisy versions
===============================================

Collect the Wigner-based and density-matrix-based indicators for a few
states and print them side by side.
"""

from qphase import quantifiers, states

ghz, w = states.make_ghz(), states.make_w()
config = quantifiers.WignerConfig(method="grid", points=12)


def noisy(psi, p):
    return states.apply_noise(states.projector(psi), states.NoiseSpec("global-depolarizing", p))


rows = {
    "GHZ": quantifiers.fingerprint(noisy(ghz, 0.0), ghz, config),
    "GHZ p=0.2": quantifiers.fingerprint(noisy(ghz, 0.2), ghz, config),
    "W": quantifiers.fingerprint(noisy(w, 0.0), w, config),
    "W p=0.2": quantifiers.fingerprint(noisy(w, 0.2), w, config),
    "I/8": quantifiers.fingerprint(states.maximally_mixed(3), None, config),
}

fields = ["negative_volume", "integrated_ea", "linear_entropy", "tau2", "tau3_paper", "tau3_ckw", "fidelity_vs_target"]
print(f"{'':12s}" + "".join(f"{f[:12]:>14s}" for f in fields + ["log_neg"]))
for name, report in rows.items():
    d = report.to_dict()
    cells = [d[f] for f in fields] + [d["log_negativity"]["mean"]]
    print(f"{name:12s}" + "".join(f"{'-' if v is None else format(v, '.4f'):>14s}" for v in cells))
