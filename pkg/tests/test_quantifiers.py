import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qphase.linalg import partial_trace
from qphase.quantifiers import (
    WignerConfig,
    concurrence,
    fingerprint,
    linear_entropy,
    log_negativity,
    pair_tangles,
    tau2,
    tau3_ckw,
    tau3_ckw_mean,
    tau3_paper,
    tau3_paper_mean,
)
from qphase.states import (
    SIGMA_Y,
    NoiseSpec,
    apply_noise,
    basis_state,
    make_bell,
    make_ghz,
    make_w,
    maximally_mixed,
    projector,
    random_density,
    random_pure,
)

from conftest import random_unitary

GHZ = projector(make_ghz())
W = projector(make_w())
BELL = projector(make_bell())
GRID_CONFIG = WignerConfig(method="grid", points=6)


def product_pure(n, rng):
    psi = np.ones(1, dtype=complex)
    for _ in range(n):
        psi = np.kron(psi, random_pure(1, rng))
    return psi


def permute_qubits(rho, perm):
    n = len(perm)
    t = rho.reshape((2,) * (2 * n))
    return t.transpose(list(perm) + [p + n for p in perm]).reshape(2**n, 2**n)


def charpoly_concurrence(rho):
    # Faddeev-LeVerrier characteristic polynomial of rho * rho~, then numpy root finding
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    a = rho @ yy @ rho.conj() @ yy
    d = a.shape[0]
    coeffs = [1.0 + 0j]
    mk = np.zeros_like(a)
    for k in range(1, d + 1):
        mk = a @ mk + coeffs[-1] * np.eye(d)
        coeffs.append(-np.trace(a @ mk) / k)
    roots = np.roots(coeffs)
    lam = np.sort(np.sqrt(np.abs(roots.real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def test_charpoly_oracle_on_known_states():
    assert abs(charpoly_concurrence(BELL) - 1) < 1e-8
    assert abs(charpoly_concurrence(maximally_mixed(2))) < 1e-8


def test_linear_entropy_examples(rng):
    assert abs(linear_entropy(projector(random_pure(3, rng)))) < 1e-12
    for n in (1, 2, 3):
        assert abs(linear_entropy(maximally_mixed(n)) - 1) < 1e-12
    assert abs(linear_entropy(partial_trace(BELL, [0])) - 1) < 1e-12


def test_log_negativity_examples(rng):
    prod = projector(product_pure(3, rng))
    assert log_negativity(prod, [0]) < 1e-10
    assert abs(log_negativity(BELL, [0]) - 1) < 1e-12
    assert abs(log_negativity(GHZ, [0]) - 1) < 1e-12
    with pytest.raises(ValueError):
        log_negativity(GHZ, [])
    with pytest.raises(ValueError):
        log_negativity(GHZ, [0, 1, 2])


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), cut=st.sampled_from([[0], [1], [2], [0, 2]]))
def test_log_negativity_local_unitary_invariance(seed, cut):
    rng = np.random.default_rng(seed)
    rho = random_density(3, rng, rank=2)
    u = np.ones((1, 1))
    for _ in range(3):
        u = np.kron(u, random_unitary(2, rng))
    moved = u @ rho @ u.conj().T
    assert abs(log_negativity(moved, cut) - log_negativity(rho, cut)) <= 1e-9


def test_concurrence_examples(rng):
    assert abs(concurrence(BELL) - 1) < 1e-10
    assert concurrence(projector(product_pure(2, rng))) < 1e-7
    assert abs(concurrence(partial_trace(W, [0, 1])) - 2 / 3) < 1e-10
    with pytest.raises(ValueError):
        concurrence(GHZ)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), mix=st.floats(0.0, 0.9))
def test_concurrence_matches_characteristic_polynomial(seed, mix):
    # full rank keeps the polynomial roots simple and well conditioned
    rng = np.random.default_rng(seed)
    rho = mix * projector(random_pure(2, rng)) + (1 - mix) * random_density(2, rng)
    assert abs(concurrence(rho) - charpoly_concurrence(rho)) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_concurrence_of_pure_states(seed):
    psi = random_pure(2, np.random.default_rng(seed))
    oracle = abs(psi @ np.kron(SIGMA_Y, SIGMA_Y) @ psi)
    assert abs(concurrence(projector(psi)) - oracle) <= 1e-12


def test_werner_concurrence_closed_form():
    for p in np.linspace(0, 1, 11):
        rho = p * BELL + (1 - p) * np.eye(4) / 4
        assert abs(concurrence(rho) - max(0.0, (3 * p - 1) / 2)) < 1e-9


def test_tau2_examples():
    assert abs(tau2(GHZ)) < 1e-9
    assert abs(tau2(W) - 4 / 9) < 1e-9
    assert abs(tau2(projector(basis_state("000")))) < 1e-9
    with pytest.raises(ValueError):
        tau2(BELL)


def _tau3_paper_oracle(rho, pivot):
    r = partial_trace(rho, [pivot])
    s_lin = (1 - np.trace(r @ r).real) / 0.5
    others = [q for q in range(3) if q != pivot]
    pair = sum(concurrence(partial_trace(rho, sorted([pivot, q]))) ** 2 for q in others)
    return math.sqrt(1.75 * s_lin) - pair


def test_tau3_paper_examples():
    for i in range(3):
        assert abs(tau3_paper(GHZ, i) - math.sqrt(7 / 4)) < 1e-9
        assert abs(tau3_paper(W, i) - (math.sqrt(7 / 4 * 8 / 9) - 8 / 9)) < 1e-9
        assert abs(tau3_paper(projector(basis_state("000")), i)) < 1e-9
    with pytest.raises(ValueError):
        tau3_paper(BELL, 0)


def test_tau3_paper_matches_formula_on_random_states(rng):
    for _ in range(5):
        rho = random_density(3, rng, rank=2)
        for i in range(3):
            assert abs(tau3_paper(rho, i) - _tau3_paper_oracle(rho, i)) < 1e-9


def test_tau3_ckw_examples(rng):
    for i in range(3):
        assert abs(tau3_ckw(GHZ, i) - 1) < 1e-9
        assert abs(tau3_ckw(W, i)) < 1e-9
        assert abs(tau3_ckw(projector(product_pure(3, rng)), i)) < 1e-9


def test_tau3_ckw_is_pivot_independent_on_pure_states(rng):
    # the residual tangle of a pure state does not depend on the pivot
    rho = projector(random_pure(3, rng))
    values = [tau3_ckw(rho, i) for i in range(3)]
    assert max(values) - min(values) < 1e-9


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), perm=st.permutations([0, 1, 2]))
def test_tangles_invariant_under_relabelling(seed, perm):
    rho = random_density(3, np.random.default_rng(seed), rank=2)
    moved = permute_qubits(rho, perm)
    assert abs(tau2(moved) - tau2(rho)) < 1e-12
    assert abs(tau3_paper_mean(moved) - tau3_paper_mean(rho)) < 1e-12
    assert abs(tau3_ckw_mean(moved) - tau3_ckw_mean(rho)) < 1e-12


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_product_states_carry_no_entanglement(seed):
    rho = projector(product_pure(3, np.random.default_rng(seed)))
    for cut in ([0], [1], [2]):
        assert log_negativity(rho, cut) <= 1e-10
    assert tau2(rho) <= 1e-10
    assert tau3_ckw_mean(rho) <= 1e-10
    assert abs(tau3_paper_mean(rho)) <= 1e-7  # sqrt amplifies rounding in S_lin
    for pair, value in pair_tangles(rho).items():
        assert value <= 1e-10


STRENGTHS = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]


def _depolarised_ghz(p):
    return apply_noise(GHZ, NoiseSpec("global-depolarizing", p))


def test_log_negativity_decreases_under_depolarising_noise():
    values = [log_negativity(_depolarised_ghz(p), [0]) for p in STRENGTHS]
    assert all(a > b for a, b in zip(values, values[1:])), values


def test_tau3_ckw_decreases_under_depolarising_noise():
    values = [tau3_ckw_mean(_depolarised_ghz(p)) for p in STRENGTHS]
    assert all(a > b for a, b in zip(values, values[1:])), values


def test_fingerprint_ghz():
    r = fingerprint(GHZ, make_ghz(), GRID_CONFIG)
    assert abs(r.tau2) < 1e-9
    assert abs(r.integrated_ea) < 1e-9
    assert abs(r.linear_entropy) < 1e-12
    assert abs(r.fidelity_vs_target - 1) < 1e-12
    assert abs(r.tau3_ckw - 1) < 1e-9
    assert abs(r.tau3_paper - math.sqrt(7 / 4)) < 1e-9
    assert set(r.log_negativity) == {"1|23", "2|13", "3|12", "mean"}
    assert r.negative_volume > 0 and r.negative_volume_std_error is None


def test_fingerprint_w():
    r = fingerprint(W, make_w(), GRID_CONFIG)
    assert abs(r.tau2 - 4 / 9) < 1e-9
    assert abs(r.tau3_ckw) < 1e-9
    assert abs(r.integrated_ea) >= 0.01


def test_fingerprint_mixed():
    r = fingerprint(maximally_mixed(3), config=GRID_CONFIG)
    assert r.negative_volume == 0.0
    assert abs(r.linear_entropy - 1) < 1e-12
    assert all(abs(v) < 1e-12 for v in r.log_negativity.values())
    assert abs(r.tau2) < 1e-12
    # both three-tangle formulas only see the maximally mixed marginals here,
    # so they return their GHZ values; neither is a monotone on mixed states
    assert abs(r.tau3_ckw - 1) < 1e-12
    assert abs(r.tau3_paper - math.sqrt(7 / 4)) < 1e-12
    assert r.fidelity_vs_target is None


def test_fingerprint_two_qubits_has_null_tangles():
    r = fingerprint(BELL, config=GRID_CONFIG).to_dict()
    assert r["tau2"] is None and r["tau3_paper"] is None and r["tau3_ckw"] is None
    assert abs(r["log_negativity"]["1|2"] - 1) < 1e-12


def test_fingerprint_monte_carlo_reports_error():
    r = fingerprint(GHZ, config=WignerConfig(samples=50_000, seed=2))
    assert r.negative_volume_std_error > 0
