"""Acceptance checks, one test per criterion. Each prints a PASS/FAIL line."""
import numpy as np
import pytest

from bipartite import jaynes_cummings as jc
from bipartite.coefficient_dynamics import (
    build_quasi_hamiltonian,
    interaction_norm,
    propagate_coefficients,
    purity_projector,
    random_bipartite_hamiltonian,
    theorem_b_witness,
)
from bipartite.mean_field import (
    HamiltonianSplit,
    ProductState,
    beta_from_state,
    correlation_beta,
    evolve_exact,
    fidelity_sq,
    mean_field_frames,
    perturbative_deviation,
    product_purity,
    run_comparison,
)
from bipartite.operator_core import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    propagator,
    purity,
    random_density,
    random_hermitian,
    random_state,
    reduced_from_state,
)
from bipartite.su_basis import bipartite_basis, expand, reconstruct


def test_criterion_01_coefficient_propagation_matches_von_neumann(record_criterion):
    rng = np.random.default_rng(1)
    worst = 0.0
    for dims in [(2, 2), (2, 3), (3, 3)]:
        basis = bipartite_basis(*dims)
        d = basis.dim
        for _ in range(50):
            H = random_hermitian(d, rng)
            rho = random_density(d, rng)
            t = rng.uniform(0, 20) / np.linalg.norm(H, 2)
            hq = build_quasi_hamiltonian(H, basis)
            q = propagate_coefficients(hq, expand(rho, basis), t)
            u = propagator(H, t)
            worst = max(worst, np.max(np.abs(reconstruct(q) - u @ rho @ u.conj().T)))
    ok = worst <= 1e-8
    record_criterion(1, ok, f"max entry error {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_02_witness_detects_every_interaction(record_criterion):
    rng = np.random.default_rng(2)
    dims_cycle = [(2, 2), (2, 3), (3, 3)]
    min_witness, min_w = np.inf, np.inf
    for k in range(100):
        dims = dims_cycle[k % 3]
        coupling = 10 ** rng.uniform(np.log10(2e-3), 1)
        H = random_bipartite_hamiltonian(dims, rng, coupling)
        wn = interaction_norm(H, dims)
        assert wn > 1e-3
        hq = build_quasi_hamiltonian(H, bipartite_basis(*dims))
        min_witness = min(min_witness, theorem_b_witness(hq, purity_projector(hq.basis)))
        min_w = min(min_w, wn)
    max_free = 0.0
    for k in range(20):
        dims = dims_cycle[k % 3]
        H = random_bipartite_hamiltonian(dims, rng, coupling=0.0)
        hq = build_quasi_hamiltonian(H, bipartite_basis(*dims))
        max_free = max(max_free, theorem_b_witness(hq, purity_projector(hq.basis)))
    ok = min_witness > 1e-6 and max_free <= 1e-12
    record_criterion(2, ok, f"min witness {min_witness:.2e} at |W| >= {min_w:.2e}; "
                            f"max interaction-free witness {max_free:.2e}")
    assert ok


def test_criterion_03_beta_bound(record_criterion):
    rng = np.random.default_rng(3)
    excess = -np.inf
    for dims in [(2, 2), (2, 3)]:
        basis = bipartite_basis(*dims)
        for _ in range(1000):
            psi = random_state(basis.dim, rng)
            _, beta = correlation_beta(psi, basis)
            P = purity(reduced_from_state(psi, dims))
            excess = max(excess, beta - (1 - P ** 2))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    _, beta_bell = correlation_beta(bell, bipartite_basis(2, 2))
    P_bell = purity(reduced_from_state(bell, (2, 2)))
    bell_err = max(abs(beta_bell - 0.75), abs(beta_bell - (1 - P_bell ** 2)))
    ok = excess <= 1e-10 and bell_err <= 1e-12
    record_criterion(3, ok, f"max beta - (1 - P^2) = {excess:.2e}; Bell |beta - 3/4| = {bell_err:.1e}")
    assert ok


def test_criterion_04_dressed_spectrum(record_criterion):
    params = jc.JCParams(omega=1.0, gamma=0.1, coherent_alpha=0.0, n_cut=40)
    evals = np.linalg.eigvalsh(jc.build_jc(params).full())
    worst = 0.0
    for n in range(1, 31):
        for e in (n + 0.1 * np.sqrt(n), n - 0.1 * np.sqrt(n)):
            worst = max(worst, np.min(np.abs(evals - e)))
    # every eigenvalue is accounted for: ground state, 39 dressed pairs, the isolated top level
    expected = np.sort(np.concatenate([[0.0, 40.0], [n + s * 0.1 * np.sqrt(n) for n in range(1, 40) for s in (1, -1)]]))
    full_err = np.max(np.abs(np.sort(evals) - expected))
    ok = worst <= 1e-10 and full_err <= 1e-10
    record_criterion(4, ok, f"max |E - (n +- 0.1 sqrt n)| for n <= 30: {worst:.1e}")
    assert ok


def test_criterion_05_bloch_series_matches_exact(record_criterion):
    params = jc.JCParams(omega=1.0, gamma=0.05, coherent_alpha=3.0)
    split = jc.build_jc(params)
    psi0 = jc.initial_state(params).full()
    evals, evecs = np.linalg.eigh(split.full())
    c0 = evecs.conj().T @ psi0
    times = np.linspace(0, 0.3 / params.gamma, 121)
    sx, sy, sz = jc.bloch_series(params, times)
    worst = 0.0
    for k, t in enumerate(times):
        psi = evecs @ (np.exp(-1j * evals * t) * c0)
        r = reduced_from_state(psi, split.dims, "I")
        ex = [np.trace(r @ s).real for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
        worst = max(worst, np.max(np.abs(np.array(ex) - [sx[k], sy[k], sz[k]])))
    ok = worst <= 1e-6
    record_criterion(5, ok, f"max component error {worst:.2e} over gamma t in [0, 0.3]")
    assert ok


@pytest.fixture(scope="module")
def jc_alpha6():
    return jc.run_benchmark(jc.JCParams(omega=1.0, gamma=0.05, coherent_alpha=6.0), t_max=4.0, dt=0.001)


def test_criterion_06_short_time_purity_law(jc_alpha6, record_criterion):
    rel = jc_alpha6.purity_law_rel_err(window=(0.05, 0.2))
    ok = rel <= 0.15
    record_criterion(6, ok, f"max |(1-P) - (gamma t)^2| / (gamma t)^2 = {rel:.3f} "
                            f"for gamma t in [0.05, 0.2] (tol 0.15)")
    assert ok


def test_criterion_07_fidelity_purity_identity(jc_alpha6, record_criterion):
    P = np.array([p.P for p in jc_alpha6.points])
    F = np.array([p.fidelity_sq for p in jc_alpha6.points])
    window = (1 - P >= 1e-4) & (1 - P <= 1e-2)
    ratio = np.abs(F - np.sqrt(P))[window] / (1 - P[window])
    ok = window.sum() > 10 and ratio.max() <= 0.05
    record_criterion(7, ok, f"max |F^2 - sqrt P| / (1 - P) = {ratio.max():.2e} "
                            f"over {window.sum()} samples (tol 0.05)")
    assert ok


def test_criterion_08_semiclassical_limit(jc_alpha6, record_criterion):
    params = jc_alpha6.params
    sel = params.gamma * jc_alpha6.times <= 0.2 + 1e-12
    gap = 0.0
    for k in np.flatnonzero(sel):
        m = jc_alpha6.mean_field[k]
        phi = m.phi_I / np.linalg.norm(m.phi_I)
        sz_mf = (abs(phi[0]) ** 2 - abs(phi[1]) ** 2)
        gap = max(gap, abs(sz_mf - jc_alpha6.points[k].bloch[2]))
    drive = jc.semiclassical_drive_mismatch(params, np.linspace(0, 4, 41))
    ok = gap <= 0.05 and drive <= 1e-10
    record_criterion(8, ok, f"max |sz_mf - sz_exact| = {gap:.3e} (tol 0.05); "
                            f"drive mismatch {drive:.1e} (tol 1e-10)")
    assert ok


def test_criterion_09_mean_field_purity_conserved(jc_alpha6, record_criterion):
    worst = max(abs(product_purity(m) - 1) for m in jc_alpha6.mean_field[::10])
    split = HamiltonianSplit(random_hermitian(3, np.random.default_rng(9)),
                             random_hermitian(2, np.random.default_rng(10)),
                             0.3 * np.kron(np.diag([1.0, 0, -1]), SIGMA_Y))
    cmp = run_comparison(split, ProductState(np.array([1, 1, 1]) / np.sqrt(3), np.array([1, 0j])), 5.0, 0.01)
    worst = max(worst, max(abs(product_purity(m) - 1) for m in cmp.mean_field))
    ok = worst <= 1e-8
    record_criterion(9, ok, f"max |P_mean_field - 1| = {worst:.1e} (tol 1e-8)")
    assert ok


def test_criterion_10_first_order_deviation(record_criterion):
    eps = 0.01
    split = HamiltonianSplit(np.zeros((2, 2)), np.zeros((2, 2)), eps * np.kron(SIGMA_X, SIGMA_X))
    a = np.array([np.cos(0.4), np.exp(0.9j) * np.sin(0.4)])
    b = np.array([np.cos(1.1), np.exp(-0.3j) * np.sin(1.1)])
    init = ProductState(a, b)
    t_max, dt = 20.0, 0.01
    frames = mean_field_frames(split, init, t_max, dt)
    theta = perturbative_deviation(split, frames)
    exact = evolve_exact(split, init, t_max, dt)
    one_minus_F = np.array([1 - fidelity_sq(exact[k], frames.product(k)) for k in range(len(exact))])
    local = max(np.abs(theta[:, 1:, 0]).max(), np.abs(theta[:, 0, 1:]).max())
    local_ratio = local / np.abs(theta).max()
    sel = frames.times >= 0.5
    sum_sq = np.sum(np.abs(theta) ** 2, axis=(1, 2))
    rel = np.max(np.abs(sum_sq[sel] - one_minus_F[sel]) / one_minus_F[sel])
    ok = local_ratio <= 1e-3 and rel <= 0.10
    record_criterion(10, ok, f"max|theta_i0, theta_0j| / max|theta| = {local_ratio:.1e}; "
                             f"max rel |sum|theta|^2 - (1 - F^2)| = {rel:.3f} (tol 0.10)")
    assert ok
