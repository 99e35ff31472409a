import numpy as np
import pytest
from hypothesis import given, strategies as st

from bipartite import jaynes_cummings as jc
from bipartite.mean_field import evolve_exact
from bipartite.operator_core import SIGMA_Z, bloch_vector, destroy, reduced_from_state


def test_cutoff_rule():
    assert jc.min_fock_cutoff(6) == 82
    assert jc.min_fock_cutoff(-3) == 37
    assert jc.JCParams(coherent_alpha=6).n_cut == 82
    with pytest.raises(jc.TruncationError, match="truncation leakage"):
        jc.JCParams(coherent_alpha=6, n_cut=50)


def test_two_level_block_eigenvalues():
    # n = 1 block at omega = 1, gamma = 0.1 is {1.1, 0.9}
    params = jc.JCParams(omega=1.0, gamma=0.1, coherent_alpha=0.0, n_cut=10)
    h = jc.build_jc(params).full()
    idx = [1 * 10 + 1, 0 * 10 + 0]  # |down, 1>, |up, 0>
    assert np.allclose(np.linalg.eigvalsh(h[np.ix_(idx, idx)]), [0.9, 1.1])


def test_dressed_states_are_eigenvectors():
    params = jc.JCParams(omega=1.0, gamma=0.1, coherent_alpha=0.0, n_cut=12)
    h = jc.build_jc(params).full()
    for pair in jc.dressed_states(params):
        assert np.allclose(h @ pair.plus, pair.energy_plus * pair.plus)
        assert np.allclose(h @ pair.minus, pair.energy_minus * pair.minus)


def test_detuned_analytics_refused():
    params = jc.JCParams(coherent_alpha=1.0, b_field_energy=1.3)
    assert not params.resonant
    with pytest.raises(ValueError, match="resonance"):
        jc.dressed_states(params)
    with pytest.raises(ValueError, match="resonance"):
        jc.bloch_series(params, 0.0)


@given(st.floats(0, 5), st.floats(-np.pi, np.pi))
def test_coherent_amplitudes(r, phase):
    alpha = r * np.exp(1j * phase)
    cs = jc.coherent_state(alpha, jc.min_fock_cutoff(alpha))
    assert cs.leakage < 1e-10
    a = destroy(cs.amplitudes.size)
    psi = cs.state()
    assert abs(np.vdot(psi, a @ psi) - alpha) < 1e-6 * max(1, r)


def test_coherent_truncation_guard():
    with pytest.raises(jc.TruncationError):
        jc.coherent_state(6.0, 40)


def test_bloch_series_initial_value():
    params = jc.JCParams(coherent_alpha=2.0)
    sx, sy, sz = jc.bloch_series(params, 0.0)
    assert (sx, sy, sz) == pytest.approx((0, 0, -1), abs=1e-14)
    assert jc.purity_from_bloch(sx, sy, sz) == pytest.approx(1.0)


def test_purity_from_bloch_rejects_unphysical():
    with pytest.raises(ValueError, match="unphysical"):
        jc.purity_from_bloch(1.0, 0.1, 0.0)


def test_bloch_series_matches_exact_small_alpha():
    params = jc.JCParams(omega=1.0, gamma=0.2, coherent_alpha=1.5 * np.exp(0.7j))
    split = jc.build_jc(params)
    times = np.linspace(0, 10, 11)
    sx, sy, sz = jc.bloch_series(params, times)
    states = evolve_exact(split, jc.initial_state(params), 10.0, 1.0)
    for k, psi in enumerate(states):
        want = bloch_vector(reduced_from_state(psi, split.dims))
        assert np.allclose(want, (sx[k], sy[k], sz[k]), atol=1e-10)


def test_semiclassical_drive_equals_mean_field_average():
    params = jc.JCParams(gamma=0.05, coherent_alpha=2.0 * np.exp(0.3j))
    assert jc.semiclassical_drive_mismatch(params, [0.0, 0.7, 3.1]) < 1e-10
    h0 = jc.semiclassical_drive(params, 0.0)
    assert np.allclose(np.diag(h0), 0.5 * params.b_field_energy * np.diag(SIGMA_Z))


def test_short_time_law():
    assert jc.short_time_law(0.05, 2.0) == pytest.approx(0.99)


def test_benchmark_small_run():
    params = jc.JCParams(gamma=0.05, coherent_alpha=2.0)
    bench = jc.run_benchmark(params, t_max=0.5, dt=0.002)
    s = bench.summary()
    assert len(bench.points) == 251
    assert s["top_level_population_max"] < 1e-8
    assert s["purity_symmetry_max"] < 1e-12
    assert s["mean_field_norm_drift_max"] < 1e-8
    assert bench.points[0].P == pytest.approx(1.0)
