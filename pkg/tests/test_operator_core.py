import numpy as np
import pytest
from hypothesis import given, strategies as st

from bipartite import operator_core as oc

seeds = st.integers(0, 2**32 - 1)
small_dims = st.tuples(st.integers(1, 4), st.integers(1, 4))


def test_pauli_algebra():
    assert np.allclose(oc.commutator(oc.SIGMA_X, oc.SIGMA_Y), 2j * oc.SIGMA_Z)
    assert np.allclose(oc.SIGMA_PLUS @ oc.SPIN_DOWN, oc.SPIN_UP)
    assert np.allclose(oc.SIGMA_Z @ oc.SPIN_UP, oc.SPIN_UP)


def test_commutator_of_hermitians_checks_anti_hermiticity(rng):
    a, b = oc.random_hermitian(3, rng), oc.random_hermitian(3, rng)
    c = oc.commutator(a, b, hermitian_inputs=True)
    assert np.allclose(c, -c.conj().T)
    with pytest.raises(ValueError, match="dimension mismatch"):
        oc.commutator(a, np.eye(2))


def test_tensor_product_ordering():
    # subsystem I is the major index
    psi = oc.ket_product([1, 0], [0, 1, 0])
    assert np.argmax(np.abs(psi)) == 1
    assert oc.tensor_product(np.eye(2), oc.SIGMA_X).shape == (4, 4)


@given(seeds, small_dims)
def test_partial_trace_of_product(seed, dims):
    rng = np.random.default_rng(seed)
    r1, r2 = oc.random_density(dims[0], rng), oc.random_density(dims[1], rng)
    rho = np.kron(r1, r2)
    assert np.allclose(oc.partial_trace(rho, dims, "I"), r1)
    assert np.allclose(oc.partial_trace(rho, dims, "II"), r2)


@given(seeds, small_dims)
def test_pure_state_purities_agree(seed, dims):
    rng = np.random.default_rng(seed)
    psi = oc.random_state(dims[0] * dims[1], rng)
    p1 = oc.purity(oc.reduced_from_state(psi, dims, "I"))
    p2 = oc.purity(oc.reduced_from_state(psi, dims, "II"))
    assert abs(p1 - p2) < 1e-12
    assert 1 / min(dims) - 1e-12 <= p1 <= 1 + 1e-12
    assert np.allclose(oc.reduced_from_state(psi, dims), oc.partial_trace(oc.projector(psi), dims))
    assert abs(np.sum(oc.schmidt_weights(psi, dims) ** 2) - p1) < 1e-12


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(ValueError, match="dimension mismatch"):
        oc.partial_trace(np.eye(6), (2, 2))
    with pytest.raises(ValueError, match="unknown subsystem"):
        oc.partial_trace(np.eye(4), (2, 2), "III")


@given(seeds, st.integers(1, 6), st.floats(-50, 50))
def test_propagator_is_unitary_and_composes(seed, n, t):
    rng = np.random.default_rng(seed)
    h = oc.random_hermitian(n, rng)
    u = oc.propagator(h, t)
    assert oc.unitarity_error(u) < 1e-10
    assert np.allclose(oc.propagator(h, t / 2) @ oc.propagator(h, t / 2), u, atol=1e-9)


def test_propagator_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        oc.propagator(np.array([[0, 1], [0, 0]]), 1.0)


def test_validators():
    with pytest.raises(ValueError, match="normalized"):
        oc.as_state([1, 1])
    with pytest.raises(ValueError, match="square"):
        oc.as_operator(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="non-finite"):
        oc.as_operator([[np.nan]])
    with pytest.raises(ValueError, match="trace"):
        oc.as_density(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        oc.as_density(np.diag([1.5, -0.5]))
    assert oc.as_density(np.eye(2) / 2).shape == (2, 2)


def test_ladder_operators():
    a = oc.destroy(5)
    assert np.allclose(a.conj().T @ a, oc.number_op(5))
    # [a, a^dag] = 1 except at the truncation edge
    c = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(np.diag(c)[:-1], 1.0)


def test_bloch_vector_of_pure_states():
    plus = np.array([1, 1]) / np.sqrt(2)
    assert np.allclose(oc.bloch_vector(oc.projector(plus)), (1, 0, 0))
    assert np.allclose(oc.bloch_vector(oc.projector(oc.SPIN_DOWN)), (0, 0, -1))
    assert np.isclose(oc.expectation(oc.SIGMA_Z, oc.SPIN_UP), 1)
