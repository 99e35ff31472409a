"""Dense linear algebra for finite-dimensional bipartite Hilbert spaces.

Operators, state vectors and density matrices are plain ``numpy`` arrays.
The ``as_*`` helpers validate them at API boundaries.

Conventions used throughout the package:

* hbar = 1; energies, couplings and frequencies are angular frequencies.
* Subsystem I is the major (slow) index of every tensor layout, i.e. the
  global basis state ``|a>|b>`` sits at index ``a * n_II + b``.
* Spin basis state 0 has sigma_z eigenvalue +1 ("up").
"""
from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
UNITARITY_TOL = 1e-10
NORM_TOL = 1e-9
POSITIVITY_TOL = 1e-10

SUBSYSTEMS = ("I", "II")


def as_operator(a, name="operator"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_state(psi, name="state", tol=NORM_TOL):
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size < 1:
        raise ValueError(f"{name} must be a non-empty vector, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"{name} is not normalized (norm = {norm!r})")
    return psi


def as_density(rho, name="density matrix"):
    rho = as_operator(rho, name)
    if not is_hermitian(rho, 1e-12):
        raise ValueError(f"{name} is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -POSITIVITY_TOL:
        raise ValueError(f"{name} has negative eigenvalues")
    return rho


def is_hermitian(a, tol=HERMITICITY_TOL):
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def subsystem_index(subsystem):
    """Map ``'I'``/``'II'`` (or 0/1) to 0/1."""
    if subsystem in ("I", 0):
        return 0
    if subsystem in ("II", 1):
        return 1
    raise ValueError(f"unknown subsystem {subsystem!r}; use 'I' or 'II'")


def dagger(a):
    return np.conj(np.transpose(a))


def tensor_product(a, b):
    """Kronecker product with the first factor as the major index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def ket_product(psi_i, psi_ii):
    return np.kron(np.asarray(psi_i, dtype=complex), np.asarray(psi_ii, dtype=complex))


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def commutator(a, b, hermitian_inputs=False):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    c = a @ b - b @ a
    if hermitian_inputs:
        # [A, B] of Hermitian A, B is anti-Hermitian
        assert np.max(np.abs(c + dagger(c)), initial=0.0) <= 1e-9 * max(1.0, np.abs(c).max())
    return c


def expectation(a, psi):
    """<psi|a|psi> as a complex number."""
    a = np.asarray(a, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if a.shape != (psi.size, psi.size):
        raise ValueError(f"dimension mismatch: operator {a.shape}, state {psi.shape}")
    return complex(np.vdot(psi, a @ psi))


def partial_trace(rho, dims, keep="I"):
    """Reduced density matrix of the ``keep`` subsystem of ``rho``.

    Parameters
    ----------
    rho : (n_I*n_II, n_I*n_II) array
    dims : tuple of int
        ``(n_I, n_II)``.
    keep : {'I', 'II'}
    """
    rho = np.asarray(rho, dtype=complex)
    n1, n2 = (int(d) for d in dims)
    if rho.shape != (n1 * n2, n1 * n2):
        raise ValueError(
            f"dimension mismatch: rho has shape {rho.shape}, dims ({n1}, {n2}) "
            f"require ({n1 * n2}, {n1 * n2})")
    r = rho.reshape(n1, n2, n1, n2)
    if subsystem_index(keep) == 0:
        return np.einsum("abcb->ac", r)
    return np.einsum("abad->bd", r)


def reduced_from_state(psi, dims, keep="I"):
    """Reduced density matrix of a pure global state without forming |psi><psi|."""
    n1, n2 = dims
    psi = np.asarray(psi, dtype=complex)
    if psi.size != n1 * n2:
        raise ValueError(f"dimension mismatch: state of length {psi.size}, dims ({n1}, {n2})")
    m = psi.reshape(n1, n2)
    if subsystem_index(keep) == 0:
        return m @ m.conj().T
    return m.T @ m.conj()


def purity(rho):
    rho = np.asarray(rho, dtype=complex)
    # Tr(rho^2) = sum |rho_ab|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def schmidt_weights(psi, dims):
    n1, n2 = dims
    s = np.linalg.svd(np.asarray(psi, dtype=complex).reshape(n1, n2), compute_uv=False)
    return s ** 2


def propagator(h, dt):
    """U = exp(-i h dt) from the eigendecomposition of Hermitian ``h``."""
    h = as_operator(h, "Hamiltonian")
    if not is_hermitian(h):
        raise ValueError("propagator requires a Hermitian generator")
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * dt)) @ evecs.conj().T


def unitarity_error(u):
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def random_hermitian(n, rng, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


def random_state(n, rng):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def random_density(n, rng, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


# Standard single-qubit and boson operators. Spin index 0 is sigma_z = +1.

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SPIN_UP = np.array([1, 0], dtype=complex)
SPIN_DOWN = np.array([0, 1], dtype=complex)


def destroy(n_cut):
    """Truncated annihilation operator on Fock levels 0..n_cut-1."""
    return np.diag(np.sqrt(np.arange(1, n_cut)), 1).astype(complex)


def number_op(n_cut):
    return np.diag(np.arange(n_cut)).astype(complex)


def bloch_vector(rho):
    """(<sx>, <sy>, <sz>) of a qubit density matrix."""
    return tuple(float(np.trace(rho @ s).real) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
