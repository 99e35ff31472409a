"""Linear dynamics of the real coefficient vector and the purity witness.

With rho = sum_s q_s Q_s the von Neumann equation becomes

    i d/dt q_m = sum_j H_mj q_j,    H_mj = Tr(H [Q_j, Q_m]),

a Schroedinger-type equation in coefficient space. The scaled projector
P = n_II * sum_i |i0><i0| has <q|P|q> equal to the subsystem purity, so the
purity is conserved for every initial state iff [P, H] = 0.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .operator_core import HERMITICITY_TOL, as_operator, is_hermitian, partial_trace, random_hermitian
from .su_basis import BipartiteBasis, CoefficientVector

REALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuasiHamiltonian:
    basis: BipartiteBasis
    h: np.ndarray  # complex Hermitian, purely imaginary

    @functools.cached_property
    def spectrum(self):
        return np.linalg.eigh(self.h)


@dataclass(frozen=True, eq=False)
class PurityProjector:
    basis: BipartiteBasis
    indicator: np.ndarray  # 1.0 on (i, 0) components
    scale: float           # n_II

    @property
    def matrix(self):
        return self.scale * np.diag(self.indicator)

    def expectation(self, q):
        return float(self.scale * np.sum(self.indicator * q.q ** 2))


@dataclass(frozen=True, eq=False)
class BlockSplit:
    local: np.ndarray        # L^I: local-I x local-I block
    rest: np.ndarray         # R: rest x rest block
    interaction: np.ndarray  # W: the two off-diagonal blocks
    mask: np.ndarray         # boolean indicator of local-I indices


def superoperator_matrix(basis, h):
    """Coefficient-space matrix of X -> [H, X] in the product basis, i.e. the quasi-Hamiltonian."""
    d = basis.dim
    # row-major vec: vec(HX) = (H (x) 1) vec X, vec(XH) = (1 (x) H^T) vec X
    k = np.kron(h, np.eye(d)) - np.kron(np.eye(d), h.T)
    v = basis.ops.reshape(basis.size, d * d).T
    return v.conj().T @ k @ v


def build_quasi_hamiltonian(H, basis):
    H = as_operator(H, "Hamiltonian")
    if H.shape != (basis.dim, basis.dim):
        raise ValueError(f"dimension mismatch: H has shape {H.shape}, basis dims {basis.dims}")
    if not is_hermitian(H):
        raise ValueError("Hamiltonian is not Hermitian")
    return QuasiHamiltonian(basis, superoperator_matrix(basis, H))


def quasi_hamiltonian_by_traces(H, basis):
    """Entry-by-entry evaluation of Tr(H [Q_j, Q_m]); slow, used as a cross-check."""
    ops = basis.ops
    hq = np.empty((basis.size, basis.size), dtype=complex)
    for m in range(basis.size):
        for j in range(basis.size):
            c = ops[j] @ ops[m] - ops[m] @ ops[j]
            hq[m, j] = np.trace(H @ c)
    return hq


def propagate_coefficients(hq, q0, t):
    """q(t) = exp(-i H t) q(0) by spectral decomposition of the quasi-Hamiltonian."""
    evals, evecs = hq.spectrum
    q = evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ q0.q))
    if np.max(np.abs(q.imag), initial=0.0) > REALITY_TOL:
        raise ArithmeticError("propagated coefficients acquired an imaginary part")
    return CoefficientVector(q0.basis, q.real.copy())


def purity_projector(basis):
    ind = np.zeros(basis.size)
    ind[basis.local_I_indices()] = 1.0
    return PurityProjector(basis, ind, float(basis.n_II))


def block_split(hq):
    mask = np.zeros(hq.basis.size, dtype=bool)
    mask[hq.basis.local_I_indices()] = True
    loc = np.outer(mask, mask)
    rest = np.outer(~mask, ~mask)
    off = ~(loc | rest)
    return BlockSplit(
        local=np.where(loc, hq.h, 0),
        rest=np.where(rest, hq.h, 0),
        interaction=np.where(off, hq.h, 0),
        mask=mask,
    )


def commutator_with_projector(p, m):
    pd = p.scale * p.indicator
    # [diag(pd), M]_ab = (pd_a - pd_b) M_ab
    return (pd[:, None] - pd[None, :]) * m


def theorem_b_witness(hq, p):
    """Frobenius norm of [P, H]; zero iff the purity is conserved for every state."""
    if p.basis is not hq.basis and p.basis.dims != hq.basis.dims:
        raise ValueError("projector and quasi-Hamiltonian refer to different bases")
    return float(np.linalg.norm(commutator_with_projector(p, hq.h)))


def local_split(H, dims):
    """Split H into L_I (x) 1 + 1 (x) L_II + W with W free of local components.

    L_I = Tr_II(H)/n_II - Tr(H)/(2 n_I n_II), symmetrically for L_II.
    """
    n1, n2 = dims
    H = as_operator(H, "Hamiltonian")
    shift = np.trace(H) / (2 * n1 * n2)
    l1 = partial_trace(H, dims, "I") / n2 - shift * np.eye(n1)
    l2 = partial_trace(H, dims, "II") / n1 - shift * np.eye(n2)
    w = H - np.kron(l1, np.eye(n2)) - np.kron(np.eye(n1), l2)
    return l1, l2, w


def interaction_norm(H, dims):
    return float(np.linalg.norm(local_split(H, dims)[2]))


def random_bipartite_hamiltonian(dims, rng, coupling=1.0):
    """Random local parts plus a random pure-interaction part of Frobenius norm ``coupling``."""
    n1, n2 = dims
    l1 = random_hermitian(n1, rng)
    l2 = random_hermitian(n2, rng)
    w = local_split(random_hermitian(n1 * n2, rng), dims)[2]
    if coupling == 0:
        w = np.zeros_like(w)
    else:
        w *= coupling / np.linalg.norm(w)
    return np.kron(l1, np.eye(n2)) + np.kron(np.eye(n1), l2) + w


def is_valid_quasi_hamiltonian(hq, tol=HERMITICITY_TOL):
    h = hq.h
    return is_hermitian(h, tol) and np.max(np.abs(h.real), initial=0.0) <= tol
