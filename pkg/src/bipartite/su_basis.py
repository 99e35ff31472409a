"""Generalized Gell-Mann bases and real coefficient vectors of bipartite states.

A density matrix on C^n_I (x) C^n_II is expanded as

    rho = sum_ij q_ij Q_i (x) Q_j,

with Q_0 = 1/sqrt(n) and Q_i = lambda_i / sqrt(2) for the SU(n) generators
lambda_i. The Q's are orthonormal under the trace inner product, so the q_ij
are real for Hermitian rho.

Generator order (fixed; coefficient files are only comparable under it):
symmetric pairs (k<l, lexicographic), antisymmetric pairs (k<l), diagonal
generators d = 1..n-1. For n = 2 this is (sigma_x, sigma_y, sigma_z).

The flat coefficient index is s = i * n_II**2 + j.
"""
from __future__ import annotations

import csv
import functools
from dataclasses import dataclass

import numpy as np

from .operator_core import as_operator, subsystem_index

IMAG_RESIDUE_TOL = 1e-9
MAX_BASIS_DIM = 64


def gell_mann(n):
    """The n**2 - 1 generalized Gell-Mann matrices as an (n**2-1, n, n) array."""
    if int(n) != n or n < 2:
        raise ValueError(f"SU(n) generators need an integer n >= 2, got {n!r}")
    n = int(n)
    pairs = [(k, l) for k in range(n) for l in range(k + 1, n)]
    mats = []
    for k, l in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[k, l] = m[l, k] = 1.0
        mats.append(m)
    for k, l in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[k, l] = -1j
        m[l, k] = 1j
        mats.append(m)
    for d in range(1, n):
        diag = np.zeros(n)
        diag[:d] = 1.0
        diag[d] = -d
        mats.append(np.diag(np.sqrt(2.0 / (d * (d + 1))) * diag).astype(complex))
    return np.array(mats)


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    n: int
    generators: np.ndarray   # (n**2 - 1, n, n)
    q_ops: np.ndarray        # (n**2, n, n); q_ops[0] = 1/sqrt(n)


def build_generators(n):
    lam = gell_mann(n)
    q0 = np.eye(n, dtype=complex)[None] / np.sqrt(n)
    return GeneratorSet(n=int(n), generators=lam, q_ops=np.concatenate([q0, lam / np.sqrt(2)]))


@dataclass(frozen=True, eq=False)
class BipartiteBasis:
    """Product operator basis Q_i (x) Q_j for a pair of subsystems."""

    n_I: int
    n_II: int
    gen_I: GeneratorSet
    gen_II: GeneratorSet

    @property
    def dims(self):
        return (self.n_I, self.n_II)

    @property
    def dim(self):
        return self.n_I * self.n_II

    @property
    def size(self):
        return self.n_I ** 2 * self.n_II ** 2

    def flat_index(self, i, j):
        return i * self.n_II ** 2 + j

    def multi_index(self, s):
        return divmod(int(s), self.n_II ** 2)

    def local_I_indices(self):
        """Flat indices of the (i, 0) components."""
        return np.arange(self.n_I ** 2) * self.n_II ** 2

    def op(self, s):
        i, j = self.multi_index(s)
        return np.kron(self.gen_I.q_ops[i], self.gen_II.q_ops[j])

    @functools.cached_property
    def ops(self):
        """All product operators as an (size, dim, dim) array (built on first use)."""
        qa, qb = self.gen_I.q_ops, self.gen_II.q_ops
        full = np.einsum("iac,jbd->ijabcd", qa, qb)
        return full.reshape(self.size, self.dim, self.dim)


@functools.lru_cache(maxsize=32)
def bipartite_basis(n_I, n_II):
    if n_I * n_II > MAX_BASIS_DIM:
        raise ValueError(
            f"coefficient-space machinery is limited to n_I*n_II <= {MAX_BASIS_DIM}, "
            f"got {n_I}*{n_II}")
    return BipartiteBasis(int(n_I), int(n_II), build_generators(n_I), build_generators(n_II))


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    basis: BipartiteBasis
    q: np.ndarray

    def matrix(self):
        """Coefficients arranged as q[i, j]."""
        return self.q.reshape(self.basis.n_I ** 2, self.basis.n_II ** 2)

    def __getitem__(self, ij):
        i, j = ij
        return self.q[self.basis.flat_index(i, j)]


def _coefficients(a, basis):
    n1, n2 = basis.dims
    a4 = a.reshape(n1, n2, n1, n2)
    # q_ij = Tr[(Q_i (x) Q_j) A], contracted factor by factor
    return np.einsum("iba,jdc,acbd->ij", basis.gen_I.q_ops, basis.gen_II.q_ops, a4).reshape(-1)


def expand(rho, basis):
    """Real coefficient vector q_s = Tr(Q_s rho) of a Hermitian operator."""
    rho = as_operator(rho)
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError(
            f"dimension mismatch: operator of shape {rho.shape} for basis dims {basis.dims}")
    q = _coefficients(rho, basis)
    if np.max(np.abs(q.imag), initial=0.0) > IMAG_RESIDUE_TOL:
        raise ValueError("operator is not Hermitian: coefficients have imaginary parts")
    return CoefficientVector(basis, q.real.copy())


def reconstruct(q):
    b = q.basis
    full = np.einsum("ij,iac,jbd->abcd", q.matrix(), b.gen_I.q_ops, b.gen_II.q_ops)
    return full.reshape(b.dim, b.dim)


def reduced_coefficients(q, subsystem="I"):
    """q_{i0} (subsystem I) or q_{0j} (subsystem II)."""
    m = q.matrix()
    return m[:, 0].copy() if subsystem_index(subsystem) == 0 else m[0, :].copy()


def reduced_density(q, subsystem="I"):
    b = q.basis
    if subsystem_index(subsystem) == 0:
        return np.sqrt(b.n_II) * np.einsum("i,iab->ab", reduced_coefficients(q, "I"), b.gen_I.q_ops)
    return np.sqrt(b.n_I) * np.einsum("j,jab->ab", reduced_coefficients(q, "II"), b.gen_II.q_ops)


def purity_from_coefficients(q, subsystem="I"):
    b = q.basis
    r = reduced_coefficients(q, subsystem)
    other = b.n_II if subsystem_index(subsystem) == 0 else b.n_I
    return float(other * np.dot(r, r))


def check_basis(basis):
    """Max deviations from trace-orthonormality and reconstruction of a random operator."""
    ops = basis.ops
    gram = np.einsum("sab,tba->st", ops, ops)
    ortho = float(np.max(np.abs(gram - np.eye(basis.size))))
    rng = np.random.default_rng(0)
    a = rng.normal(size=(basis.dim,) * 2) + 1j * rng.normal(size=(basis.dim,) * 2)
    coeffs = np.einsum("sab,ba->s", ops, a)
    back = np.einsum("s,sab->ab", coeffs, ops)
    return ortho, float(np.max(np.abs(back - a)))


def write_coefficients_csv(path, q):
    b = q.basis
    with open(path, "w", newline="") as fh:
        fh.write(f"# coefficient vector, n_I={b.n_I}, n_II={b.n_II}\n")
        fh.write("# s = i * n_II**2 + j; generator order per subsystem: "
                 "identity, symmetric pairs (k<l), antisymmetric pairs (k<l), diagonal\n")
        w = csv.writer(fh)
        w.writerow(["s", "i", "j", "value"])
        for s, v in enumerate(q.q):
            i, j = b.multi_index(s)
            w.writerow([s, i, j, format(float(v), ".17g")])


def read_coefficients_csv(path):
    header = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                for tok in line[1:].replace(",", " ").split():
                    if tok.startswith(("n_I=", "n_II=")):
                        k, v = tok.split("=")
                        header[k] = int(v)
                continue
            rows.append(line)
    reader = csv.DictReader(rows)
    values = [float(r["value"]) for r in reader]
    basis = bipartite_basis(header["n_I"], header["n_II"])
    if len(values) != basis.size:
        raise ValueError(f"expected {basis.size} coefficients, found {len(values)}")
    return CoefficientVector(basis, np.array(values))

