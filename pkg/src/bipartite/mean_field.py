"""Factorization (mean-field) approximation and its error diagnostics.

Each subsystem is propagated under its local Hamiltonian plus the partial
expectation of the interaction in the partner's current state:

    i d/dt phi_I  = (L_I  + <phi_II|W|phi_II>) phi_I
    i d/dt phi_II = (L_II + <phi_I|W|phi_I>) phi_II

(``gauge="fixed"``). ``gauge="raw"`` additionally keeps the c-number terms
<phi_II|L_II|phi_II> and <phi_I|L_I|phi_I>, which only rotate global phases.

The exact solution is obtained by propagating the full state with the
spectral propagator of H = L_I (x) 1 + 1 (x) L_II + W.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .operator_core import (
    as_operator,
    as_state,
    bloch_vector,
    is_hermitian,
    ket_product,
    propagator,
    purity,
    reduced_from_state,
    subsystem_index,
)
from .su_basis import expand

GAUGES = ("fixed", "raw")
STEP_HEURISTIC = 0.1
NORM_DRIFT_ABORT = 1e-6
TRAJECTORY_COLUMNS = ["t", "P", "beta", "fidelity_sq", "sx", "sy", "sz", "norm_I", "norm_II"]


class ValidityError(RuntimeError):
    """A run violated a numerical-validity condition (exit code 2 in the CLI)."""


class NormDriftError(ValidityError):
    pass


@dataclass(frozen=True, eq=False)
class HamiltonianSplit:
    L_I: np.ndarray
    L_II: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        for name in ("L_I", "L_II", "W"):
            a = as_operator(getattr(self, name), name)
            if not is_hermitian(a):
                raise ValueError(f"{name} is not Hermitian")
            object.__setattr__(self, name, a)
        d = self.L_I.shape[0] * self.L_II.shape[0]
        if self.W.shape != (d, d):
            raise ValueError(
                f"dimension mismatch: W has shape {self.W.shape}, local dims "
                f"({self.L_I.shape[0]}, {self.L_II.shape[0]}) require ({d}, {d})")

    @property
    def dims(self):
        return (self.L_I.shape[0], self.L_II.shape[0])

    def full(self):
        n1, n2 = self.dims
        return np.kron(self.L_I, np.eye(n2)) + np.kron(np.eye(n1), self.L_II) + self.W

    def norms(self):
        return tuple(float(np.linalg.norm(a, 2)) for a in (self.L_I, self.L_II, self.W))


@dataclass(frozen=True, eq=False)
class ProductState:
    phi_I: np.ndarray
    phi_II: np.ndarray
    t: float = 0.0

    def full(self):
        return ket_product(self.phi_I, self.phi_II)

    @property
    def norm_I(self):
        return float(np.linalg.norm(self.phi_I))

    @property
    def norm_II(self):
        return float(np.linalg.norm(self.phi_II))


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    basis: object
    M: np.ndarray


@dataclass
class TrajectoryPoint:
    t: float
    P: float
    beta: float
    fidelity_sq: float | None = None
    bloch: tuple | None = None
    norm_I: float | None = None
    norm_II: float | None = None

    def row(self):
        sx, sy, sz = self.bloch if self.bloch is not None else (None, None, None)
        vals = [self.t, self.P, self.beta, self.fidelity_sq, sx, sy, sz, self.norm_I, self.norm_II]
        return ["" if v is None else format(float(v), ".17g") for v in vals]


def _partial_expectation(W, dims, state, target):
    """<state|W|state> over the subsystem other than ``target``; an operator on ``target``."""
    n1, n2 = dims
    w4 = W.reshape(n1, n2, n1, n2)
    if target == 0:
        return np.einsum("b,abcd,d->ac", state.conj(), w4, state)
    return np.einsum("a,abcd,c->bd", state.conj(), w4, state)


def effective_hamiltonian(split, other_state, target="I"):
    """Local Hamiltonian of ``target`` plus the interaction averaged over ``other_state``."""
    k = subsystem_index(target)
    other_state = as_state(other_state, "partner state", tol=1e-8)
    local = split.L_I if k == 0 else split.L_II
    if other_state.size != split.dims[1 - k]:
        raise ValueError(f"partner state has length {other_state.size}, expected {split.dims[1 - k]}")
    h = local + _partial_expectation(split.W, split.dims, other_state, k)
    return (h + h.conj().T) / 2


def _check_gauge(gauge):
    if gauge == "lorentz-like":
        return "fixed"
    if gauge not in GAUGES:
        raise ValueError(f"gauge must be one of {GAUGES}, got {gauge!r}")
    return gauge


def _n_steps(t_max, dt):
    if dt <= 0 or t_max < 0:
        raise ValueError(f"need dt > 0 and t_max >= 0, got dt={dt!r}, t_max={t_max!r}")
    return int(round(t_max / dt))


def check_step_size(split, dt):
    worst = dt * max(split.norms())
    if worst > STEP_HEURISTIC:
        raise ValueError(
            f"step too large: dt * max(|L_I|, |L_II|, |W|) = {worst:.3g} > {STEP_HEURISTIC}")


def _integrate_frames(split, f_I, f_II, t_max, dt, gauge):
    """RK4 for the mean-field pair; columns of f_I/f_II co-move with column 0's generators.

    Column 0 of each frame is the mean-field state itself. Returns the frames at
    every step as arrays of shape (n_steps+1, n, k).
    """
    gauge = _check_gauge(gauge)
    check_step_size(split, dt)
    n = _n_steps(t_max, dt)
    dims = split.dims
    W, L1, L2 = split.W, split.L_I, split.L_II

    def rhs(a, b):
        pa, pb = a[:, 0], b[:, 0]
        h1 = L1 + _partial_expectation(W, dims, pb, 0)
        h2 = L2 + _partial_expectation(W, dims, pa, 1)
        if gauge == "raw":
            h1 = h1 + np.vdot(pb, L2 @ pb) * np.eye(dims[0])
            h2 = h2 + np.vdot(pa, L1 @ pa) * np.eye(dims[1])
        return -1j * (h1 @ a), -1j * (h2 @ b)

    out_I = np.empty((n + 1,) + f_I.shape, dtype=complex)
    out_II = np.empty((n + 1,) + f_II.shape, dtype=complex)
    a, b = f_I.astype(complex), f_II.astype(complex)
    out_I[0], out_II[0] = a, b
    for k in range(1, n + 1):
        k1 = rhs(a, b)
        k2 = rhs(a + 0.5 * dt * k1[0], b + 0.5 * dt * k1[1])
        k3 = rhs(a + 0.5 * dt * k2[0], b + 0.5 * dt * k2[1])
        k4 = rhs(a + dt * k3[0], b + dt * k3[1])
        a = a + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        b = b + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        drift = max(abs(np.linalg.norm(a[:, 0]) - 1), abs(np.linalg.norm(b[:, 0]) - 1))
        if drift > NORM_DRIFT_ABORT:
            raise NormDriftError(
                f"mean-field norm drift {drift:.3g} exceeds {NORM_DRIFT_ABORT:g} at t = {k * dt:.6g}; "
                f"reduce dt")
        out_I[k], out_II[k] = a, b
    return out_I, out_II


def evolve_mean_field(split, init, t_max, dt, gauge="fixed"):
    """Product-state trajectory sampled at every step ``k * dt``."""
    phi_I = as_state(init.phi_I, "phi_I")
    phi_II = as_state(init.phi_II, "phi_II")
    if (phi_I.size, phi_II.size) != split.dims:
        raise ValueError(f"initial state dims {(phi_I.size, phi_II.size)} != {split.dims}")
    out_I, out_II = _integrate_frames(split, phi_I[:, None], phi_II[:, None], t_max, dt, gauge)
    t0 = init.t
    return [ProductState(a[:, 0], b[:, 0], t0 + k * dt) for k, (a, b) in enumerate(zip(out_I, out_II))]


def evolve_exact(split, init, t_max, dt):
    """Full-space states at times ``k * dt`` as an (n_steps+1, n_I*n_II) array."""
    psi = init.full() if isinstance(init, ProductState) else np.asarray(init, dtype=complex)
    psi = as_state(psi, "initial state")
    n1, n2 = split.dims
    if psi.size != n1 * n2:
        raise ValueError(f"dimension mismatch: state of length {psi.size}, dims ({n1}, {n2})")
    n = _n_steps(t_max, dt)
    u = propagator(split.full(), dt)
    out = np.empty((n + 1, psi.size), dtype=complex)
    out[0] = psi
    for k in range(1, n + 1):
        psi = u @ psi
        out[k] = psi
    return out


def correlation_beta(psi, basis=None):
    """Correlation tensor M_ij = q_ij - sqrt(n_I n_II) q_i0 q_0j and beta = sum M_ij**2."""
    psi = as_state(psi)
    if basis is None:
        raise ValueError("correlation_beta needs the bipartite basis (dims are ambiguous otherwise)")
    q = expand(np.outer(psi, psi.conj()), basis).matrix()
    m = q - math.sqrt(basis.dim) * np.outer(q[:, 0], q[0, :])
    return CorrelationTensor(basis, m), float(np.sum(m ** 2))


def beta_from_state(psi, dims):
    """beta as ||rho - rho_I (x) rho_II||_F**2 for pure rho; needs no operator basis."""
    psi = np.asarray(psi, dtype=complex)
    n1, n2 = dims
    m = psi.reshape(n1, n2)
    r1 = m @ m.conj().T
    r2 = m.T @ m.conj()
    overlap = np.vdot(m, r1 @ m @ r2.T).real
    return float(np.vdot(psi, psi).real ** 2 - 2 * overlap + purity(r1) * purity(r2))


def fidelity_sq(psi, phi):
    phi_full = phi.full() if isinstance(phi, ProductState) else np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != phi_full.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {phi_full.shape}")
    return float(abs(np.vdot(psi, phi_full)) ** 2)


def product_purity(ps):
    """Purity of subsystem I for the normalized embedding of a product state."""
    v = ps.full()
    v = v / np.linalg.norm(v)
    return purity(reduced_from_state(v, (ps.phi_I.size, ps.phi_II.size), "I"))


@dataclass
class MeanFieldFrames:
    """Mean-field trajectory of branch (0, 0) with co-moving orthonormal local frames.

    ``frames_I[k][:, i]`` is |phi_i^I(t_k)>; column 0 is the mean-field state.
    """

    split: HamiltonianSplit
    times: np.ndarray
    frames_I: np.ndarray
    frames_II: np.ndarray

    def product(self, k):
        return ProductState(self.frames_I[k][:, 0], self.frames_II[k][:, 0], self.times[k])


def _complete_basis(phi):
    n = phi.size
    q, _ = np.linalg.qr(np.column_stack([phi, np.eye(n, dtype=complex)]))
    q = q[:, :n]
    q[:, 0] *= np.vdot(q[:, 0], phi) / abs(np.vdot(q[:, 0], phi))
    return q


def _check_seed(frame, phi, name):
    frame = np.asarray(frame, dtype=complex)
    n = phi.size
    if frame.shape != (n, n) or np.max(np.abs(frame.conj().T @ frame - np.eye(n))) > 1e-10:
        raise ValueError(f"{name} seed family is not a complete orthonormal set")
    if np.max(np.abs(frame[:, 0] - phi)) > 1e-10:
        raise ValueError(f"{name} seed family must start with the initial state")
    return frame


def mean_field_frames(split, init, t_max, dt, seeds_I=None, seeds_II=None):
    phi_I = as_state(init.phi_I, "phi_I")
    phi_II = as_state(init.phi_II, "phi_II")
    f1 = _complete_basis(phi_I) if seeds_I is None else _check_seed(seeds_I, phi_I, "subsystem I")
    f2 = _complete_basis(phi_II) if seeds_II is None else _check_seed(seeds_II, phi_II, "subsystem II")
    out_I, out_II = _integrate_frames(split, f1, f2, t_max, dt, "fixed")
    times = init.t + dt * np.arange(out_I.shape[0])
    return MeanFieldFrames(split, times, out_I, out_II)


def phase_shift_alpha(split, ps):
    """Constant energy shift that makes <phi_00|V|phi_00> vanish (V = H - H_mean_field)."""
    return -np.vdot(ps.full(), split.W @ ps.full())


def perturbative_deviation(split, frames, t_index=None):
    """First-order deviation amplitudes theta_ij(t) of the exact state from branch (0, 0).

    theta_ij(t) = -i int_0^t <phi_ij(t')|V(t')|phi_00(t')> dt', integrated with the
    trapezoidal rule on the frame sampling grid. Returns an array (T, n_I, n_II), or
    a single (n_I, n_II) slice if ``t_index`` is given.
    """
    n1, n2 = split.dims
    integrand = np.empty((len(frames.times), n1, n2), dtype=complex)
    for k in range(len(frames.times)):
        f1, f2 = frames.frames_I[k], frames.frames_II[k]
        a, b = f1[:, 0], f2[:, 0]
        phi = np.kron(a, b)
        w1 = _partial_expectation(split.W, split.dims, b, 0)
        w2 = _partial_expectation(split.W, split.dims, a, 1)
        alpha = phase_shift_alpha(split, ProductState(a, b))
        v_phi = (split.W @ phi - np.kron(w1 @ a, b) - np.kron(a, w2 @ b) - alpha * phi).reshape(n1, n2)
        integrand[k] = -1j * (f1.conj().T @ v_phi @ f2.conj())
    theta = cumulative_trapezoid(integrand, frames.times, axis=0, initial=0)
    return theta if t_index is None else theta[t_index]


def trajectory_points(split, times, exact_states, mf_states=None):
    dims = split.dims
    pts = []
    for k, t in enumerate(times):
        psi = exact_states[k]
        r1 = reduced_from_state(psi, dims, "I")
        mf = mf_states[k] if mf_states is not None else None
        pts.append(TrajectoryPoint(
            t=float(t),
            P=purity(r1),
            beta=beta_from_state(psi, dims),
            fidelity_sq=fidelity_sq(psi, mf) if mf is not None else None,
            bloch=bloch_vector(r1) if dims[0] == 2 else None,
            norm_I=mf.norm_I if mf is not None else None,
            norm_II=mf.norm_II if mf is not None else None,
        ))
    return pts


def write_trajectory_csv(path, points):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for p in points:
            w.writerow(p.row())


def read_trajectory_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) if v != "" else math.nan for v in r] for r in reader]
    return header, np.array(rows)


@dataclass
class Comparison:
    """Exact and mean-field runs from the same product state, sampled on one grid."""

    split: HamiltonianSplit
    times: np.ndarray
    exact: np.ndarray
    mean_field: list
    points: list = field(default_factory=list)

    def summary(self):
        P = np.array([p.P for p in self.points])
        F = np.array([p.fidelity_sq for p in self.points])
        gap = np.abs(F - np.sqrt(P))
        window = ((1 - P) >= 1e-4) & ((1 - P) <= 1e-2)
        ratio = gap[window] / (1 - P[window]) if window.any() else np.array([])
        return {
            "max_fidelity_purity_gap": float(gap.max()),
            "fidelity_purity_ratio_max": float(ratio.max()) if ratio.size else None,
            "final_P": float(P[-1]),
            "final_fidelity_sq": float(F[-1]),
            "max_beta": float(max(p.beta for p in self.points)),
            "max_norm_drift": float(max(max(abs(m.norm_I - 1), abs(m.norm_II - 1)) for m in self.mean_field)),
        }


def run_comparison(split, init, t_max, dt, gauge="fixed"):
    mf = evolve_mean_field(split, init, t_max, dt, gauge)
    exact = evolve_exact(split, init, t_max, dt)
    times = init.t + dt * np.arange(len(mf))
    cmp = Comparison(split, times, exact, mf)
    cmp.points = trajectory_points(split, times, exact, mf)
    return cmp
