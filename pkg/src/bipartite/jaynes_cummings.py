"""Jaynes-Cummings model in the rotating wave approximation.

    H = (B/2) sigma_z (x) 1 + omega (a^dag a + 1/2) + gamma (sigma^- (x) a^dag + sigma^+ (x) a)

Subsystem I is the spin, subsystem II the truncated field mode. ``B`` is the
Zeeman energy (the product B g mu); resonance means B = omega.

Spin labelling: index 0 is spin up (sigma_z = +1), index 1 spin down. The
dressed pairs couple |down, n> with |up, n-1>, so the initial spin state of
the coherent-field benchmark is spin *down*, the ground state of the bare
spin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .mean_field import (
    HamiltonianSplit,
    ProductState,
    ValidityError,
    effective_hamiltonian,
    evolve_exact,
    evolve_mean_field,
    trajectory_points,
)
from .operator_core import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SPIN_DOWN,
    SPIN_UP,
    destroy,
    number_op,
    propagator,
    purity,
    reduced_from_state,
)

RESONANCE_TOL = 1e-12
LEAKAGE_TOL = 1e-10
TOP_LEVEL_POPULATION_TOL = 1e-8
BLOCH_NORM_TOL = 1e-9


class TruncationError(ValidityError):
    pass


def min_fock_cutoff(alpha):
    a = abs(alpha)
    return math.ceil(a ** 2 + 6 * a + 10)


@dataclass(frozen=True)
class JCParams:
    omega: float = 1.0
    gamma: float = 0.05
    coherent_alpha: complex = 6.0
    n_cut: int | None = None
    b_field_energy: float | None = None

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma!r}")
        if self.b_field_energy is None:
            object.__setattr__(self, "b_field_energy", float(self.omega))
        need = min_fock_cutoff(self.coherent_alpha)
        if self.n_cut is None:
            object.__setattr__(self, "n_cut", need)
        elif self.n_cut < need:
            raise TruncationError(
                f"truncation leakage: n_cut = {self.n_cut} is below ceil(|alpha|^2 + 6|alpha| + 10) = {need} "
                f"for alpha = {self.coherent_alpha}")

    @property
    def resonant(self):
        return abs(self.b_field_energy - self.omega) <= RESONANCE_TOL


@dataclass(frozen=True, eq=False)
class CoherentState:
    alpha: complex
    amplitudes: np.ndarray  # truncated, not renormalized

    @property
    def leakage(self):
        return float(1.0 - np.sum(np.abs(self.amplitudes) ** 2))

    def state(self):
        return self.amplitudes / np.linalg.norm(self.amplitudes)


def coherent_state(alpha, n_cut):
    """A_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n < n_cut."""
    n = np.arange(n_cut)
    r, phase = abs(alpha), np.angle(alpha)
    if r == 0:
        amps = np.zeros(n_cut, dtype=complex)
        amps[0] = 1.0
    else:
        amps = np.exp(-r ** 2 / 2 + n * math.log(r) - 0.5 * gammaln(n + 1) + 1j * n * phase)
    cs = CoherentState(complex(alpha), amps)
    if cs.leakage > LEAKAGE_TOL:
        raise TruncationError(f"truncation leakage {cs.leakage:.3g} > {LEAKAGE_TOL:g} at n_cut = {n_cut}")
    return cs


@dataclass(frozen=True, eq=False)
class DressedPair:
    n: int
    plus: np.ndarray
    minus: np.ndarray
    energy_plus: float
    energy_minus: float


def build_jc(params):
    n = params.n_cut
    a = destroy(n)
    L_I = 0.5 * params.b_field_energy * SIGMA_Z
    L_II = params.omega * (number_op(n) + 0.5 * np.eye(n))
    W = params.gamma * (np.kron(SIGMA_MINUS, a.conj().T) + np.kron(SIGMA_PLUS, a))
    return HamiltonianSplit(L_I, L_II, W)


def fock(n, n_cut):
    v = np.zeros(n_cut, dtype=complex)
    v[n] = 1.0
    return v


def _require_resonance(params, what):
    if not params.resonant:
        raise ValueError(
            f"{what} is only available at resonance (b_field_energy = omega); "
            f"got b_field_energy = {params.b_field_energy}, omega = {params.omega}")


def dressed_states(params):
    """|n+-> = (|down, n> +- |up, n-1>)/sqrt(2), energies omega n +- gamma sqrt(n), n = 1..n_cut-1."""
    _require_resonance(params, "dressed states")
    nc = params.n_cut
    pairs = []
    for n in range(1, nc):
        a = np.kron(SPIN_DOWN, fock(n, nc))
        b = np.kron(SPIN_UP, fock(n - 1, nc))
        pairs.append(DressedPair(
            n=n,
            plus=(a + b) / math.sqrt(2),
            minus=(a - b) / math.sqrt(2),
            energy_plus=params.omega * n + params.gamma * math.sqrt(n),
            energy_minus=params.omega * n - params.gamma * math.sqrt(n),
        ))
    return pairs


def initial_state(params):
    """Coherent field with the spin in its ground (down) state."""
    return ProductState(SPIN_DOWN.copy(), coherent_state(params.coherent_alpha, params.n_cut).state())


def bloch_series(params, t):
    """Closed-form spin Bloch vector for the coherent-field initial state.

    With X_n = conj(A_n) A_{n+1} exp(-i omega t) and
    B_n = sin(gamma (sqrt(n) + sqrt(n+1)) t) - sin(gamma (sqrt(n) - sqrt(n+1)) t):

        sx = sum_n Im(X_n) B_n,  sy = sum_n Re(X_n) B_n,
        sz = -sum_n |A_n|^2 cos(2 gamma sqrt(n) t).
    """
    _require_resonance(params, "the Bloch series")
    A = coherent_state(params.coherent_alpha, params.n_cut).state()
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    g = params.gamma
    n = np.arange(params.n_cut)
    sn = np.sqrt(n)
    sz = -np.sum(np.abs(A) ** 2 * np.cos(2 * g * sn * tt), axis=-1)
    x = (A[:-1].conj() * A[1:]) * np.exp(-1j * params.omega * tt)
    b = np.sin(g * (sn[:-1] + sn[1:]) * tt) - np.sin(g * (sn[:-1] - sn[1:]) * tt)
    sx = np.sum(x.imag * b, axis=-1)
    sy = np.sum(x.real * b, axis=-1)
    return sx, sy, sz


def purity_from_bloch(sx, sy, sz):
    r2 = sx ** 2 + sy ** 2 + sz ** 2
    if np.any(np.sqrt(r2) > 1 + BLOCH_NORM_TOL):
        raise ValueError(f"unphysical Bloch vector of length {np.sqrt(np.max(r2))!r}")
    return 0.5 * (1 + r2)


def short_time_law(gamma, t):
    """Predicted short-time spin purity 1 - gamma^2 t^2."""
    return 1.0 - (gamma * np.asarray(t)) ** 2


def semiclassical_drive(params, t):
    """Spin Hamiltonian in a classical field: (B/2) sz + gamma |alpha| (cos(wt - phi) sx + sin(wt - phi) sy).

    phi = arg(alpha). This is <alpha(t)| W |alpha(t)> for the freely rotating
    coherent amplitude alpha(t) = alpha exp(-i omega t).
    """
    r, phi = abs(params.coherent_alpha), np.angle(params.coherent_alpha)
    arg = params.omega * t - phi
    return (0.5 * params.b_field_energy * SIGMA_Z
            + params.gamma * r * (math.cos(arg) * SIGMA_X + math.sin(arg) * SIGMA_Y))


def free_field_state(params, t):
    cs = coherent_state(params.coherent_alpha, params.n_cut).state()
    L_II = params.omega * (number_op(params.n_cut) + 0.5 * np.eye(params.n_cut))
    return propagator(L_II, t) @ cs


def semiclassical_drive_mismatch(params, times):
    """Max |semiclassical_drive - effective spin Hamiltonian on the free coherent field| over ``times``."""
    split = build_jc(params)
    return max(
        float(np.max(np.abs(semiclassical_drive(params, t)
                            - effective_hamiltonian(split, free_field_state(params, t), "I"))))
        for t in times)


def top_level_population(psi, n_cut, levels=3):
    m = np.asarray(psi).reshape(2, n_cut)
    return float(np.sum(np.abs(m[:, -levels:]) ** 2))


@dataclass
class JCBenchmark:
    params: JCParams
    times: np.ndarray
    exact: np.ndarray
    mean_field: list
    points: list
    diagnostics: dict = field(default_factory=dict)

    def purity_law_rel_err(self, window=(0.05, 0.2)):
        g = self.params.gamma
        if g == 0:
            return None
        P = np.array([p.P for p in self.points])
        gt = g * self.times
        sel = (gt >= window[0] - 1e-12) & (gt <= window[1] + 1e-12)
        if not sel.any():
            return None
        law = gt[sel] ** 2
        return float(np.max(np.abs((1 - P[sel]) - law) / law))

    def summary(self):
        P = np.array([p.P for p in self.points])
        F = np.array([p.fidelity_sq for p in self.points])
        gap = np.abs(F - np.sqrt(P))
        window = ((1 - P) >= 1e-4) & ((1 - P) <= 1e-2)
        return {
            "max_fidelity_purity_gap": float(gap.max()),
            "fidelity_purity_ratio_max": float(np.max(gap[window] / (1 - P[window]))) if window.any() else None,
            "purity_law_max_rel_err": self.purity_law_rel_err(),
            **self.diagnostics,
        }


def run_benchmark(params, t_max, dt, gauge="fixed"):
    """Exact and mean-field JC runs from the coherent-field initial state."""
    split = build_jc(params)
    init = initial_state(params)
    exact = evolve_exact(split, init, t_max, dt)
    mf = evolve_mean_field(split, init, t_max, dt, gauge)
    times = dt * np.arange(len(mf))
    pts = trajectory_points(split, times, exact, mf)
    top = max(top_level_population(psi, params.n_cut) for psi in exact)
    sym = max(abs(purity(reduced_from_state(psi, split.dims, "I"))
                  - purity(reduced_from_state(psi, split.dims, "II"))) for psi in exact[:: max(1, len(exact) // 200)])
    drift = max(max(abs(m.norm_I - 1), abs(m.norm_II - 1)) for m in mf)
    bench = JCBenchmark(params, times, exact, mf, pts, {
        "top_level_population_max": top,
        "purity_symmetry_max": sym,
        "mean_field_norm_drift_max": drift,
    })
    if top > TOP_LEVEL_POPULATION_TOL:
        raise TruncationError(
            f"truncation leakage: population {top:.3g} in the top 3 Fock levels exceeds "
            f"{TOP_LEVEL_POPULATION_TOL:g}; increase n_cut")
    return bench
