"""Command-line front end.

Exit codes: 0 success, 1 usage / input / I/O problems, 2 a numerical-validity
violation (truncation leakage, norm drift, or an interacting Hamiltonian whose
purity witness vanishes).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import jaynes_cummings as jc
from .coefficient_dynamics import (
    build_quasi_hamiltonian,
    interaction_norm,
    purity_projector,
    random_bipartite_hamiltonian,
    theorem_b_witness,
)
from .config import CompareConfig, ConfigError, JCConfig, TheoremBConfig, read_matrix, read_preset, read_vector
from .mean_field import (
    HamiltonianSplit,
    ProductState,
    ValidityError,
    product_purity,
    run_comparison,
    write_trajectory_csv,
)
from .operator_core import bloch_vector
from .su_basis import bipartite_basis

log = logging.getLogger("bipartite")

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2
WITNESS_ZERO = 1e-12
INTERACTION_THRESHOLD = 1e-6

UNITS_NOTE = "Units: hbar = 1; omega, gamma and all energies are angular frequencies."


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x):
    return format(float(x), ".17g")


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_jc(cfg):
    cfg.validate()
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    params = jc.JCParams(omega=cfg.omega, gamma=cfg.gamma, coherent_alpha=cfg.alpha, n_cut=cfg.n_cut)
    bench = jc.run_benchmark(params, cfg.t_max, cfg.dt, cfg.gauge)
    write_trajectory_csv(out / "trajectory.csv", bench.points)
    summary = bench.summary()
    summary.update(n_cut=params.n_cut, rows=len(bench.points), runtime_s=time.perf_counter() - start)
    _write_json(out / "summary.json", summary)
    print(f"jc: rows={len(bench.points)} max|F^2 - sqrt(P)|={summary['max_fidelity_purity_gap']:.3g} "
          f"max rel |(1-P) - (gamma t)^2|={summary['purity_law_max_rel_err']}")
    return EXIT_OK


def _witness_trial(args):
    dims, H = args
    hq = build_quasi_hamiltonian(H, bipartite_basis(*dims))
    return interaction_norm(H, dims), theorem_b_witness(hq, purity_projector(hq.basis))


def theorem_b_hamiltonians(cfg):
    """Seeded random Hamiltonians: ``trials`` interacting ones, then ``interaction_free`` local ones."""
    dims = (cfg.n_I, cfg.n_II)
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.trials + cfg.interaction_free)
    hs = []
    for k, ss in enumerate(seqs):
        rng = np.random.default_rng(ss)
        hs.append(random_bipartite_hamiltonian(dims, rng, coupling=0.0 if k >= cfg.trials else 1.0))
    return hs


def cmd_theorem_b(cfg):
    cfg.validate()
    dims = (cfg.n_I, cfg.n_II)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(dims, H) for H in theorem_b_hamiltonians(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_witness_trial, jobs))
    else:
        results = [_witness_trial(j) for j in jobs]
    counterexamples = 0
    with open(out / "theorem_b.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "n_I", "n_II", "W_norm", "witness"])
        for k, (wn, wit) in enumerate(results):
            w.writerow([k, cfg.n_I, cfg.n_II, _fmt(wn), _fmt(wit)])
            if wn > INTERACTION_THRESHOLD and wit <= WITNESS_ZERO:
                counterexamples += 1
                log.error("trial %d: interaction norm %.3g but witness %.3g", k, wn, wit)
    print(f"theorem-b: {len(results)} trials on {dims}, {counterexamples} counterexamples")
    return EXIT_INVALID if counterexamples else EXIT_OK


def _load_split(cfg):
    try:
        split = HamiltonianSplit(read_matrix(cfg.l1), read_matrix(cfg.l2), read_matrix(cfg.w))
        phi_I, phi_II = read_vector(cfg.init_i), read_vector(cfg.init_ii)
    except OSError as exc:
        raise ConfigError(f"cannot read operator file: {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for name, v in (("init-i", phi_I), ("init-ii", phi_II)):
        if np.linalg.norm(v) == 0:
            raise ConfigError("initial state is the zero vector", field=name)
    return split, ProductState(phi_I / np.linalg.norm(phi_I), phi_II / np.linalg.norm(phi_II))


def cmd_compare(cfg):
    cfg.validate()
    split, init = _load_split(cfg)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    cmp = run_comparison(split, init, cfg.t_max, cfg.dt, cfg.gauge)
    write_trajectory_csv(out / "trajectory.csv", cmp.points)
    qubit = split.dims[0] == 2
    with open(out / "compare.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "P_exact", "sqrt_P", "fidelity_sq", "beta", "P_mean_field",
                    "sx_exact", "sy_exact", "sz_exact", "sx_mf", "sy_mf", "sz_mf"])
        for p, m in zip(cmp.points, cmp.mean_field):
            if qubit:
                phi = m.phi_I / np.linalg.norm(m.phi_I)
                mf_bloch = bloch_vector(np.outer(phi, phi.conj()))
                ex_bloch = p.bloch
            else:
                mf_bloch = ex_bloch = (None,) * 3
            vals = [p.t, p.P, np.sqrt(p.P), p.fidelity_sq, p.beta, product_purity(m), *ex_bloch, *mf_bloch]
            w.writerow(["" if v is None else _fmt(v) for v in vals])
    summary = cmp.summary()
    _write_json(out / "summary.json", summary)
    print(f"compare: final P={summary['final_P']:.6g} final F^2={summary['final_fidelity_sq']:.6g} "
          f"max|F^2 - sqrt(P)|={summary['max_fidelity_purity_gap']:.3g}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="bipartite", description="Exact vs factorized dynamics of bipartite quantum systems.",
                     epilog=UNITS_NOTE)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, dt, t_max):
        p.add_argument("--output", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--dt", type=float, default=dt, help="time step and sampling interval")
        p.add_argument("--t-max", type=float, default=t_max)
        p.add_argument("--gauge", choices=("raw", "fixed"), default="fixed",
                       help="'fixed' drops the local-energy phase terms of the mean-field equations")

    p = sub.add_parser("jc", help="Jaynes-Cummings benchmark: exact vs mean-field from a coherent field",
                       epilog=UNITS_NOTE)
    common(p, None, None)
    p.add_argument("--preset", help="key = value file with omega, gamma, alpha, n_cut, t_max, dt")
    p.add_argument("--omega", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float, help="real coherent-state amplitude")
    p.add_argument("--n-cut", type=int, help="Fock cutoff (default ceil(a^2 + 6a + 10))")

    p = sub.add_parser("theorem-b", help="scan the purity-commutator witness over random Hamiltonians",
                       epilog=UNITS_NOTE)
    common(p, 0.01, 1.0)
    p.add_argument("--n-i", type=int, default=2)
    p.add_argument("--n-ii", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--interaction-free", type=int, default=0,
                   help="append this many interaction-free Hamiltonians")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("compare", help="exact vs mean-field for user-supplied L_I, L_II, W",
                       epilog=UNITS_NOTE + " Matrix files: one row per line, entries like 0.5-1j.")
    common(p, 0.01, 1.0)
    for flag in ("--l1", "--l2", "--w", "--init-i", "--init-ii"):
        p.add_argument(flag, required=True)
    return parser


def _config_from_args(args):
    if args.command == "jc":
        cfg = JCConfig(gauge=args.gauge, output=args.output)
        if args.preset:
            for k, v in read_preset(args.preset).items():
                setattr(cfg, k, v)
        # explicit flags override the preset
        for k in ("omega", "gamma", "alpha", "n_cut", "t_max", "dt"):
            if getattr(args, k) is not None:
                setattr(cfg, k, getattr(args, k))
        return cfg
    if args.command == "theorem-b":
        return TheoremBConfig(n_I=args.n_i, n_II=args.n_ii, trials=args.trials,
                              interaction_free=args.interaction_free, seed=args.seed,
                              workers=args.workers, output=args.output)
    return CompareConfig(l1=args.l1, l2=args.l2, w=args.w, init_i=args.init_i, init_ii=args.init_ii,
                         t_max=args.t_max, dt=args.dt, gauge=args.gauge, output=args.output)


COMMANDS = {"jc": cmd_jc, "theorem-b": cmd_theorem_b, "compare": cmd_compare}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return COMMANDS[args.command](cfg)
    except ValidityError as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except (ConfigError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
