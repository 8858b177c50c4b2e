#!/usr/bin/env python3
"""Monte-Carlo-vs-solver cross-validation study.

Solves the stationary density with the finite-difference solver and with a
seeded Euler-Maruyama ensemble, then reports the L1 distance between the
renormalized solver field and the terminal-state histogram, plus the
agreement between the solver's retained mass and the simulated survival
fraction (two independent estimates of the same exit probability).

    python scripts/crossvalidate.py --model growth --paths 20000
    python scripts/crossvalidate.py --model logistic --estimator fleming-viot
"""

import argparse
import sys
import time

import numpy as np

from stochpop import (
    Grid,
    GrowthParams,
    LogisticParams,
    PathConfig,
    RngStream,
    SolverConfig,
    empirical_density,
    evolve_fpe,
    l1_distance,
    make_coefficients,
    simulate_ensemble,
    simulate_qsd_ensemble,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", choices=["growth", "logistic"], default="growth")
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--epsilon", type=float, default=None)
    parser.add_argument("--paths", type=int, default=20000)
    parser.add_argument("--t-end", type=float, default=50.0)
    parser.add_argument("--dt", type=float, default=1e-3)
    parser.add_argument("--n-cells", type=int, default=256)
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument(
        "--estimator",
        choices=["independent", "fleming-viot"],
        default="independent",
        help="fleming-viot resamples exited paths (use when nothing survives)",
    )
    args = parser.parse_args()

    if args.model == "growth":
        eps = 0.1 if args.epsilon is None else args.epsilon
        model = GrowthParams(p=1, q=2, s=1, sigma=0.0, epsilon=eps)
    else:
        eps = 1.0 if args.epsilon is None else args.epsilon
        model = LogisticParams(s=0.1, k1=0.8, k2=1.2, beta_sens=8.0, sigma=0.0, epsilon=eps)

    coeffs = make_coefficients(model)
    grid = Grid(0.0, coeffs.domain_hint, args.n_cells)

    t0 = time.perf_counter()
    solve = evolve_fpe(
        coeffs, args.alpha, grid, SolverConfig(t_end=args.t_end, init_center=0.5)
    )
    t_solve = time.perf_counter() - t0
    print(
        f"solver: {solve.n_steps} steps (dt={solve.dt:.3e}), retained mass "
        f"{solve.retained_mass:.4e}, converged={solve.converged}, {t_solve:.1f}s"
    )

    cfg = PathConfig(t_end=args.t_end, dt=args.dt, x0=0.5)
    t0 = time.perf_counter()
    if args.estimator == "independent":
        ens = simulate_ensemble(coeffs, args.alpha, cfg, args.paths, RngStream(args.seed))
        survived = np.isnan(ens.extinct_at) & (ens.max_states <= grid.x_max)
        print(
            f"ensemble: {args.paths} paths, {int(survived.sum())} never exited "
            f"(fraction {survived.mean():.4f} vs retained {solve.retained_mass:.4f}), "
            f"{time.perf_counter() - t0:.1f}s"
        )
    else:
        ens = simulate_qsd_ensemble(
            coeffs, args.alpha, cfg, args.paths, RngStream(args.seed), grid.x_max
        )
        print(
            f"resampled ensemble: {args.paths} paths, {ens.resample_events} domain "
            f"exits resampled, {time.perf_counter() - t0:.1f}s"
        )

    hist = empirical_density(ens, grid)
    print(f"L1(solver, histogram) = {l1_distance(solve.field, hist):.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
