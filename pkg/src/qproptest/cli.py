"""Command-line entry point: ``qproptest <subcommand> [flags]``.

Every subcommand writes a CSV report to ``--out`` (stdout if omitted).
Exit status is 0 on success and 2 when a run breaks a checked invariant.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from .experiments import (
    ExperimentConfig,
    InvariantViolation,
    distinguish_experiment,
    load_config,
    run_experiment,
)

EXIT_OK = 0
EXIT_INVARIANT = 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--config", help="flat key = value file; command-line flags override it")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_const", const=True, help="add a wall_clock column (not reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qproptest", description="Simulated quantum property-testing experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("uniformity", help="uniformity tester on permutation / l_inf-perturbed / 2-to-1 instances")
    _common(p)
    p.add_argument("--amplified", action="store_true", help="majority-vote amplified tester")
    p.add_argument("--classical-budget", type=int, help="run the classical collision baseline with this budget instead")
    p.add_argument("--perturb-n", type=int, help="domain size for l_inf-perturbed instances (default 16 m)")

    p = sub.add_parser("closeness", help="closeness to a known distribution")
    _common(p)
    p.add_argument("--cap", type=float, help="query cap constant C")

    p = sub.add_parser("periodicity", help="1-1-periodicity tester on D_P / D_N instances")
    _common(p)
    p.add_argument("--k-runs", type=int)
    p.add_argument("--verify-trials", type=int)

    p = sub.add_parser("reconstruct", help="empirical reconstruction error of a random distribution")
    _common(p)

    p = sub.add_parser("distinguish", help="classical D_P vs D_N distinguisher")
    _common(p)
    p.add_argument("--q-budget", type=int, required=True)
    p.add_argument("--r", type=int, help="period range [r/2, r] (default floor(sqrt(n)/2))")

    sub.add_parser("selftest", help="quick internal consistency checks")
    return parser


def _config(args, algorithm: str, **extra) -> ExperimentConfig:
    overrides = {
        "experiment": args.command,
        "algorithm": algorithm,
        "n": args.n,
        "m": args.m,
        "epsilon": args.epsilon,
        "trials": args.trials,
        "seed": args.seed,
        "out": args.out,
        "workers": args.workers,
        "timing": args.timing,
        **extra,
    }
    if args.config:
        return load_config(args.config, **overrides)
    return ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def selftest() -> list[str]:
    """Fast checks of the simulators against their dense references."""
    from . import quantum
    from .distributions import OracleFunction
    from .generators import gen_periodic_DP, gen_permutation
    from .periodicity import cfe_recover, shor_distribution, shor_statevector_distribution
    from .testers import test_uniformity

    failures = []
    rng = np.random.default_rng(0)
    v = rng.normal(size=64) + 1j * rng.normal(size=64)
    v /= np.linalg.norm(v)
    if not np.allclose(quantum.inverse_qft(quantum.qft(v)), v):
        failures.append("qft round trip")
    f = OracleFunction(rng.integers(0, 4, size=16), 4)
    S = [0, 1]
    M = 16
    dense = quantum.phase_estimation_distribution(f, S, M)
    t = int(np.isin(f.table, S).sum())
    if np.abs(dense - quantum.outcome_distribution(16, t, M)).sum() > 1e-9:
        failures.append("amplitude estimation vs statevector")
    g, _ = gen_periodic_DP(64, 64, 7, rng)
    if np.abs(shor_distribution(g) - shor_statevector_distribution(g)).sum() > 1e-9:
        failures.append("period sampling vs statevector")
    if cfe_recover(394, 1024, 16) != Fraction(5, 13):
        failures.append("continued fractions")
    accepts = sum(test_uniformity(gen_permutation(64, rng), 0.5, rng).accepted for _ in range(20))
    if accepts < 10:
        failures.append(f"uniformity tester accepted {accepts}/20 permutations")
    return failures


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            failures = selftest()
            for name in failures:
                print(f"FAIL {name}")
            print("selftest OK" if not failures else f"selftest: {len(failures)} failure(s)")
            return EXIT_OK if not failures else EXIT_INVARIANT
        if args.command == "distinguish":
            n = args.n or 4096
            rng = args.seed if args.seed is not None else 0
            text = distinguish_experiment(
                args.q_budget,
                n,
                args.m or 2**20,
                args.r or math.isqrt(n) // 2,
                args.trials or 100,
                rng,
                epsilon=args.epsilon or 0.1,
            )
            _write(text, args.out)
            return EXIT_OK
        if args.command == "uniformity":
            if args.classical_budget is not None:
                cfg = _config(args, "collision", budget=args.classical_budget)
            else:
                alg = "uniformity_amplified" if args.amplified else "uniformity"
                cfg = _config(args, alg, perturb_n=args.perturb_n)
        elif args.command == "closeness":
            cfg = _config(args, "closeness", cap=args.cap)
        elif args.command == "periodicity":
            cfg = _config(args, "periodicity", k_runs=args.k_runs, verify_trials=args.verify_trials)
        else:
            cfg = _config(args, "reconstruct")
        if cfg.out:
            run_experiment(cfg)
        else:
            run_experiment(cfg, out=sys.stdout)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
