"""Command-line front end.

Subcommands: ``eval`` (analytic policy evaluation over a sweep),
``simulate`` (simulated evaluation), ``optimize`` (print the best policy
for a configured system), and ``reproduce`` (emit the experiment-sweep CSV
bundles).  Exit codes: 0 on success, 2 for configuration errors, 3 for
infeasible inputs, 4 when an enumeration budget is exceeded.
"""

from __future__ import annotations

import argparse
import sys as _sys
from dataclasses import replace
from pathlib import Path

from .errors import (
    BudgetExceededError,
    ConfigError,
    DegenerateWeightsError,
    InfeasiblePatternError,
    InvalidPatternError,
    SimulationError,
    UnboundedAgeError,
)
from .experiments import (
    FIGURES,
    config_hash,
    load_config,
    reproduce_figure,
    run_eval,
    run_optimize,
    run_simulate,
    write_csv,
)

_EXIT_CONFIG = 2
_EXIT_INFEASIBLE = 3
_EXIT_BUDGET = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aoisched",
        description="Age-of-information analysis and scheduling for "
        "multi-source status update systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
        if config_required:
            p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--seed", type=int, default=None, help="override the seed")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--replications", type=int, default=None, help="override replication count"
        )
        p.add_argument(
            "--horizon", type=int, default=None, help="override event-count horizon"
        )
        p.add_argument(
            "--kmax", type=int, default=None, help="override the insertion-search cap"
        )

    common(sub.add_parser("eval", help="evaluate policies analytically"))
    common(sub.add_parser("simulate", help="evaluate policies by simulation"))
    p_opt = sub.add_parser("optimize", help="print the optimal policy")
    common(p_opt)
    p_opt.add_argument(
        "--method",
        choices=["two-source", "insertion", "pgaw"],
        default=None,
        help="optimizer to run (default: two-source for N=2, else insertion)",
    )
    p_rep = sub.add_parser("reproduce", help="emit experiment sweep CSVs")
    p_rep.add_argument("figure", choices=list(FIGURES))
    common(p_rep, config_required=False)
    return parser


def _apply_overrides(cfg, args):
    sim = cfg.sim
    if args.seed is not None:
        sim = replace(sim, seed=args.seed)
    if args.replications is not None:
        sim = replace(sim, replications=args.replications)
    if args.horizon is not None:
        sim = replace(sim, horizon_events=args.horizon, horizon_time=None)
    search = cfg.search
    if args.kmax is not None:
        search = replace(search, k_max=args.kmax)
    return replace(cfg, sim=sim, search=search)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "reproduce":
            paths = reproduce_figure(
                args.figure,
                out_dir=args.out,
                seed=args.seed if args.seed is not None else 1,
                horizon_events=args.horizon if args.horizon is not None else 1_000_000,
                replications=args.replications if args.replications is not None else 30,
            )
            for path in paths:
                print(path)
            return 0

        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "optimize":
            print(run_optimize(cfg, method=args.method))
            return 0
        if args.command == "eval":
            header, rows = run_eval(cfg)
        else:
            header, rows = run_simulate(cfg)
        out_path = Path(args.out) / cfg.output
        out_path.parent.mkdir(parents=True, exist_ok=True)
        comment = f"config_sha256={config_hash(cfg)} seed={cfg.sim.seed}"
        write_csv(out_path, comment, header, rows)
        print(out_path)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return _EXIT_CONFIG
    except (
        InfeasiblePatternError,
        InvalidPatternError,
        UnboundedAgeError,
        DegenerateWeightsError,
        SimulationError,
    ) as exc:
        print(f"infeasible input: {exc}", file=_sys.stderr)
        return _EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=_sys.stderr)
        return _EXIT_BUDGET


if __name__ == "__main__":
    raise SystemExit(main())
