"""Command-line interface.

Subcommands: generate, stats, theory, sweep, simulate, validate, census,
ball-check.  Parameters are given either as (--beta, --gamma) or as the
equivalent (--c, --mu) pair; the two are mutually exclusive.  Every run
writes a manifest.json next to its outputs with the full parameter set.

Exit codes: 0 success, 2 usage error, 3 domain/validation error,
4 capacity (truncation or motif budget) error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, experiments, rng, theory
from .epidemic import McConfig, monte_carlo
from .errors import CapacityError, DomainError, NoWedgesError
from .graphgen import (
    GraphParams,
    ball_is_tree,
    degree_histogram,
    project,
    sample_bipartite,
    solve_params,
    thin,
    transitivity,
    write_edge_list,
    write_memberships,
)

EXIT_DOMAIN = 3
EXIT_CAPACITY = 4


def _fmt(x) -> str:
    """Render a value for CSV/JSON: floats at 12 significant digits, '.' decimal."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


class _Run:
    """Collects outputs of one CLI invocation and writes the run manifest."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out_dir = args.out
        os.makedirs(self.out_dir, exist_ok=True)
        self.outputs: list[str] = []
        self.t0 = time.monotonic()

    def path(self, name: str) -> str:
        p = os.path.join(self.out_dir, name)
        self.outputs.append(name)
        return p

    def finish(self) -> None:
        manifest = {
            "command": self.args.command,
            "parameters": {
                k: v
                for k, v in sorted(vars(self.args).items())
                if k not in ("command", "func") and v is not None
            },
            "master_seed": getattr(self.args, "seed", None),
            "version": __version__,
            "outputs": self.outputs,
            "wall_clock_seconds": time.monotonic() - self.t0,
        }
        _write_json(os.path.join(self.out_dir, "manifest.json"), manifest)


def _resolve_params(args) -> tuple[float, float]:
    """(beta, gamma) from either (--beta, --gamma) or (--c, --mu)."""
    has_bg = args.beta is not None or args.gamma is not None
    has_cm = args.c is not None or args.mu is not None
    if has_bg and has_cm:
        raise DomainError("give either (--beta, --gamma) or (--c, --mu), not both")
    if has_cm:
        if args.c is None or args.mu is None:
            raise DomainError("--c and --mu must be given together")
        beta, gamma = solve_params(args.c, args.mu)
        # round so that (--c, --mu) and the printed equivalent (--beta,
        # --gamma) produce byte-identical outputs
        return _round12(beta), _round12(gamma)
    if args.beta is None or args.gamma is None:
        raise DomainError("--beta and --gamma must be given together")
    return args.beta, args.gamma


def _graph_params(args) -> GraphParams:
    if args.n is None:
        raise DomainError("--n is required for this command")
    beta, gamma = _resolve_params(args)
    return GraphParams(n=args.n, beta=beta, gamma=gamma)


def _add_param_flags(sp, n=False, p=False, trials=False, threads=False):
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--c", type=float, default=None)
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=str, default=".")
    if n:
        sp.add_argument("--n", type=int, default=None)
    if p:
        sp.add_argument("--p", type=float, default=0.5)
    if trials:
        sp.add_argument("--trials", type=int, default=1000)
    if threads:
        sp.add_argument("--threads", type=int, default=1)


def _cmd_generate(args, run: _Run) -> None:
    params = _graph_params(args)
    b = sample_bipartite(params, args.seed)
    g = project(b)
    if args.thin_p is not None:
        g = thin(g, args.thin_p, rng.derive(args.seed, 1))
    write_edge_list(g, run.path("edges.txt"))
    write_memberships(b, run.path("memberships.txt"))


def _cmd_stats(args, run: _Run) -> None:
    params = _graph_params(args)
    g = project(sample_bipartite(params, args.seed))
    hist = degree_histogram(g)
    max_deg = max(hist)
    theory_pmf = theory.compound_poisson_degree_pmf(params.beta, params.gamma, max_deg)
    rows = []
    for d in range(max_deg + 1):
        count = hist.get(d, 0)
        rows.append([d, count, count / params.n, float(theory_pmf[d])])
    _write_csv(
        run.path("degree.csv"),
        ["degree", "count", "empirical_pmf", "theory_pmf"],
        rows,
    )
    try:
        trans = transitivity(g, seed=rng.derive(args.seed, 2))
        trans_out = _round12(trans)
    except NoWedgesError:
        trans_out = "no_wedges"
    stats = {
        "n": params.n,
        "beta": params.beta,
        "gamma": params.gamma,
        "mu": params.mu,
        "c": params.c,
        "edges": g.edge_count,
        "mean_degree": _round12(2.0 * g.edge_count / params.n),
        "transitivity": trans_out,
    }
    _write_json(run.path("stats.json"), stats)


def _theory_point_json(beta: float, gamma: float, p: float) -> dict:
    sol = theory.extinction_prob(beta, gamma, p)
    return {
        "beta": _round12(beta),
        "gamma": _round12(gamma),
        "p": p,
        "mu": _round12(beta * gamma**2),
        "c": _round12(1.0 / (1.0 + beta * gamma)),
        "R0": _round12(sol.r_nought),
        "rho": _round12(sol.rho),
        "pi": _round12(sol.pi),
        "K": sol.truncation_k,
        "residual": _round12(sol.residual),
        "iterations": sol.iterations,
        "near_critical": sol.near_critical,
    }


def _cmd_theory(args, run: _Run) -> None:
    beta, gamma = _resolve_params(args)
    _write_json(run.path("theory.json"), _theory_point_json(beta, gamma, args.p))


def _cmd_sweep(args, run: _Run) -> None:
    p_list = [float(x) for x in args.p.split(",")]
    c_grid = None
    if args.c_grid:
        c_grid = np.array([float(x) for x in args.c_grid.split(",")])
    rows = experiments.sweep_figure1(args.mu, p_list, c_grid)
    _write_csv(
        run.path("figure1.csv"),
        ["c", "p", "mu", "beta", "gamma", "R0", "pi", "K", "near_critical"],
        [
            [r.c, r.p, r.mu, r.beta, r.gamma, r.r_nought, r.pi,
             r.truncation_k, r.near_critical]
            for r in rows
        ],
    )
    crossings = {
        _fmt(p): experiments.threshold_crossing(args.mu, p) for p in p_list
    }
    _write_json(run.path("thresholds.json"), {"mu": args.mu, "r0_crossing_c": crossings})


def _cmd_simulate(args, run: _Run) -> None:
    params = _graph_params(args)
    cfg = McConfig(
        params=params,
        p=args.p,
        trials=args.trials,
        master_seed=args.seed,
        regenerate_graph=not args.shared_graph,
        threshold_exponent=args.threshold_exponent,
        index_case=args.index_case,
    )
    records, summary = monte_carlo(cfg, workers=args.threads)
    _write_csv(
        run.path("trials.csv"),
        ["trial", "seed", "final_size", "generations", "is_large"],
        [
            [r.trial_index, r.seed, r.final_size, r.num_generations, r.is_large]
            for r in records
        ],
    )
    _write_json(
        run.path("summary.json"),
        {
            "n": params.n,
            "beta": params.beta,
            "gamma": params.gamma,
            "p": args.p,
            "trials": summary.trials,
            "threshold": summary.threshold,
            "num_large": summary.num_large,
            "fraction_large": _round12(summary.fraction_large),
            "stderr": _round12(summary.stderr),
            "mean_small_final_size": _round12(summary.mean_small_final_size)
            if not math.isnan(summary.mean_small_final_size)
            else None,
        },
    )


def _cmd_validate(args, run: _Run) -> None:
    points = []
    for token in args.points.split(","):
        c, mu, p = (float(x) for x in token.split(":"))
        points.append((c, mu, p))
    rows = experiments.mc_validation(
        points, args.n, args.trials, args.seed, workers=args.threads
    )
    _write_csv(
        run.path("mc_validation.csv"),
        ["c", "mu", "p", "n", "trials", "pi_theory", "pi_hat", "stderr", "z"],
        [
            [r.c, r.mu, r.p, r.n, r.trials, r.pi_theory, r.pi_hat, r.stderr, r.z]
            for r in rows
        ],
    )


def _cmd_census(args, run: _Run) -> None:
    beta, gamma = _resolve_params(args)
    n_list = [int(x) for x in args.n_list.split(",")]
    rows = experiments.census_scaling(
        beta, gamma, args.p, n_list, args.replicates, args.seed,
        workers=args.threads,
    )
    _write_csv(
        run.path("census.csv"),
        ["n", "beta", "gamma", "p", "replicate", "k4", "k4prime"],
        [
            [r.n, r.beta, r.gamma, r.p, r.replicate, r.k4, r.k4_prime]
            for r in rows
        ],
    )


def _cmd_ball_check(args, run: _Run) -> None:
    params = _graph_params(args)
    if args.radius is not None:
        radius = args.radius
    else:
        kappa = args.kappa
        if kappa is None:
            mu = params.mu
            kappa = 0.5 if mu <= 1 else 1.0 / (2.0 * math.log(mu) + 1.0)
        radius = int(math.floor(kappa * math.log(params.n)))
    graphs = max(1, args.roots // 20)
    per_graph = args.roots // graphs
    trees = 0
    total = 0
    for gi in range(graphs):
        b = sample_bipartite(params, rng.derive(args.seed, gi))
        root_rng = np.random.default_rng(rng.derive(args.seed, gi, 1))
        for root in root_rng.integers(0, params.n, per_graph):
            trees += ball_is_tree(b, int(root), radius)
            total += 1
    _write_json(
        run.path("ball.json"),
        {
            "n": params.n,
            "beta": params.beta,
            "gamma": params.gamma,
            "radius": radius,
            "roots": total,
            "tree_fraction": _round12(trees / total),
        },
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rigepi",
        description="Reed-Frost epidemics on random intersection graphs",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="sample a graph; export edge list and memberships")
    _add_param_flags(sp, n=True)
    sp.add_argument("--thin-p", type=float, default=None,
                    help="optionally thin the projected graph")
    sp.set_defaults(func=_cmd_generate)

    sp = sub.add_parser("stats", help="degree histogram and transitivity of a sampled graph")
    _add_param_flags(sp, n=True)
    sp.set_defaults(func=_cmd_stats)

    sp = sub.add_parser("theory", help="R_0, rho, pi at a single parameter point")
    _add_param_flags(sp, p=True)
    sp.set_defaults(func=_cmd_theory)

    sp = sub.add_parser("sweep", help="theory sweep over the clustering axis (figure1.csv)")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--p", type=str, default="0.2,0.3,0.5",
                    help="comma-separated transmission probabilities")
    sp.add_argument("--c-grid", type=str, default=None,
                    help="comma-separated clustering values (default: built-in 50-point grid)")
    sp.add_argument("--out", type=str, default=".")
    sp.set_defaults(func=_cmd_sweep, seed=None)

    sp = sub.add_parser("simulate", help="Monte Carlo epidemic trials")
    _add_param_flags(sp, n=True, p=True, trials=True, threads=True)
    sp.add_argument("--shared-graph", action="store_true",
                    help="sample one graph for all trials instead of one per trial")
    sp.add_argument("--index-case", type=int, default=None,
                    help="pin the index case (default: uniform per trial)")
    sp.add_argument("--threshold-exponent", type=float, default=2.0 / 3.0)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("validate", help="theory pi versus empirical large-outbreak fraction")
    sp.add_argument("--points", type=str, required=True,
                    help="comma-separated c:mu:p triples")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", type=str, default=".")
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("census", help="K4/K4' census of thinned and unthinned graphs")
    _add_param_flags(sp, p=True, threads=True)
    sp.add_argument("--n-list", type=str, default="4000,8000")
    sp.add_argument("--replicates", type=int, default=64)
    sp.set_defaults(func=_cmd_census)

    sp = sub.add_parser("ball-check", help="fraction of tree-like bipartite balls")
    _add_param_flags(sp, n=True)
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--kappa", type=float, default=None)
    sp.add_argument("--roots", type=int, default=200)
    sp.set_defaults(func=_cmd_ball_check)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    run = _Run(args)
    try:
        args.func(args, run)
    except CapacityError as exc:
        print(f"error: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, ValueError) as exc:
        print(f"error: domain: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    run.finish()
    return 0


if __name__ == "__main__":
    sys.exit(main())
