"""Parameter sweeps and validation campaigns.

Deterministic theory sweeps over the clustering axis (the two panels of the
R_0 / pi picture at fixed mean degree), Monte Carlo validation of the
large-outbreak probability against the fixed-point theory, and the K4'
census scaling study on thinned versus unthinned graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from . import rng, theory
from .errors import CapacityError, DomainError
from .graphgen import GraphParams, project, sample_bipartite, solve_params, thin
from .epidemic import McConfig, monte_carlo
from .motifs import MotifCounts, census4


@dataclass(frozen=True)
class SweepRow:
    c: float
    p: float
    mu: float
    beta: float
    gamma: float
    r_nought: float
    pi: float
    truncation_k: int
    near_critical: bool
    capacity_exceeded: bool = False


@dataclass(frozen=True)
class ValidationRow:
    c: float
    mu: float
    p: float
    n: int
    trials: int
    pi_theory: float
    pi_hat: float
    stderr: float
    z: float


@dataclass(frozen=True)
class CensusRow:
    n: int
    beta: float
    gamma: float
    p: float
    replicate: int
    k4: int
    k4_prime: int


def default_c_grid() -> np.ndarray:
    """50 clustering values in [1e-3, 0.99]: log-spaced up to 0.1, then linear.

    Includes 1e-3, 1e-2, 0.1, 0.7, 0.9, 0.99 so the closed-form limit checks
    land on grid points.
    """
    log_part = 10.0 ** np.linspace(-3, -1, 15)
    lin_part = np.linspace(0.15, 0.95, 33)
    grid = np.concatenate([log_part, lin_part, [0.975, 0.99]])
    assert len(grid) == 50
    return grid


def sweep_figure1(
    mu: float,
    p_list: list[float],
    c_grid: np.ndarray | None = None,
    epsilon: float = theory.DEFAULT_EPSILON,
) -> list[SweepRow]:
    """One deterministic theory row per (c, p): R_0 and the explosion probability."""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    for p in p_list:
        if not 0 < p <= 1:
            raise DomainError(f"sweep p values must lie in (0, 1], got {p}")
    if c_grid is None:
        c_grid = default_c_grid()
    rows = []
    for c in c_grid:
        beta, gamma = solve_params(float(c), mu)
        for p in p_list:
            try:
                sol = theory.extinction_prob(beta, gamma, p, epsilon=epsilon)
            except CapacityError:
                rows.append(
                    SweepRow(
                        c=float(c), p=p, mu=mu, beta=beta, gamma=gamma,
                        r_nought=float("nan"), pi=float("nan"),
                        truncation_k=-1, near_critical=False,
                        capacity_exceeded=True,
                    )
                )
                continue
            rows.append(
                SweepRow(
                    c=float(c), p=p, mu=mu, beta=beta, gamma=gamma,
                    r_nought=sol.r_nought, pi=sol.pi,
                    truncation_k=sol.truncation_k,
                    near_critical=sol.near_critical,
                )
            )
    return rows


def threshold_crossing(
    mu: float, p: float, c_lo: float = 1e-3, c_hi: float = 0.99, tol: float = 1e-9
) -> float | None:
    """Clustering value where R_0(c) = 1 at fixed (mu, p), by bisection.

    Returns None when R_0 does not cross 1 on [c_lo, c_hi].
    """
    def r0(c):
        beta, gamma = solve_params(c, mu)
        return theory.r_nought(beta, gamma, p)

    lo, hi = c_lo, c_hi
    f_lo, f_hi = r0(lo) - 1.0, r0(hi) - 1.0
    if f_lo * f_hi > 0:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (r0(mid) - 1.0) * f_lo <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def mc_validation(
    points: list[tuple[float, float, float]],
    n: int,
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> list[ValidationRow]:
    """Per (c, mu, p) point: theory pi versus the empirical large-outbreak fraction."""
    rows = []
    for i, (c, mu, p) in enumerate(points):
        beta, gamma = solve_params(c, mu)
        sol = theory.extinction_prob(beta, gamma, p)
        cfg = McConfig(
            params=GraphParams(n=n, beta=beta, gamma=gamma),
            p=p,
            trials=trials,
            master_seed=rng.derive(master_seed, i),
        )
        _, summary = monte_carlo(cfg, workers=workers)
        stderr = math.sqrt(sol.pi * (1.0 - sol.pi) / trials)
        diff = summary.fraction_large - sol.pi
        if stderr > 0:
            z = diff / stderr
        else:
            z = 0.0 if diff == 0 else math.inf * math.copysign(1, diff)
        rows.append(
            ValidationRow(
                c=c, mu=mu, p=p, n=n, trials=trials,
                pi_theory=sol.pi, pi_hat=summary.fraction_large,
                stderr=stderr, z=z,
            )
        )
    return rows


def _census_replicate(args) -> list[CensusRow]:
    beta, gamma, p, n, rep, seed = args
    g = project(sample_bipartite(GraphParams(n=n, beta=beta, gamma=gamma), seed))
    m = census4(g)
    rows = [
        CensusRow(n=n, beta=beta, gamma=gamma, p=1.0, replicate=rep,
                  k4=m.k4, k4_prime=m.k4_prime)
    ]
    if p != 1.0:
        gt = thin(g, p, rng.derive(seed, 7))
        mt = census4(gt)
        rows.append(
            CensusRow(n=n, beta=beta, gamma=gamma, p=p, replicate=rep,
                      k4=mt.k4, k4_prime=mt.k4_prime)
        )
    return rows


def census_scaling(
    beta: float,
    gamma: float,
    p: float,
    n_list: list[int],
    replicates: int,
    master_seed: int,
    workers: int = 1,
) -> list[CensusRow]:
    """Replicated K4/K4' censuses of unthinned (p=1 rows) and thinned graphs per n."""
    if sorted(n_list) != list(n_list):
        raise DomainError("n_list must be ascending")
    for n in n_list:
        if n > 20_000:
            raise DomainError(f"census n capped at 20000, got {n}")
    jobs = [
        (beta, gamma, p, n, rep, rng.derive(master_seed, n, rep))
        for n in n_list
        for rep in range(replicates)
    ]
    if workers <= 1:
        chunks = [_census_replicate(j) for j in jobs]
    else:
        with get_context("fork").Pool(workers) as pool:
            chunks = pool.map(_census_replicate, jobs)
    return [row for chunk in chunks for row in chunk]


def census_means(rows: list[CensusRow]) -> dict[tuple[int, float], float]:
    """Mean K4' count keyed by (n, p)."""
    acc: dict[tuple[int, float], list[int]] = {}
    for row in rows:
        acc.setdefault((row.n, row.p), []).append(row.k4_prime)
    return {key: float(np.mean(vals)) for key, vals in acc.items()}
