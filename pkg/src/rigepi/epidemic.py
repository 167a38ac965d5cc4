"""Reed-Frost epidemics, percolation clusters, and Monte Carlo replication.

A single uniform coin is attached to every undirected edge (a pure hash of
the run seed and the edge endpoints), and an edge transmits iff its coin is
below p.  The generation-synchronous simulation and the percolation BFS
therefore produce the same infected set for the same (graph, p, index,
seed), and final size is monotone in p for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from . import rng
from .errors import DomainError
from .graphgen import GraphParams, IntersectionGraph, project, sample_bipartite


@dataclass
class EpidemicOutcome:
    """One epidemic realization: per-generation counts and the infected set."""

    final_size: int
    generations: list[int]
    infected_set: np.ndarray | None = None


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    final_size: int
    num_generations: int
    is_large: bool


@dataclass
class McConfig:
    params: GraphParams
    p: float
    trials: int
    master_seed: int
    regenerate_graph: bool = True
    threshold_exponent: float = 2.0 / 3.0
    index_case: int | None = None  # None: uniform per trial

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.p <= 1:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")

    @property
    def threshold(self) -> int:
        return large_outbreak_threshold(self.params.n, self.threshold_exponent)


@dataclass
class McSummary:
    trials: int
    threshold: int
    num_large: int
    fraction_large: float
    stderr: float
    mean_small_final_size: float


def large_outbreak_threshold(n: int, exponent: float = 2.0 / 3.0) -> int:
    """Final-size cutoff separating minor outbreaks from large ones."""
    return max(10, int(math.ceil(n**exponent)))


def reed_frost_run(
    g: IntersectionGraph, p: float, index: int, seed: int
) -> EpidemicOutcome:
    """Generation-synchronous Reed-Frost spread from one index case.

    Infectives at time t contact each neighbor; a susceptible neighbor is
    infected at t+1 iff the edge's coin is below p.  Infectives recover at
    t+1.
    """
    if not 0 <= index < g.n:
        raise DomainError(f"index case {index} out of range")
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    n = g.n
    susceptible = np.ones(n, dtype=bool)
    susceptible[index] = False
    infectives = [index]
    infected = [index]
    generations = [1]
    coin = rng.edge_uniform
    while infectives:
        nxt = []
        for v in infectives:
            for w in g.neighbors(v):
                w = int(w)
                if susceptible[w] and coin(seed, v, w, n) < p:
                    susceptible[w] = False
                    nxt.append(w)
        if not nxt:
            break
        generations.append(len(nxt))
        infected.extend(nxt)
        infectives = nxt
    return EpidemicOutcome(
        final_size=len(infected),
        generations=generations,
        infected_set=np.sort(np.array(infected, dtype=np.int64)),
    )


def _open_subgraph_csr(
    g: IntersectionGraph, p: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """CSR adjacency of the open (coin < p) subgraph."""
    coins = rng.edge_uniforms(seed, g.edge_u, g.edge_v, g.n)
    keep = coins < p
    eu, ev = g.edge_u[keep], g.edge_v[keep]
    du = np.concatenate([eu, ev])
    dv = np.concatenate([ev, eu])
    order = np.argsort(du, kind="stable")
    indices = dv[order]
    counts = np.bincount(du, minlength=g.n)
    indptr = np.concatenate(([0], np.cumsum(counts)))
    return indptr, indices


def percolation_cluster(
    g: IntersectionGraph, p: float, index: int, seed: int
) -> EpidemicOutcome:
    """BFS cluster of the index case over edges kept with probability p.

    Uses the same per-edge coin stream as :func:`reed_frost_run`, so the two
    agree exactly per (g, p, index, seed); BFS levels are the generations.
    """
    if not 0 <= index < g.n:
        raise DomainError(f"index case {index} out of range")
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    indptr, indices = _open_subgraph_csr(g, p, seed)
    visited = np.zeros(g.n, dtype=bool)
    visited[index] = True
    frontier = np.array([index], dtype=np.int64)
    generations = [1]
    infected = [frontier]
    while True:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        offsets = np.repeat(np.cumsum(counts) - counts, counts)
        gather = starts.repeat(counts) + (np.arange(total) - offsets)
        neigh = indices[gather]
        neigh = np.unique(neigh[~visited[neigh]])
        if neigh.size == 0:
            break
        visited[neigh] = True
        frontier = neigh
        generations.append(int(neigh.size))
        infected.append(neigh)
    infected_set = np.sort(np.concatenate(infected))
    return EpidemicOutcome(
        final_size=int(infected_set.size),
        generations=generations,
        infected_set=infected_set,
    )


def _run_trial(args) -> TrialRecord:
    cfg, graph, t = args
    tseed = rng.derive(cfg.master_seed, t)
    if graph is None:
        graph = project(sample_bipartite(cfg.params, rng.derive(tseed, 1)))
    if cfg.index_case is None:
        index = rng.derive(tseed, 3) % cfg.params.n
    else:
        index = cfg.index_case
    out = percolation_cluster(graph, cfg.p, index, rng.derive(tseed, 2))
    return TrialRecord(
        trial_index=t,
        seed=tseed,
        final_size=out.final_size,
        num_generations=len(out.generations),
        is_large=out.final_size >= cfg.threshold,
    )


def monte_carlo(
    cfg: McConfig, workers: int = 1
) -> tuple[list[TrialRecord], McSummary]:
    """Run cfg.trials independent epidemics; summary is worker-count independent.

    Trial t gets a seed derived from (master_seed, t); with
    ``regenerate_graph`` a fresh graph is sampled per trial (annealed law),
    otherwise one shared graph is sampled from the master seed.
    """
    shared = None
    if not cfg.regenerate_graph:
        shared = project(
            sample_bipartite(cfg.params, rng.derive(cfg.master_seed, 0))
        )
    jobs = [(cfg, shared, t) for t in range(cfg.trials)]
    if workers <= 1:
        records = [_run_trial(j) for j in jobs]
    else:
        with get_context("fork").Pool(workers) as pool:
            records = pool.map(_run_trial, jobs, chunksize=max(1, cfg.trials // (4 * workers)))
        records.sort(key=lambda r: r.trial_index)
    return records, summarize(records, cfg.threshold)


def summarize(records: list[TrialRecord], threshold: int) -> McSummary:
    trials = len(records)
    num_large = sum(r.is_large for r in records)
    frac = num_large / trials
    small = [r.final_size for r in records if not r.is_large]
    return McSummary(
        trials=trials,
        threshold=threshold,
        num_large=num_large,
        fraction_large=frac,
        stderr=math.sqrt(frac * (1.0 - frac) / trials),
        mean_small_final_size=float(np.mean(small)) if small else float("nan"),
    )
