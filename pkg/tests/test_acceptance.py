"""End-to-end acceptance checks.

One test per headline property of the package: exact small-instance oracles,
closed-form parameter limits, the threshold law, Monte Carlo agreement with
the branching-process theory, the motif-census scaling contrast, and seed
determinism of the CLI.  Each test is a single pass/fail line under -v.
"""

import time

import numpy as np
import pytest

from rigepi import (
    GraphParams,
    McConfig,
    census_scaling,
    compound_poisson_degree_pmf,
    extinction_prob,
    final_size_dist,
    large_outbreak_threshold,
    monte_carlo,
    percolation_cluster,
    project,
    r_nought,
    reed_frost_run,
    sample_bipartite,
    solve_params,
    sweep_figure1,
    total_progeny_pmf,
    transitivity,
)
from rigepi.cli import main as cli_main
from rigepi.experiments import census_means, default_c_grid
from rigepi.graphgen import ball_is_tree
from rigepi.rng import derive

from oracles import clique_final_size_pmf

MU = 4.0
P_LIST = [0.2, 0.3, 0.5]


@pytest.fixture(scope="module")
def sweep_rows():
    return sweep_figure1(MU, P_LIST, c_grid=default_c_grid())


def by_p(rows, p):
    return [r for r in rows if r.p == p]


def test_final_size_matches_exhaustive_oracle():
    t0 = time.monotonic()
    for k in range(5):
        for p in np.arange(0.1, 0.95, 0.1):
            p = round(float(p), 1)
            got = final_size_dist(k, p).pmf
            assert np.max(np.abs(got - clique_final_size_pmf(k, p))) <= 1e-12
    assert time.monotonic() - t0 < 1.0


def test_simulation_percolation_coupling_identity():
    t0 = time.monotonic()
    rng = np.random.default_rng(20260826)
    graphs = [
        project(sample_bipartite(GraphParams(n=int(n), beta=0.3, gamma=3.0), s))
        for s, n in enumerate(rng.integers(20, 201, size=25))
    ]
    for i in range(10_000):
        g = graphs[i % len(graphs)]
        p = float(rng.random())
        index = int(rng.integers(g.n))
        seed = int(rng.integers(2**62))
        a = reed_frost_run(g, p, index, seed)
        b = percolation_cluster(g, p, index, seed)
        assert a.final_size == b.final_size
        assert np.array_equal(a.infected_set, b.infected_set)
    assert time.monotonic() - t0 < 10.0


def test_limit_low_clustering_r0_approaches_p_mu():
    t0 = time.monotonic()
    for p in P_LIST:
        gaps = []
        for c in (1e-1, 1e-2, 1e-3):
            beta, gamma = solve_params(c, MU)
            gaps.append(abs(r_nought(beta, gamma, p) - p * MU))
        assert gaps[-1] <= 0.05
        assert gaps[0] > gaps[1] > gaps[2]
    assert time.monotonic() - t0 < 5.0


def test_limit_high_clustering_r0_approaches_mu():
    t0 = time.monotonic()
    beta, gamma = solve_params(0.99, MU)
    for p in P_LIST:
        assert abs(r_nought(beta, gamma, p) - MU) <= 0.08
    assert time.monotonic() - t0 < 120.0


def test_certain_transmission_r0_is_mean_degree():
    t0 = time.monotonic()
    rng = np.random.default_rng(7)
    for _ in range(20):
        beta = float(rng.uniform(0.05, 2.0))
        gamma = float(rng.uniform(0.5, 8.0))
        r0 = r_nought(beta, gamma, 1.0)
        assert abs(r0 - beta * gamma**2) <= 1e-10 * max(1.0, beta * gamma**2)
    assert time.monotonic() - t0 < 60.0


def test_threshold_law_pi_positive_iff_r0_above_one(sweep_rows):
    t0 = time.monotonic()
    assert len(sweep_rows) == 150
    for row in sweep_rows:
        if row.r_nought > 1.0 + 1e-6:
            assert row.pi > 0.0
        elif row.r_nought < 1.0 - 1e-6:
            assert row.pi <= 1e-8  # rho = 1 within 1e-8
    assert time.monotonic() - t0 < 60.0


def test_figure_one_shape(sweep_rows):
    grid = default_c_grid()
    for p in P_LIST:
        rows = by_p(sweep_rows, p)
        r0 = np.array([r.r_nought for r in rows])
        assert np.all(np.diff(r0) > -1e-9), f"R0 not nondecreasing at p={p}"
        pis = {round(r.c, 10): r.pi for r in rows}
        assert pis[0.99] < 0.05
        assert pis[0.7] > pis[0.9] > pis[0.99]
    # p=0.3 curve rises then falls: an interior maximum
    pi_03 = np.array([r.pi for r in by_p(sweep_rows, 0.3)])
    imax = int(np.argmax(pi_03))
    assert 0 < imax < len(pi_03) - 1
    assert pi_03[imax] > pi_03[0] and pi_03[imax] > pi_03[-1]
    # p=0.2 curve is subcritical at c=0.01 yet supercritical somewhere
    pi_02 = {round(r.c, 10): r.pi for r in by_p(sweep_rows, 0.2)}
    assert pi_02[0.01] == 0.0
    assert max(pi_02.values()) > 0.0


def test_large_outbreak_probability_matches_theory():
    beta, gamma = solve_params(0.5, MU)
    p, n, trials = 0.5, 50_000, 2000
    sol = extinction_prob(beta, gamma, p)
    cfg = McConfig(
        params=GraphParams(n=n, beta=beta, gamma=gamma),
        p=p,
        trials=trials,
        master_seed=314159,
    )
    records, summary = monte_carlo(cfg)
    band = 3.0 * np.sqrt(sol.pi * (1.0 - sol.pi) / trials)
    assert abs(summary.fraction_large - sol.pi) <= band
    # conditional small-outbreak law against the branching-process progeny law
    thresh = large_outbreak_threshold(n)
    small = np.array([r.final_size for r in records if not r.is_large])
    emp = np.bincount(small, minlength=thresh)[1:thresh] / small.size
    pmf, _ = total_progeny_pmf(beta, gamma, p, max_size=2000)
    theory_cond = np.zeros(thresh - 1)
    theory_cond[: pmf.size] = pmf[: thresh - 1]
    theory_cond /= theory_cond.sum()
    tv = 0.5 * np.abs(emp - theory_cond).sum()
    assert tv <= 0.05


def test_motif_census_scaling_contrast():
    rows = census_scaling(
        0.25, 4.0, 0.5, [4000, 8000], replicates=64, master_seed=2718
    )
    means = census_means(rows)
    unthinned_ratio = means[(8000, 1.0)] / means[(4000, 1.0)]
    thinned_ratio = means[(8000, 0.5)] / means[(4000, 0.5)]
    assert unthinned_ratio <= 1.5
    assert 1.5 <= thinned_ratio <= 2.5


def test_degree_law_and_transitivity():
    t0 = time.monotonic()
    params = GraphParams(n=100_000, beta=0.25, gamma=4.0)
    g = project(sample_bipartite(params, 424242))
    deg = g.degrees()
    kmax = int(deg.max())
    emp = np.bincount(deg, minlength=kmax + 1) / params.n
    pmf = compound_poisson_degree_pmf(0.25, 4.0, kmax)
    tv = 0.5 * np.abs(emp - pmf).sum()
    assert tv < 0.02
    trans = transitivity(g, seed=11)
    assert abs(trans - 0.5) < 0.02
    assert time.monotonic() - t0 < 60.0


def test_tree_neighbourhood_diagnostic():
    t0 = time.monotonic()
    params = GraphParams(n=10_000, beta=0.25, gamma=4.0)
    # radius kappa*log(n) with 1/kappa just above 2*log(mu)
    kappa = 1.0 / (2.0 * np.log(params.mu) + 0.5)
    radius = int(np.floor(kappa * np.log(params.n)))
    assert radius >= 1
    trees = 0
    for gi in range(10):
        b = sample_bipartite(params, derive(555, gi))
        roots = np.random.default_rng(derive(555, gi, 1)).integers(0, params.n, 20)
        trees += sum(ball_is_tree(b, int(r), radius) for r in roots)
    assert trees / 200 >= 0.95
    assert time.monotonic() - t0 < 60.0


def test_cli_determinism_across_thread_counts(tmp_path):
    cases = [
        (
            "simulate",
            ["simulate", "--n", "500", "--beta", "0.25", "--gamma", "4",
             "--p", "0.5", "--trials", "40", "--seed", "77"],
        ),
        (
            "validate",
            ["validate", "--points", "0.5:4:0.5,0.3:4:0.4", "--n", "400",
             "--trials", "30", "--seed", "88"],
        ),
        (
            "census",
            ["census", "--beta", "0.25", "--gamma", "4", "--p", "0.5",
             "--n-list", "400,800", "--replicates", "3", "--seed", "99"],
        ),
    ]
    for name, argv in cases:
        outs = {}
        for threads in (1, 3):
            out = tmp_path / f"{name}-{threads}"
            assert cli_main(argv + ["--threads", str(threads), "--out", str(out)]) == 0
            outs[threads] = {
                f.name: f.read_bytes()
                for f in out.iterdir()
                if f.name != "manifest.json"
            }
        assert outs[1] == outs[3], f"{name} output depends on --threads"
