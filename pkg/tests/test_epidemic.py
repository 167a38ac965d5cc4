import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigepi import (
    DomainError,
    GraphParams,
    IntersectionGraph,
    McConfig,
    large_outbreak_threshold,
    monte_carlo,
    percolation_cluster,
    project,
    reed_frost_run,
    sample_bipartite,
    summarize,
)
from rigepi.epidemic import TrialRecord

from oracles import percolation_cluster_pmf


def sample_graph(n=300, beta=0.25, gamma=4.0, seed=5):
    return project(sample_bipartite(GraphParams(n=n, beta=beta, gamma=gamma), seed))


class TestReedFrost:
    def test_isolated_index(self):
        g = IntersectionGraph.empty(10)
        out = reed_frost_run(g, 0.9, 3, seed=1)
        assert out.final_size == 1
        assert out.generations == [1]
        assert out.infected_set.tolist() == [3]

    def test_p_one_infects_component(self):
        g = sample_graph()
        out = reed_frost_run(g, 1.0, 0, seed=2)
        # with certain transmission the infected set is the whole connected
        # component of the index case
        comp = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.neighbors(v):
                    if int(w) not in comp:
                        comp.add(int(w))
                        nxt.append(int(w))
            frontier = nxt
        assert set(out.infected_set.tolist()) == comp

    def test_p_zero_only_index(self):
        g = sample_graph()
        out = reed_frost_run(g, 0.0, 7, seed=2)
        assert out.final_size == 1

    def test_generation_counts_sum(self):
        g = sample_graph()
        out = reed_frost_run(g, 0.5, 11, seed=9)
        assert sum(out.generations) == out.final_size
        assert all(c > 0 for c in out.generations)

    def test_index_validation(self):
        g = sample_graph(n=50)
        with pytest.raises(DomainError):
            reed_frost_run(g, 0.5, 50, seed=0)
        with pytest.raises(DomainError):
            reed_frost_run(g, 1.2, 0, seed=0)


class TestCoupling:
    @given(
        seed=st.integers(min_value=0, max_value=2**62),
        p=st.floats(min_value=0.0, max_value=1.0),
        gseed=st.integers(min_value=0, max_value=100),
    )
    @settings(max_examples=60, deadline=None)
    def test_simulation_equals_percolation(self, seed, p, gseed):
        g = sample_graph(n=120, seed=gseed)
        index = seed % g.n
        a = reed_frost_run(g, p, index, seed)
        b = percolation_cluster(g, p, index, seed)
        assert a.final_size == b.final_size
        assert np.array_equal(a.infected_set, b.infected_set)
        assert a.generations == b.generations

    @given(seed=st.integers(min_value=0, max_value=2**62))
    @settings(max_examples=40, deadline=None)
    def test_final_size_monotone_in_p(self, seed):
        # one coin per edge, opened iff coin < p: larger p can only add edges
        g = sample_graph(n=150, seed=3)
        sizes = [
            percolation_cluster(g, p, seed % g.n, seed).final_size
            for p in (0.1, 0.4, 0.7, 1.0)
        ]
        assert sizes == sorted(sizes)

    def test_infected_sets_nested_in_p(self):
        g = sample_graph(n=200, seed=4)
        lo = percolation_cluster(g, 0.3, 5, seed=77)
        hi = percolation_cluster(g, 0.8, 5, seed=77)
        assert set(lo.infected_set.tolist()) <= set(hi.infected_set.tolist())


class TestClusterLawExact:
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_triangle_cluster_pmf(self, p):
        # triangle graph: exhaustive enumeration over the 8 edge subsets
        g = IntersectionGraph.from_edges(
            3, np.array([0, 0, 1]), np.array([1, 2, 2])
        )
        oracle = percolation_cluster_pmf(3, [(0, 1), (0, 2), (1, 2)], p, root=0)
        sizes = np.array(
            [percolation_cluster(g, p, 0, s).final_size for s in range(40_000)]
        )
        emp = np.bincount(sizes, minlength=4)[1:] / sizes.size
        assert np.max(np.abs(emp - oracle[1:])) < 0.01

    def test_path_cluster_pmf(self):
        p = 0.6
        g = IntersectionGraph.from_edges(3, np.array([0, 1]), np.array([1, 2]))
        oracle = percolation_cluster_pmf(3, [(0, 1), (1, 2)], p, root=0)
        sizes = np.array(
            [percolation_cluster(g, p, 0, s).final_size for s in range(40_000)]
        )
        emp = np.bincount(sizes, minlength=4)[1:] / sizes.size
        assert np.max(np.abs(emp - oracle[1:])) < 0.01


class TestThreshold:
    def test_floor_of_ten(self):
        assert large_outbreak_threshold(8) == 10
        assert large_outbreak_threshold(30) == 10

    def test_power_law(self):
        assert large_outbreak_threshold(1000) == 100
        assert large_outbreak_threshold(50_000) == 1358

    def test_custom_exponent(self):
        assert large_outbreak_threshold(10_000, 0.5) == 100


class TestMonteCarlo:
    def test_deterministic_and_worker_independent(self):
        cfg = McConfig(
            params=GraphParams(n=400, beta=0.25, gamma=4.0),
            p=0.5,
            trials=24,
            master_seed=99,
        )
        rec1, sum1 = monte_carlo(cfg, workers=1)
        rec2, sum2 = monte_carlo(cfg, workers=3)
        assert rec1 == rec2
        assert sum1 == sum2

    def test_shared_graph_mode(self):
        cfg = McConfig(
            params=GraphParams(n=400, beta=0.25, gamma=4.0),
            p=0.5,
            trials=10,
            master_seed=7,
            regenerate_graph=False,
            index_case=0,
        )
        rec, _ = monte_carlo(cfg)
        assert len(rec) == 10
        assert [r.trial_index for r in rec] == list(range(10))
        # same graph, same index, different coin seeds: sizes may differ
        assert len({r.seed for r in rec}) == 10

    def test_pinned_index_case_p_zero(self):
        cfg = McConfig(
            params=GraphParams(n=200, beta=0.25, gamma=4.0),
            p=0.0,
            trials=5,
            master_seed=3,
            index_case=42,
        )
        rec, summ = monte_carlo(cfg)
        assert all(r.final_size == 1 for r in rec)
        assert summ.num_large == 0
        assert summ.fraction_large == 0.0

    def test_summary_counts(self):
        recs = [
            TrialRecord(trial_index=i, seed=i, final_size=s, num_generations=1,
                        is_large=s >= 10)
            for i, s in enumerate([1, 2, 50, 3, 100])
        ]
        summ = summarize(recs, threshold=10)
        assert summ.num_large == 2
        assert summ.fraction_large == 0.4
        assert summ.mean_small_final_size == pytest.approx(2.0)
        assert summ.stderr == pytest.approx(np.sqrt(0.4 * 0.6 / 5))

    def test_fraction_large_tracks_survival(self):
        # R0 = 2 point; fraction of large outbreaks approximates 1 - rho
        from rigepi import extinction_prob

        n = 4000
        cfg = McConfig(
            params=GraphParams(n=n, beta=0.25, gamma=4.0),
            p=0.5,
            trials=300,
            master_seed=2024,
        )
        _, summ = monte_carlo(cfg)
        pi = extinction_prob(0.25, 4.0, 0.5).pi
        assert abs(summ.fraction_large - pi) < 4 * np.sqrt(pi * (1 - pi) / 300) + 0.02

    def test_config_validation(self):
        params = GraphParams(n=100, beta=0.25, gamma=4.0)
        with pytest.raises(DomainError):
            McConfig(params=params, p=0.5, trials=0, master_seed=1)
        with pytest.raises(DomainError):
            McConfig(params=params, p=-0.1, trials=5, master_seed=1)
