"""Reed-Frost epidemics on random intersection graphs with tunable clustering."""

from .errors import CapacityError, DomainError, NoWedgesError
from .graphgen import (
    BipartiteGraph,
    GraphParams,
    IntersectionGraph,
    ball_is_tree,
    degree_histogram,
    project,
    sample_bipartite,
    solve_params,
    thin,
    transitivity,
)
from .epidemic import (
    EpidemicOutcome,
    McConfig,
    McSummary,
    TrialRecord,
    large_outbreak_threshold,
    monte_carlo,
    percolation_cluster,
    reed_frost_run,
    summarize,
)
from .motifs import MotifCounts, census4
from .theory import (
    FinalSizeDist,
    LocalOutbreakDist,
    TheorySolution,
    compound_poisson_degree_pmf,
    extinction_prob,
    final_size_dist,
    finite_n_offspring_pgf,
    local_outbreak_dist,
    offspring_pgf,
    r_nought,
    total_progeny_pmf,
)
from .experiments import census_scaling, mc_validation, sweep_figure1

__version__ = "0.1.0"
