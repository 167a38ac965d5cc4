"""Random intersection graphs: bipartite sampling, projection, thinning, statistics.

The model has n individuals and m = floor(beta * n) groups; each
(individual, group) membership is present independently with probability
gamma / n.  Two individuals are adjacent in the projected graph iff they
share at least one group.  The derived quantities are

    mu = beta * gamma**2      (asymptotic mean degree)
    c  = 1 / (1 + beta*gamma) (asymptotic clustering)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError, NoWedgesError


@dataclass(frozen=True)
class GraphParams:
    """Parameters (n, beta, gamma) of the intersection-graph model."""

    n: int
    beta: float
    gamma: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if self.gamma / self.n > 1:
            raise DomainError(
                f"membership probability gamma/n = {self.gamma / self.n} exceeds 1"
            )
        if self.m < 1:
            raise DomainError(
                f"group count floor(beta*n) = {self.m} must be >= 1"
            )

    @property
    def m(self) -> int:
        """Number of groups."""
        return int(math.floor(self.beta * self.n))

    @property
    def r(self) -> float:
        """Membership probability gamma / n."""
        return self.gamma / self.n

    @property
    def mu(self) -> float:
        """Asymptotic mean degree beta * gamma**2."""
        return self.beta * self.gamma**2

    @property
    def c(self) -> float:
        """Asymptotic clustering 1 / (1 + beta*gamma)."""
        return 1.0 / (1.0 + self.beta * self.gamma)

    @classmethod
    def from_clustering(cls, n: int, c: float, mu: float) -> "GraphParams":
        beta, gamma = solve_params(c, mu)
        return cls(n=n, beta=beta, gamma=gamma)


def solve_params(c: float, mu: float) -> tuple[float, float]:
    """Invert (mu, c) = (beta*gamma**2, 1/(1+beta*gamma)) for (beta, gamma)."""
    if not 0 < c < 1:
        raise DomainError(f"clustering c must lie in (0, 1), got {c}")
    if not mu > 0:
        raise DomainError(f"mean degree mu must be positive, got {mu}")
    gamma = mu * c / (1.0 - c)
    beta = (1.0 - c) ** 2 / (mu * c**2)
    return beta, gamma


@dataclass
class BipartiteGraph:
    """Group-membership structure: for each group, its sorted member indices.

    Stored flat (CSR-like): members of group a are
    ``members[group_indptr[a]:group_indptr[a+1]]``, sorted and distinct.
    """

    params: GraphParams
    group_indptr: np.ndarray
    members: np.ndarray
    _vertex_csr: tuple[np.ndarray, np.ndarray] | None = field(
        default=None, repr=False, compare=False
    )

    @property
    def m(self) -> int:
        return len(self.group_indptr) - 1

    def group(self, a: int) -> np.ndarray:
        return self.members[self.group_indptr[a] : self.group_indptr[a + 1]]

    @property
    def memberships(self) -> list[np.ndarray]:
        return [self.group(a) for a in range(self.m)]

    def group_sizes(self) -> np.ndarray:
        return np.diff(self.group_indptr)

    def vertex_groups(self, v: int) -> np.ndarray:
        """Sorted group indices that individual v belongs to."""
        indptr, groups = self._vertex_adjacency()
        return groups[indptr[v] : indptr[v + 1]]

    def _vertex_adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        if self._vertex_csr is None:
            n = self.params.n
            gid = np.repeat(np.arange(self.m), self.group_sizes())
            order = np.lexsort((gid, self.members))
            groups = gid[order]
            counts = np.bincount(self.members, minlength=n)
            indptr = np.concatenate(([0], np.cumsum(counts)))
            object.__setattr__(self, "_vertex_csr", (indptr, groups))
        return self._vertex_csr


@dataclass
class IntersectionGraph:
    """Simple undirected graph stored as sorted CSR adjacency plus a canonical edge list."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    edge_u: np.ndarray  # canonical: u < v, lexicographically sorted
    edge_v: np.ndarray

    @property
    def edge_count(self) -> int:
        return len(self.edge_u)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(v) for v in range(self.n)]

    @classmethod
    def from_edges(cls, n: int, u: np.ndarray, v: np.ndarray) -> "IntersectionGraph":
        """Build from undirected edge endpoint arrays (deduplicated, self-loops rejected)."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if np.any(u == v):
            raise DomainError("self-loops are not allowed")
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = np.unique(lo * np.int64(n) + hi)
        eu = keys // n
        ev = keys % n
        du = np.concatenate([eu, ev])
        dv = np.concatenate([ev, eu])
        order = np.lexsort((dv, du))
        indices = dv[order]
        counts = np.bincount(du, minlength=n)
        indptr = np.concatenate(([0], np.cumsum(counts)))
        return cls(n=n, indptr=indptr, indices=indices, edge_u=eu, edge_v=ev)

    @classmethod
    def empty(cls, n: int) -> "IntersectionGraph":
        z = np.zeros(0, dtype=np.int64)
        return cls(
            n=n,
            indptr=np.zeros(n + 1, dtype=np.int64),
            indices=z,
            edge_u=z,
            edge_v=z,
        )


def _draw_distinct_flat(
    rng: np.random.Generator, n: int, sizes: np.ndarray
) -> np.ndarray:
    """For each group size, draw that many distinct indices in [0, n); flat result.

    Candidates are drawn with replacement and within-group duplicates are
    redrawn; collisions are rare when sizes are small relative to n.
    """
    total = int(sizes.sum())
    gid = np.repeat(np.arange(len(sizes)), sizes)
    flat = rng.integers(0, n, total)
    while True:
        order = np.lexsort((flat, gid))
        g_s, f_s = gid[order], flat[order]
        dup = np.zeros(total, dtype=bool)
        if total > 1:
            dup_sorted = (g_s[1:] == g_s[:-1]) & (f_s[1:] == f_s[:-1])
            dup[order[1:]] = dup_sorted
        k = int(dup.sum())
        if k == 0:
            return flat[order]
        flat[dup] = rng.integers(0, n, k)


def sample_bipartite(params: GraphParams, seed: int) -> BipartiteGraph:
    """Sample the bipartite membership graph: each membership i.i.d. with probability gamma/n.

    Per group, a Binomial(n, gamma/n) size is drawn and that many distinct
    individuals are sampled uniformly; equivalent in distribution to per-pair
    coins but linear in the number of memberships.
    """
    rng = np.random.default_rng(seed)
    sizes = rng.binomial(params.n, params.r, size=params.m)
    members = _draw_distinct_flat(rng, params.n, sizes)
    indptr = np.concatenate(([0], np.cumsum(sizes)))
    return BipartiteGraph(params=params, group_indptr=indptr, members=members)


def project(b: BipartiteGraph) -> IntersectionGraph:
    """Project group memberships to the intersection graph (one edge per co-membership)."""
    n = b.params.n
    sizes = b.group_sizes()
    starts = b.group_indptr[:-1]
    us, vs = [], []
    for s in np.unique(sizes):
        if s < 2:
            continue
        rows = starts[sizes == s]
        mat = b.members[rows[:, None] + np.arange(s)[None, :]]
        iu, iv = np.triu_indices(s, 1)
        us.append(mat[:, iu].ravel())
        vs.append(mat[:, iv].ravel())
    if not us:
        return IntersectionGraph.empty(n)
    return IntersectionGraph.from_edges(n, np.concatenate(us), np.concatenate(vs))


def thin(g: IntersectionGraph, p: float, seed: int) -> IntersectionGraph:
    """Keep each edge independently with probability p."""
    if not 0 <= p <= 1:
        raise DomainError(f"thinning probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    keep = rng.random(g.edge_count) < p
    return IntersectionGraph.from_edges(g.n, g.edge_u[keep], g.edge_v[keep])


def degree_histogram(g: IntersectionGraph) -> dict[int, int]:
    """Map degree -> number of vertices with that degree."""
    deg, counts = np.unique(g.degrees(), return_counts=True)
    return {int(d): int(c) for d, c in zip(deg, counts)}


def triangle_count(g: IntersectionGraph) -> int:
    """Exact number of triangles, by common-neighbor counts over edges."""
    total = 0
    for u, v in zip(g.edge_u, g.edge_v):
        total += len(
            np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True)
        )
    assert total % 3 == 0
    return total // 3


def wedge_count(g: IntersectionGraph) -> int:
    d = g.degrees().astype(np.int64)
    return int((d * (d - 1) // 2).sum())


def transitivity(
    g: IntersectionGraph,
    max_exact_n: int = 100_000,
    wedge_samples: int = 1_000_000,
    seed: int = 0,
) -> float:
    """Global transitivity 3 * triangles / wedges.

    Exact wedge/triangle counting up to ``max_exact_n`` vertices, uniform
    wedge sampling above.  Raises :class:`NoWedgesError` when the graph has
    no path of length two.
    """
    wedges = wedge_count(g)
    if wedges == 0:
        raise NoWedgesError("graph has no path of length two")
    if g.n <= max_exact_n:
        return 3.0 * triangle_count(g) / wedges
    return _transitivity_sampled(g, wedge_samples, seed)


def _transitivity_sampled(g: IntersectionGraph, samples: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    d = g.degrees().astype(np.int64)
    w = (d * (d - 1) // 2).astype(np.float64)
    centers = rng.choice(g.n, size=samples, p=w / w.sum())
    dc = d[centers]
    r1 = rng.integers(0, dc)
    r2 = rng.integers(0, dc - 1)
    r2 = np.where(r2 >= r1, r2 + 1, r2)
    a = g.indices[g.indptr[centers] + r1]
    b = g.indices[g.indptr[centers] + r2]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    keys = lo * np.int64(g.n) + hi
    edge_keys = g.edge_u * np.int64(g.n) + g.edge_v
    pos = np.searchsorted(edge_keys, keys)
    pos = np.minimum(pos, len(edge_keys) - 1)
    closed = edge_keys[pos] == keys
    return float(closed.mean())


def ball_is_tree(b: BipartiteGraph, root: int, radius: int) -> bool:
    """Whether the bipartite ball of the given radius around ``root`` induces a tree.

    The ball contains every individual and group within bipartite distance
    ``radius`` of the root; it is connected by construction, so it is a tree
    iff its induced edge count equals its vertex count minus one.
    """
    if not 0 <= root < b.params.n:
        raise DomainError(f"root {root} out of range")
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    seen_ind = {root}
    seen_grp: set[int] = set()
    frontier = [root]
    for dist in range(1, radius + 1):
        if dist % 2 == 1:  # individuals -> groups
            nxt = []
            for v in frontier:
                for a in b.vertex_groups(v):
                    a = int(a)
                    if a not in seen_grp:
                        seen_grp.add(a)
                        nxt.append(a)
        else:  # groups -> individuals
            nxt = []
            for a in frontier:
                for v in b.group(a):
                    v = int(v)
                    if v not in seen_ind:
                        seen_ind.add(v)
                        nxt.append(v)
        frontier = nxt
        if not frontier:
            break
    edges = 0
    for a in seen_grp:
        for v in b.group(a):
            if int(v) in seen_ind:
                edges += 1
    return edges == len(seen_ind) + len(seen_grp) - 1


def write_edge_list(g: IntersectionGraph, path) -> None:
    """Text export: header ``# n=<n> edges=<E>`` then one sorted ``u v`` pair per line."""
    with open(path, "w") as fh:
        fh.write(f"# n={g.n} edges={g.edge_count}\n")
        for u, v in zip(g.edge_u, g.edge_v):
            fh.write(f"{u} {v}\n")


def write_memberships(b: BipartiteGraph, path) -> None:
    """Text export: one line per group, space-separated member indices."""
    with open(path, "w") as fh:
        fh.write(f"# n={b.params.n} m={b.m}\n")
        for a in range(b.m):
            fh.write(" ".join(str(int(v)) for v in b.group(a)))
            fh.write("\n")
