"""Deterministic seeding and per-edge transmission coins.

Transmission coins are counter-based: the coin for an undirected edge is a
pure hash of (seed, u, v) with u < v, so the generation-synchronous epidemic
and the percolation BFS see identical coins no matter in which order they
touch the edges.  The same hash also derives per-trial sub-seeds so that
Monte Carlo results do not depend on worker count or execution order.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 output for a 64-bit input."""
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive(seed: int, *keys: int) -> int:
    """Derive a 64-bit sub-seed from a seed and a tuple of integer keys."""
    h = splitmix64(seed & _MASK)
    for k in keys:
        h = splitmix64(h ^ (k & _MASK))
    return h


def edge_uniform(seed: int, u: int, v: int, n: int) -> float:
    """Uniform in [0, 1) attached to the undirected edge {u, v} of an n-vertex graph."""
    if u > v:
        u, v = v, u
    h = splitmix64(splitmix64(seed & _MASK) ^ (u * n + v))
    return (h >> 11) * 2.0**-53


def _splitmix64_vec(x: np.ndarray) -> np.ndarray:
    x = (x + np.uint64(_GOLDEN))
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def edge_uniforms(seed: int, u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    """Vectorized ``edge_uniform`` over canonical (u < v) edge arrays."""
    key = u.astype(np.uint64) * np.uint64(n) + v.astype(np.uint64)
    h = _splitmix64_vec(np.uint64(splitmix64(seed & _MASK)) ^ key)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53
