"""Seeded random graph generators."""

from __future__ import annotations

import numpy as np

from .errors import NumericError, ParameterError
from .graph import Graph, is_connected


def random_regular_graph(n: int, d: int, seed=None, max_tries: int = 100_000) -> Graph:
    """Uniform simple ``d``-regular graph on ``n`` vertices (pairing model).

    ``n * d`` stubs are paired by a random permutation; any pairing that
    produces a self-loop or a repeated edge is discarded and redrawn.
    """
    n, d = int(n), int(d)
    if n < 1 or d < 0:
        raise ParameterError("need n >= 1 and d >= 0")
    if (n * d) % 2:
        raise ParameterError(f"n * d must be even, got {n} * {d}")
    if d >= n:
        raise ParameterError(f"degree {d} impossible on {n} vertices")
    rng = np.random.default_rng(seed)
    if d == 0:
        return Graph.from_edges(n, [], [])
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        lo, hi = pairs.min(axis=1), pairs.max(axis=1)
        if np.any(lo == hi):
            continue
        key = lo * n + hi
        if np.unique(key).size != key.size:
            continue
        order = np.argsort(key)
        return Graph.from_edges(n, lo[order], hi[order])
    raise NumericError(f"pairing model found no simple {d}-regular graph in {max_tries} tries")


def random_geometric_graph(n: int, radius: float, seed=None, dim: int = 2,
                           connected: bool = True, max_tries: int = 1000):
    """Unit-weight geometric graph on uniform points in the unit cube.

    Returns ``(graph, points)``. With ``connected=True`` point sets are
    redrawn until the graph is connected.
    """
    from scipy.spatial.distance import pdist, squareform

    if not radius > 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        X = rng.random((n, dim))
        D = squareform(pdist(X))
        i, j = np.nonzero(np.triu(D <= radius, 1))
        g = Graph.from_edges(n, i, j)
        if not connected or is_connected(g):
            return g, X
    raise NumericError(f"no connected geometric graph with radius {radius} in {max_tries} tries")
