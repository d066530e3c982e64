"""Seeded graph factories shared by the test modules."""

import numpy as np

from graphsig.graph import Graph


def path(n, w=1.0):
    return Graph.from_edges(n, np.arange(n - 1), np.arange(1, n), np.full(n - 1, w))


def cycle(n):
    return Graph.from_edges(n, np.arange(n), (np.arange(n) + 1) % n)


def complete(n):
    i, j = np.triu_indices(n, 1)
    return Graph.from_edges(n, i, j)


def star(leaves):
    return Graph.from_edges(leaves + 1, np.zeros(leaves, dtype=int), np.arange(1, leaves + 1))


def random_connected(n, rng, p=0.15, weighted=True):
    """Random spanning tree plus Erdos-Renyi extras; weights in [0.1, 2]."""
    perm = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        a, b = perm[k], perm[rng.integers(k)]
        edges.add((min(a, b), max(a, b)))
    i, j = np.triu_indices(n, 1)
    extra = rng.random(i.size) < p
    edges.update(zip(i[extra].tolist(), j[extra].tolist()))
    e = np.array(sorted(edges))
    w = rng.uniform(0.1, 2.0, len(e)) if weighted else np.ones(len(e))
    return Graph.from_edges(n, e[:, 0], e[:, 1], w)


def random_multi_component(rng, max_n=100):
    """Disjoint union of 1-4 connected random graphs (each with >= 2 vertices)."""
    m = int(rng.integers(1, 5))
    sizes = rng.integers(2, max(3, max_n // m), size=m)
    rows, cols, ws, off = [], [], [], 0
    for sz in sizes:
        g = random_connected(int(sz), rng, p=float(rng.uniform(0.05, 0.4)))
        i, j, w = g.edges()
        rows.append(i + off); cols.append(j + off); ws.append(w)
        off += int(sz)
    perm = rng.permutation(off)
    return Graph.from_edges(off, perm[np.concatenate(rows)], perm[np.concatenate(cols)],
                            np.concatenate(ws)), m


def random_bipartite(n, rng):
    """Connected bipartite graph: random spanning tree across sides plus random cross edges."""
    side = np.zeros(n, dtype=int)
    side[rng.permutation(n)[: n // 2]] = 1
    a, b = np.flatnonzero(side == 0), np.flatnonzero(side == 1)
    edges = set()
    # alternate attachment keeps the tree bipartite
    rest_a, rest_b = list(a[1:]), list(b)
    placed_a, placed_b = [a[0]], []
    while rest_a or rest_b:
        if rest_b and (not rest_a or rng.random() < 0.5):
            v = rest_b.pop(); u = placed_a[rng.integers(len(placed_a))]; placed_b.append(v)
        else:
            if not placed_b:
                v = rest_b.pop(); u = placed_a[rng.integers(len(placed_a))]; placed_b.append(v)
            else:
                v = rest_a.pop(); u = placed_b[rng.integers(len(placed_b))]; placed_a.append(v)
        edges.add((min(u, v), max(u, v)))
    for _ in range(n):
        u, v = a[rng.integers(len(a))], b[rng.integers(len(b))]
        edges.add((min(u, v), max(u, v)))
    e = np.array(sorted(edges))
    return Graph.from_edges(n, e[:, 0], e[:, 1], rng.uniform(0.1, 2.0, len(e)))


def random_non_bipartite(n, rng):
    """A connected bipartite graph with one same-side edge added (creates an odd cycle)."""
    from graphsig.graph import is_bipartite

    g = random_bipartite(n, rng)
    _, (v1, v2) = is_bipartite(g)
    big = v1 if len(v1) >= 2 else v2
    u, v = sorted(rng.choice(big, 2, replace=False).tolist())
    i, j, w = g.edges()
    if np.any((i == u) & (j == v)):
        raise AssertionError("same-side edge cannot already exist")
    return Graph.from_edges(n, np.append(i, u), np.append(j, v), np.append(w, rng.uniform(0.1, 2.0)))
