"""Weighted undirected graphs, Laplacian-family matrices and structural queries."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist

from .errors import DegenerateDegreeError, EmptyGraphError, ParameterError


class LaplacianVariant(str, enum.Enum):
    COMBINATORIAL = "combinatorial"
    NORMALIZED = "normalized"
    RANDOM_WALK = "random-walk"
    ASYMMETRIC = "asymmetric"

    @property
    def symmetric(self) -> bool:
        return self in (LaplacianVariant.COMBINATORIAL, LaplacianVariant.NORMALIZED)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph backed by a symmetric CSR adjacency matrix.

    Build instances through :meth:`from_edges` (or the constructors in this
    module); the invariants below are checked there and not re-checked here.

    * ``W`` is symmetric with bit-identical mirrored entries,
    * the diagonal is empty (no self-loops),
    * every stored weight is strictly positive.
    """

    n: int
    W: sp.csr_matrix
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        W = self.W
        W.data.setflags(write=False)
        W.indices.setflags(write=False)
        W.indptr.setflags(write=False)
        deg = np.asarray(W.sum(axis=1)).ravel()
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)

    @classmethod
    def from_edges(cls, n: int, rows, cols, weights=None) -> "Graph":
        """Build a graph from unordered edge pairs.

        Each pair may be listed once in either orientation. Duplicated pairs,
        self-loops and negative weights are rejected; zero weights are dropped.
        """
        n = int(n)
        if n < 1:
            raise ParameterError(f"vertex count must be positive, got {n}")
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        if weights is None:
            weights = np.ones(rows.shape, dtype=float)
        weights = np.asarray(weights, dtype=float).ravel()
        if not (rows.shape == cols.shape == weights.shape):
            raise ParameterError("edge arrays must have equal length")
        if rows.size and (min(rows.min(), cols.min()) < 0 or max(rows.max(), cols.max()) >= n):
            raise ParameterError(f"edge endpoint out of range [0, {n})")
        if np.any(rows == cols):
            raise ParameterError("self-loops are not allowed")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ParameterError("edge weights must be finite and nonnegative")

        keep = weights > 0
        lo = np.minimum(rows, cols)[keep]
        hi = np.maximum(rows, cols)[keep]
        w = weights[keep]
        key = lo * n + hi
        if np.unique(key).size != key.size:
            raise ParameterError("duplicate edge in edge list")

        W = sp.coo_matrix(
            (np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
            shape=(n, n),
        ).tocsr()
        W.sort_indices()
        return cls(n, W)

    @classmethod
    def from_dense(cls, A) -> "Graph":
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ParameterError("adjacency must be square")
        if not np.array_equal(A, A.T):
            raise ParameterError("adjacency must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ParameterError("self-loops are not allowed")
        i, j = np.nonzero(np.triu(A, 1))
        return cls.from_edges(A.shape[0], i, j, A[i, j])

    @property
    def num_edges(self) -> int:
        return self.W.nnz // 2

    def edges(self):
        """Return ``(i, j, w)`` arrays with ``i < j``, one entry per edge."""
        U = sp.triu(self.W, k=1).tocoo()
        order = np.lexsort((U.col, U.row))
        return U.row[order], U.col[order], U.data[order]

    def neighbors(self, i: int) -> np.ndarray:
        return self.W.indices[self.W.indptr[i]:self.W.indptr[i + 1]]

    def todense(self) -> np.ndarray:
        return self.W.toarray()


# -- construction ------------------------------------------------------------

def gaussian_weight(dist, theta: float):
    """Gaussian kernel weight ``exp(-dist**2 / (2 theta**2))``."""
    dist = np.asarray(dist, dtype=float)
    return np.exp(-(dist ** 2) / (2.0 * theta ** 2))


def build_gaussian_graph(points, theta: float, kappa: float = 0.0) -> Graph:
    """Thresholded Gaussian kernel graph on a point cloud.

    Vertices ``i`` and ``j`` are joined when their Euclidean distance is at
    most ``kappa``, with weight ``exp(-dist**2 / (2 theta**2))``.

    ``kappa = 0`` disables the threshold: every pair is a candidate edge.
    Pairs whose weight underflows to zero are not stored.
    """
    X = _as_points(points)
    if not theta > 0:
        raise ParameterError(f"theta must be positive, got {theta}")
    if kappa < 0:
        raise ParameterError(f"kappa must be nonnegative, got {kappa}")
    D = cdist(X, X)
    i, j = np.triu_indices(X.shape[0], k=1)
    d = D[i, j]
    mask = np.ones(d.shape, dtype=bool) if kappa == 0 else d <= kappa
    w = gaussian_weight(d[mask], theta)
    g = Graph.from_edges(X.shape[0], i[mask], j[mask], w)
    if g.num_edges == 0:
        raise EmptyGraphError("no pair of points received a nonzero weight")
    return g


def build_knn_graph(points, k: int, theta: float | None = None) -> Graph:
    """Symmetrized k-nearest-neighbour graph.

    Each vertex selects its ``k`` nearest other vertices, ties broken toward
    the lower index. An edge is kept when either endpoint selects the other.
    Weights are Gaussian with width ``theta`` or 1 when ``theta`` is None.
    """
    X = _as_points(points)
    n = X.shape[0]
    k = int(k)
    if k < 1 or k >= n:
        raise ParameterError(f"k must satisfy 1 <= k < N={n}, got {k}")
    if theta is not None and not theta > 0:
        raise ParameterError(f"theta must be positive, got {theta}")
    D = cdist(X, X)
    np.fill_diagonal(D, np.inf)
    # stable sort keeps lower indices first among equal distances
    nearest = np.argsort(D, axis=1, kind="stable")[:, :k]
    src = np.repeat(np.arange(n), k)
    dst = nearest.ravel()
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    pairs = np.unique(lo * n + hi)
    lo, hi = pairs // n, pairs % n
    w = np.ones(lo.shape) if theta is None else gaussian_weight(D[lo, hi], theta)
    return Graph.from_edges(n, lo, hi, w)


def _as_points(points) -> np.ndarray:
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] < 2:
        raise ParameterError("need at least two points")
    if not np.all(np.isfinite(X)):
        raise ParameterError("point coordinates must be finite")
    return X


# -- Laplacians ---------------------------------------------------------------

def laplacian(g: Graph, variant=LaplacianVariant.COMBINATORIAL) -> sp.csr_matrix:
    """Sparse Laplacian-family matrix of ``g``.

    ``combinatorial``  L = D - W
    ``normalized``     D^-1/2 L D^-1/2
    ``random-walk``    P = D^-1 W
    ``asymmetric``     I - P
    """
    variant = LaplacianVariant(variant)
    d = g.degrees
    if variant is LaplacianVariant.COMBINATORIAL:
        return (sp.diags(d) - g.W).tocsr()

    if np.any(d <= 0):
        iso = np.flatnonzero(d <= 0)
        raise DegenerateDegreeError(
            f"{variant.value} Laplacian undefined: isolated vertices {iso[:10].tolist()}"
        )
    W = g.W.tocoo()
    if variant is LaplacianVariant.NORMALIZED:
        s = np.sqrt(d)
        # s[r] * s[c] is commutative, so mirrored entries stay bit-identical
        off = sp.coo_matrix((-W.data / (s[W.row] * s[W.col]), (W.row, W.col)), shape=W.shape)
        return (sp.identity(g.n, format="csr") + off).tocsr()
    P = sp.coo_matrix((W.data / d[W.row], (W.row, W.col)), shape=W.shape).tocsr()
    if variant is LaplacianVariant.RANDOM_WALK:
        return P
    return (sp.identity(g.n, format="csr") - P).tocsr()


# -- structure ------------------------------------------------------------------

def connected_components(g: Graph) -> list[np.ndarray]:
    """Vertex sets of the connected components, ordered by smallest member."""
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        members = [start]
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    members.append(u)
                    queue.append(u)
        comps.append(np.sort(np.asarray(members, dtype=np.int64)))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) == 1


def subgraph(g: Graph, vertices) -> Graph:
    vertices = np.asarray(vertices, dtype=np.int64)
    return Graph(len(vertices), g.W[vertices][:, vertices].tocsr())


def is_bipartite(g: Graph):
    """BFS two-colouring.

    Returns ``(True, (V1, V2))`` with the colour classes when the graph is
    bipartite, else ``(False, None)``. Each component's lowest vertex gets
    colour 0.
    """
    colour = np.full(g.n, -1, dtype=np.int64)
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if colour[u] < 0:
                    colour[u] = 1 - colour[v]
                    queue.append(u)
                elif colour[u] == colour[v]:
                    return False, None
    return True, (np.flatnonzero(colour == 0), np.flatnonzero(colour == 1))


def hop_distances(g: Graph, sources=None) -> np.ndarray:
    """Unweighted shortest-path (edge count) distances; ``inf`` if unreachable.

    Edge weights are ignored. Returns an ``(len(sources), N)`` array, or
    ``(N, N)`` when ``sources`` is None.
    """
    A = g.W.copy()
    A.data = np.ones_like(A.data)
    if sources is None:
        return csgraph.shortest_path(A, directed=False, unweighted=True)
    return csgraph.shortest_path(A, directed=False, unweighted=True, indices=np.atleast_1d(sources))


def k_hop_neighborhood(g: Graph, i: int, k: int) -> np.ndarray:
    """Vertices reachable from ``i`` by a path of at most ``k`` edges, excluding ``i``."""
    d = hop_distances(g, [i])[0]
    return np.flatnonzero((d <= k) & (d > 0))


@dataclass(frozen=True)
class PolaritySplit:
    kept: np.ndarray
    discarded: np.ndarray
    repeated_lambda_max: bool
    zero_entries: np.ndarray

    @property
    def ambiguous(self) -> bool:
        return self.repeated_lambda_max or self.zero_entries.size > 0


def downsample_polarity(g: Graph, spectrum=None, tol: float = 1e-8) -> PolaritySplit:
    """Split vertices by the sign of the top eigenvector of the combinatorial Laplacian.

    Vertices with ``u_max(i) >= 0`` are kept. On a bipartite graph with a
    simple top eigenvalue this returns the two colour classes. Exact zeros are
    kept and listed in ``zero_entries``; a repeated top eigenvalue sets
    ``repeated_lambda_max`` because the split then depends on the basis chosen.
    """
    from .spectral import eigendecompose

    if spectrum is None:
        spectrum = eigendecompose(g, LaplacianVariant.COMBINATORIAL, allow_disconnected=True)
    elif spectrum.variant is not LaplacianVariant.COMBINATORIAL:
        raise ParameterError("polarity downsampling needs the combinatorial spectrum")
    lam = spectrum.eigenvalues
    u = spectrum.eigenvectors[:, -1]
    repeated = g.n > 1 and abs(lam[-1] - lam[-2]) <= tol * max(1.0, lam[-1])
    return PolaritySplit(
        kept=np.flatnonzero(u >= 0),
        discarded=np.flatnonzero(u < 0),
        repeated_lambda_max=bool(repeated),
        zero_entries=np.flatnonzero(u == 0),
    )
