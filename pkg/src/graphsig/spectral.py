"""Laplacian eigendecomposition, graph Fourier transform and smoothness measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DisconnectedGraphError,
    LengthMismatchError,
    NumericError,
    ParameterError,
    UnsupportedVariantError,
)
from .graph import Graph, LaplacianVariant, connected_components, laplacian

ZERO_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues and orthonormal eigenvectors (columns of ``U``)."""

    graph: Graph
    variant: LaplacianVariant
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def U(self) -> np.ndarray:
        return self.eigenvectors

    def zero_multiplicity(self, tol: float = ZERO_EIGENVALUE_TOL) -> int:
        return int(np.count_nonzero(self.eigenvalues < tol))

    def matrix_function(self, values) -> np.ndarray:
        """Dense ``U diag(values) U^T``."""
        U = self.eigenvectors
        return (U * np.asarray(values, dtype=float)) @ U.T


def apply_sign_convention(U: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Flip columns so the first entry with magnitude above ``tol`` is positive."""
    U = np.array(U, dtype=float, copy=True)
    big = np.abs(U) > tol
    first = np.argmax(big, axis=0)
    pivots = U[first, np.arange(U.shape[1])]
    U[:, pivots < 0] *= -1.0
    return U


def eigendecompose(g: Graph, variant=LaplacianVariant.COMBINATORIAL,
                   allow_disconnected: bool = False) -> Spectrum:
    """Full dense symmetric eigendecomposition of a Laplacian.

    Only the symmetric variants are accepted. Graphs with several components
    are refused unless ``allow_disconnected`` is set; see
    :func:`component_spectra` for per-component processing.
    """
    variant = LaplacianVariant(variant)
    if not variant.symmetric:
        raise UnsupportedVariantError(
            f"{variant.value} matrix is not symmetric; build it with graph.laplacian()"
        )
    if not allow_disconnected:
        m = len(connected_components(g))
        if m > 1:
            raise DisconnectedGraphError(
                f"graph has {m} connected components; process them separately "
                "or pass allow_disconnected=True"
            )
    L = laplacian(g, variant).toarray()
    try:
        lam, U = scipy.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    U = apply_sign_convention(U)

    resid = np.linalg.norm(L @ U - U * lam, axis=0)
    bound = 1e-8 * np.maximum(1.0, np.abs(lam))
    if np.any(resid > bound):
        worst = int(np.argmax(resid / bound))
        raise NumericError(f"eigenpair {worst} residual {resid[worst]:.3e} exceeds {bound[worst]:.1e}")
    lam.setflags(write=False)
    U.setflags(write=False)
    return Spectrum(g, variant, lam, U)


def component_spectra(g: Graph, variant=LaplacianVariant.COMBINATORIAL):
    """Yield ``(vertices, Spectrum)`` for every connected component."""
    from .graph import subgraph

    for verts in connected_components(g):
        yield verts, eigendecompose(subgraph(g, verts), variant)


def power_iteration_lambda_max(g: Graph, variant=LaplacianVariant.COMBINATORIAL,
                               tol: float = 1e-6, maxiter: int = 10_000, seed: int = 0) -> float:
    """Largest eigenvalue of a symmetric Laplacian by power iteration.

    Stops when the Rayleigh quotient changes by less than ``tol`` (relative).
    """
    L = laplacian(g, variant)
    x = np.random.default_rng(seed).standard_normal(g.n)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(maxiter):
        y = L @ x
        new = float(x @ y)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        if abs(new - est) <= tol * max(abs(new), 1e-300):
            return new
        est = new
    return est


def lambda_max_bound(g: Graph, variant=LaplacianVariant.COMBINATORIAL) -> float:
    """Upper bound on the spectrum used as the Chebyshev interval end.

    Power-iteration estimate inflated by 1%, capped by the Gershgorin bound
    (``2 max d_i`` for L, 2 for the normalized Laplacian).
    """
    variant = LaplacianVariant(variant)
    est = 1.01 * power_iteration_lambda_max(g, variant)
    cap = 2.0 if variant is LaplacianVariant.NORMALIZED else 2.0 * float(g.degrees.max())
    return float(min(est, cap)) if cap > 0 else 1.0


# -- Fourier pair ------------------------------------------------------------------

def _check_length(s: Spectrum, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape[0] != s.n:
        raise LengthMismatchError(f"signal has length {f.shape[0]}, graph has {s.n} vertices")
    if not np.all(np.isfinite(f)):
        raise ParameterError("signal contains non-finite values")
    return f


def gft(s: Spectrum, f) -> np.ndarray:
    """Graph Fourier coefficients ``fhat[l] = <f, u_l>``. Accepts (N,) or (N, m)."""
    return s.eigenvectors.T @ _check_length(s, f)


def igft(s: Spectrum, fhat) -> np.ndarray:
    return s.eigenvectors @ _check_length(s, fhat)


# -- discrete calculus -------------------------------------------------------------

def zero_crossings(g: Graph, f) -> list[tuple[int, int]]:
    """Edges ``(i, j)``, ``i < j``, whose endpoint values have strictly opposite signs."""
    f = np.asarray(f, dtype=float)
    i, j, _ = g.edges()
    hit = f[i] * f[j] < 0
    return list(zip(i[hit].tolist(), j[hit].tolist()))


def edge_derivative(g: Graph, f, i: int, j: int) -> float:
    """``sqrt(W_ij) * (f(j) - f(i))``; zero when no edge joins i and j."""
    f = np.asarray(f, dtype=float)
    return float(np.sqrt(g.W[i, j]) * (f[j] - f[i]))


def gradient(g: Graph, f, i: int) -> np.ndarray:
    """Edge derivatives at ``i`` over its neighbours (in index order)."""
    _check_vertex(g, i)
    f = np.asarray(f, dtype=float)
    lo, hi = g.W.indptr[i], g.W.indptr[i + 1]
    nbrs, w = g.W.indices[lo:hi], g.W.data[lo:hi]
    return np.sqrt(w) * (f[nbrs] - f[i])


def local_variation(g: Graph, f, i: int | None = None):
    """Norm of the graph gradient at vertex ``i`` (all vertices if ``i`` is None)."""
    f = np.asarray(f, dtype=float)
    if i is not None:
        return float(np.linalg.norm(gradient(g, f, i)))
    W = g.W.tocoo()
    sq = np.bincount(W.row, weights=W.data * (f[W.col] - f[W.row]) ** 2, minlength=g.n)
    return np.sqrt(sq)


def dirichlet_form(g: Graph, f, p: float = 2.0) -> float:
    """p-Dirichlet form ``(1/p) * sum_i |grad_i f|^p``; p=2 gives ``f^T L f``."""
    if not p >= 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    lv = local_variation(g, f)
    return float(np.sum(lv ** p) / p)


def quadratic_form(g: Graph, f) -> float:
    f = np.asarray(f, dtype=float)
    return float(f @ (laplacian(g) @ f))


def edge_sum_form(g: Graph, f) -> float:
    """``sum over edges of W_ij (f(j) - f(i))^2``."""
    f = np.asarray(f, dtype=float)
    i, j, w = g.edges()
    return float(np.sum(w * (f[j] - f[i]) ** 2))


def laplacian_seminorm(g: Graph, f) -> float:
    return float(np.sqrt(dirichlet_form(g, f, 2.0)))


def _check_vertex(g: Graph, i: int) -> None:
    if not 0 <= i < g.n:
        raise ParameterError(f"vertex {i} out of range [0, {g.n})")


@dataclass(frozen=True)
class RayleighReport:
    quotient_errors: np.ndarray
    min_sampled_margin: np.ndarray
    ok: bool


def rayleigh_check(s: Spectrum, samples: int = 100, tol: float = 1e-8, seed: int = 0) -> RayleighReport:
    """Check the eigenpairs against the iterative min-max characterisation.

    For each ``l`` verifies ``u_l^T L u_l = lambda_l`` and that random unit
    vectors orthogonal to ``u_0..u_{l-1}`` have quotient at least ``lambda_l``.
    ``min_sampled_margin[l]`` is the smallest ``f^T L f - lambda_l`` observed.
    """
    L = laplacian(s.graph, s.variant).toarray()
    U, lam = s.eigenvectors, s.eigenvalues
    q = np.einsum("il,ij,jl->l", U, L, U)
    errors = np.abs(q - lam)
    rng = np.random.default_rng(seed)
    margins = np.empty(s.n)
    for ell in range(s.n):
        F = rng.standard_normal((s.n, samples))
        if ell:
            B = U[:, :ell]
            F -= B @ (B.T @ F)
        F /= np.linalg.norm(F, axis=0)
        rq = np.einsum("ik,ij,jk->k", F, L, F)
        margins[ell] = np.min(rq - lam[ell])
    ok = bool(np.all(errors <= tol * np.maximum(1, lam)) and np.all(margins >= -tol))
    return RayleighReport(errors, margins, ok)
