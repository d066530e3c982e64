"""Graph filtering, convolution, translation, modulation and heat diffusion.

Exact filters work in the eigenbasis of a :class:`~graphsig.spectral.Spectrum`.
The Chebyshev path needs only sparse matrix-vector products and an upper
bound on the spectrum, so it is the one to use on large graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import LengthMismatchError, ParameterError, SupportViolationError
from .graph import Graph, LaplacianVariant, hop_distances, laplacian
from .kernels import SpectralKernel, heat
from .spectral import Spectrum, gft, igft, lambda_max_bound

DEFAULT_CHEBYSHEV_ORDER = 30


def filter_exact(s: Spectrum, k: SpectralKernel, f) -> np.ndarray:
    """``U diag(k(lambda)) U^T f``; ``f`` may hold several signals as columns."""
    fhat = gft(s, f)
    h = k(s.eigenvalues)
    return s.eigenvectors @ (h[:, None] * fhat if fhat.ndim == 2 else h * fhat)


def chebyshev_coefficients(k: SpectralKernel, order: int, upper: float) -> np.ndarray:
    """Chebyshev coefficients ``c_0..c_order`` of ``k`` on ``[0, upper]``.

    Gauss-Chebyshev quadrature on ``2 * order`` nodes, so any polynomial
    kernel of degree ``<= order`` is reproduced exactly.
    """
    order = int(order)
    if order < 1:
        raise ParameterError(f"Chebyshev order must be >= 1, got {order}")
    if not upper > 0:
        raise ParameterError(f"spectral upper bound must be positive, got {upper}")
    m = 2 * order
    theta = np.pi * (np.arange(m) + 0.5) / m
    samples = k(0.5 * upper * (np.cos(theta) + 1.0))
    ks = np.arange(order + 1)
    return (2.0 / m) * np.cos(np.outer(ks, theta)) @ samples


def chebyshev_apply(L: sp.spmatrix, coeffs, f, upper: float) -> np.ndarray:
    """Evaluate ``c_0/2 T_0(X) f + sum_k c_k T_k(X) f`` with ``X = 2L/upper - I``.

    Coefficients may be a 1-D array, or 2-D with one row per kernel, in which
    case the result has a leading kernel axis.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    f = np.asarray(f, dtype=float)
    n = L.shape[0]
    X = (2.0 / upper) * L - sp.identity(n, format="csr")
    X = sp.csr_matrix(X)

    t_prev = f
    out = np.multiply.outer(0.5 * c[:, 0], t_prev)
    if c.shape[1] > 1:
        t_cur = X @ f
        out += np.multiply.outer(c[:, 1], t_cur)
        for j in range(2, c.shape[1]):
            t_next = 2.0 * (X @ t_cur) - t_prev
            out += np.multiply.outer(c[:, j], t_next)
            t_prev, t_cur = t_cur, t_next
    return out[0] if np.ndim(coeffs) == 1 else out


def filter_chebyshev(g: Graph, k: SpectralKernel, f, order: int = DEFAULT_CHEBYSHEV_ORDER,
                     upper: float | None = None,
                     variant=LaplacianVariant.COMBINATORIAL) -> np.ndarray:
    """Approximate ``k(L) f`` by a degree-``order`` Chebyshev expansion.

    The output at vertex ``i`` depends only on ``f`` within ``order`` hops of ``i``.
    ``upper`` defaults to :func:`~graphsig.spectral.lambda_max_bound`.
    """
    f = np.asarray(f, dtype=float)
    if f.shape[0] != g.n:
        raise LengthMismatchError(f"signal has length {f.shape[0]}, graph has {g.n} vertices")
    if upper is None:
        upper = lambda_max_bound(g, variant)
    c = chebyshev_coefficients(k, order, upper)
    return chebyshev_apply(laplacian(g, variant), c, f, upper)


@dataclass(frozen=True)
class FilterOperator:
    """A kernel bound to a graph with an evaluation mode (``exact`` or ``chebyshev``)."""

    graph: Graph
    kernel: SpectralKernel
    mode: str = "exact"
    order: int = DEFAULT_CHEBYSHEV_ORDER
    spectrum: Spectrum | None = None
    upper: float | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "chebyshev"):
            raise ParameterError(f"unknown filter mode {self.mode!r}")
        if self.mode == "exact" and self.spectrum is None:
            raise ParameterError("exact filtering requires a spectrum")
        if self.mode == "chebyshev" and self.order < 1:
            raise ParameterError("Chebyshev order must be >= 1")

    def __call__(self, f) -> np.ndarray:
        if self.mode == "exact":
            return filter_exact(self.spectrum, self.kernel, f)
        variant = self.spectrum.variant if self.spectrum is not None else LaplacianVariant.COMBINATORIAL
        return filter_chebyshev(self.graph, self.kernel, f, self.order, self.upper, variant)


# -- vertex domain -------------------------------------------------------------------

def polynomial_vertex_coefficients(g: Graph, coeffs, variant=LaplacianVariant.COMBINATORIAL) -> np.ndarray:
    """Dense matrix ``B`` with ``B[i, j] = sum_{k >= d(i,j)} a_k (L^k)[i, j]``.

    ``B f`` equals filtering with the polynomial kernel ``sum_k a_k lambda^k``.
    """
    L = laplacian(g, variant).toarray()
    D = hop_distances(g)
    B = np.zeros_like(L)
    P = np.eye(g.n)
    for k, a in enumerate(coeffs):
        if k:
            P = P @ L
        B += np.where(D <= k, a * P, 0.0)
    return B


def filter_vertex(g: Graph, coeffs, K: int, f) -> np.ndarray:
    """Localized linear transform ``f_out(i) = sum_j b_ij f(j)`` over ``j`` within ``K`` hops.

    ``coeffs`` is a dense or sparse ``N x N`` matrix. Any nonzero beyond the
    ``K``-hop neighbourhood raises :class:`SupportViolationError`.
    """
    B = coeffs if sp.issparse(coeffs) else np.asarray(coeffs, dtype=float)
    if B.shape != (g.n, g.n):
        raise LengthMismatchError(f"coefficient matrix must be {g.n}x{g.n}")
    f = np.asarray(f, dtype=float)
    if f.shape[0] != g.n:
        raise LengthMismatchError(f"signal has length {f.shape[0]}, graph has {g.n} vertices")
    rows, cols = B.nonzero()
    if rows.size:
        D = hop_distances(g)
        bad = D[rows, cols] > K
        if np.any(bad):
            i, j = int(rows[bad][0]), int(cols[bad][0])
            raise SupportViolationError(
                f"coefficient b[{i},{j}] is nonzero but d({i},{j}) = {D[i, j]:g} > K = {K}"
            )
    return B @ f


# -- generalized operators ---------------------------------------------------------------

def convolve(s: Spectrum, f, h) -> np.ndarray:
    """Spectral-domain product ``sum_l fhat(l) hhat(l) u_l``.

    ``h`` is either a vertex-domain signal or a :class:`SpectralKernel`.
    """
    fhat = gft(s, f)
    hhat = h(s.eigenvalues) if isinstance(h, SpectralKernel) else gft(s, h)
    return igft(s, fhat * hhat)


def kernel_signal(s: Spectrum, k: SpectralKernel) -> np.ndarray:
    """Vertex-domain signal whose Fourier coefficients are the kernel samples."""
    return igft(s, k(s.eigenvalues))


def translate(s: Spectrum, k: SpectralKernel, n: int) -> np.ndarray:
    """Generalized translation of kernel ``k`` to vertex ``n``: ``sqrt(N) k(L) delta_n``."""
    if not 0 <= n < s.n:
        raise ParameterError(f"vertex {n} out of range [0, {s.n})")
    U = s.eigenvectors
    return np.sqrt(s.n) * (U @ (k(s.eigenvalues) * U[n]))


def modulate(s: Spectrum, f, k: int) -> np.ndarray:
    """Generalized modulation ``sqrt(N) u_k(i) f(i)``."""
    if not 0 <= k < s.n:
        raise ParameterError(f"frequency index {k} out of range [0, {s.n})")
    f = np.asarray(f, dtype=float)
    if f.shape[0] != s.n:
        raise LengthMismatchError(f"signal has length {f.shape[0]}, graph has {s.n} vertices")
    return np.sqrt(s.n) * s.eigenvectors[:, k] * f


def heat_diffuse(s: Spectrum, f, tau: float) -> np.ndarray:
    """``exp(-tau L) f`` via exact filtering with a dilated heat kernel."""
    if tau < 0:
        raise ParameterError(f"tau must be nonnegative, got {tau}")
    return filter_exact(s, heat(tau), f)
