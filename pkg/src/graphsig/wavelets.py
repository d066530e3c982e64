"""Vertex-domain (CKWT) and spectral (SGWT) graph wavelets and localization measures.

CKWT atoms are built from hop-distance shells around each center; SGWT atoms
are translated low-pass and dilated band-pass kernels. Both are stored as
dense ``N x N`` matrices whose row ``i`` is the atom centered at vertex ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import AdmissibilityError, DisconnectedGraphError, ParameterError
from .graph import Graph, LaplacianVariant, hop_distances, laplacian
from .kernels import SpectralKernel, bandpass, dilate, lowpass
from .operators import chebyshev_apply, chebyshev_coefficients, filter_exact
from .spectral import Spectrum, gft, lambda_max_bound

# -- mother wavelets ---------------------------------------------------------------


def _hat_primitive(u):
    # d/du [u exp(-u^2/2)] = (1 - u^2) exp(-u^2/2)
    return u * np.exp(-0.5 * u * u)


@dataclass(frozen=True)
class MexicanHat:
    """``(1 - u^2) exp(-u^2/2)`` at ``u = a x - b`` for ``x`` in [0, 1)."""

    a: float
    b: float

    def __call__(self, x):
        u = self.a * np.asarray(x, dtype=float) - self.b
        return (1.0 - u * u) * np.exp(-0.5 * u * u)

    def average(self, x0, x1):
        x0, x1 = np.asarray(x0, float), np.asarray(x1, float)
        F = _hat_primitive
        return (F(self.a * x1 - self.b) - F(self.a * x0 - self.b)) / (self.a * (x1 - x0))


MOTHER_WAVELETS = {
    # radial profile: positive at the center, negative ring, integral over [0, inf) is 0
    "mexican-hat": MexicanHat(5.0, 0.0),
    # hat centered at x = 1/2; symmetric, so scale k=1 degenerates to the zero atom
    "mexican-hat-centered": MexicanHat(10.0, 5.0),
}
DEFAULT_MOTHER = "mexican-hat"
_QUADRATURE_NODES = 1024


def ckwt_constants(k: int, mother=DEFAULT_MOTHER) -> np.ndarray:
    """Shell constants ``a_{k,0..k}``: averages of the mother wavelet on ``k+1`` equal subintervals.

    The averages are shifted by their mean so they sum to zero exactly (a
    truncated continuous wavelet leaves a small residual otherwise). Named
    mother wavelets are averaged in closed form; a callable is integrated by
    Gauss-Legendre quadrature with 1024 nodes per subinterval.
    """
    k = int(k)
    if k < 1:
        raise ParameterError(f"CKWT scale must be >= 1, got {k}")
    edges = np.arange(k + 2) / (k + 1)
    x0, x1 = edges[:-1], edges[1:]
    if isinstance(mother, str):
        if mother not in MOTHER_WAVELETS:
            raise ParameterError(f"unknown mother wavelet {mother!r}; choose from {sorted(MOTHER_WAVELETS)}")
        mother = MOTHER_WAVELETS[mother]
    if isinstance(mother, MexicanHat):
        a = mother.average(x0, x1)
    else:
        a = _quadrature_averages(mother, x0, x1)
    return a - a.mean()


def _quadrature_averages(fn: Callable, x0, x1) -> np.ndarray:
    t, w = np.polynomial.legendre.leggauss(_QUADRATURE_NODES)
    mid, half = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    pts = mid[:, None] + half[:, None] * t[None, :]
    return 0.5 * (np.asarray(fn(pts), dtype=float) @ w)


@dataclass(frozen=True, eq=False)
class WaveletAtomSet:
    """Atoms of one transform scale; row ``i`` is the atom centered at vertex ``i``.

    ``flagged`` marks CKWT atoms whose center has eccentricity below the scale
    (empty outer shells), for which the constants were re-centered.
    """

    kind: str
    scale: float
    atoms: np.ndarray
    flagged: np.ndarray = field(default=None)

    @property
    def n(self) -> int:
        return self.atoms.shape[0]

    def coefficients(self, f) -> np.ndarray:
        """Inner products ``<f, psi_i>`` for every center ``i``."""
        return self.atoms @ np.asarray(f, dtype=float)


def _connected_distances(g: Graph, distances=None) -> np.ndarray:
    D = hop_distances(g) if distances is None else np.asarray(distances)
    if not np.all(np.isfinite(D)):
        raise DisconnectedGraphError("wavelet atoms need a connected graph")
    return D.astype(np.int64)


def ckwt_atoms(g: Graph, k: int, mother=DEFAULT_MOTHER, distances=None) -> WaveletAtomSet:
    """CKWT atoms at scale ``k``: ``psi_i(j) = a_{k,tau} / |shell(i, tau)|`` with ``tau = d(i, j) <= k``."""
    D = _connected_distances(g, distances)
    a = ckwt_constants(k, mother)
    n = g.n
    ecc = D.max(axis=1)
    flagged = ecc < k

    A = np.tile(a, (n, 1))
    for i in np.flatnonzero(flagged):
        live = a[: ecc[i] + 1]
        A[i, : ecc[i] + 1] = live - live.mean()
        A[i, ecc[i] + 1:] = 0.0

    atoms = np.zeros((n, n))
    for tau in range(k + 1):
        shell = D == tau
        size = shell.sum(axis=1)
        val = np.divide(A[:, tau], size, out=np.zeros(n), where=size > 0)
        atoms += shell * val[:, None]
    return WaveletAtomSet("ckwt", k, atoms, flagged)


def ckwt_coefficients(g: Graph, f, scales=range(1, 11), mother=DEFAULT_MOTHER) -> np.ndarray:
    """CKWT coefficients, one column per scale (``N x len(scales)``)."""
    D = _connected_distances(g)
    f = np.asarray(f, dtype=float)
    return np.column_stack([ckwt_atoms(g, k, mother, D).coefficients(f) for k in scales])


# -- SGWT ------------------------------------------------------------------------------

def sgwt_scales(upper: float, n_scales: int = 5, lmin_ratio: float = 40.0) -> np.ndarray:
    """Log-spaced scales from ``1/upper`` to ``2 lmin_ratio / upper``, finest first."""
    if not upper > 0:
        raise ParameterError("spectral upper bound must be positive")
    if n_scales < 1:
        raise ParameterError("need at least one wavelet scale")
    lmin = upper / lmin_ratio
    return np.geomspace(1.0 / upper, 2.0 / lmin, n_scales)


def check_admissible(g_hat: SpectralKernel, tol: float = 1e-12) -> None:
    v0 = float(g_hat(0.0))
    if abs(v0) > tol:
        raise AdmissibilityError(f"band-pass kernel must vanish at 0, got {v0:g}")


def sgwt_kernels(scales, low: SpectralKernel | None = None, band: SpectralKernel | None = None):
    low = lowpass() if low is None else low
    band = bandpass() if band is None else band
    check_admissible(band)
    return [low] + [dilate(band, t) for t in scales]


def sgwt_transform(s, f, scales=None, low=None, band=None, mode: str = "exact",
                   order: int = 50, upper: float | None = None) -> np.ndarray:
    """SGWT coefficients as an ``N x (K+1)`` array.

    Column 0 holds the scaling coefficients ``(h(L) f)(i)``; column ``k``
    holds ``(g(t_k L) f)(i)``. ``s`` is a :class:`Spectrum` (required for
    ``mode="exact"``) or a :class:`Graph` for ``mode="chebyshev"``.
    """
    if mode not in ("exact", "chebyshev"):
        raise ParameterError(f"unknown SGWT mode {mode!r}")
    if isinstance(s, Spectrum):
        g, variant = s.graph, s.variant
    elif mode == "chebyshev":
        g, variant = s, LaplacianVariant.COMBINATORIAL
    else:
        raise ParameterError("exact SGWT requires a Spectrum")
    if upper is None:
        upper = s.lambda_max if isinstance(s, Spectrum) and mode == "exact" else lambda_max_bound(g, variant)
    if scales is None:
        scales = sgwt_scales(upper)
    kernels = sgwt_kernels(scales, low, band)
    f = np.asarray(f, dtype=float)
    if mode == "exact":
        return np.column_stack([filter_exact(s, k, f) for k in kernels])
    C = np.vstack([chebyshev_coefficients(k, order, upper) for k in kernels])
    return chebyshev_apply(laplacian(g, variant), C, f, upper).T


def sgwt_atoms(s: Spectrum, kernel: SpectralKernel, kind: str = "sgwt", scale: float = 0.0) -> WaveletAtomSet:
    """Atoms ``k(L) delta_i`` for every center (``k(L)`` is symmetric, so rows work)."""
    return WaveletAtomSet(kind, scale, s.matrix_function(kernel(s.eigenvalues)))


def sgwt_atom_sets(s: Spectrum, scales=None, low=None, band=None) -> list[WaveletAtomSet]:
    if scales is None:
        scales = sgwt_scales(s.lambda_max)
    kernels = sgwt_kernels(scales, low, band)
    sets = [sgwt_atoms(s, kernels[0], "sgwt-scaling", 0.0)]
    sets += [sgwt_atoms(s, k, "sgwt", float(t)) for k, t in zip(kernels[1:], scales)]
    return sets


# -- spreads ------------------------------------------------------------------------------

def _energy(f) -> float:
    e = float(np.dot(f, f))
    if e == 0.0:
        raise ParameterError("spread is undefined for the zero signal")
    return e


def spatial_spread_at(g: Graph, f, i: int, distances=None) -> float:
    """Variance-like spread of ``f**2 / |f|^2`` around vertex ``i`` in squared hops."""
    f = np.asarray(f, dtype=float)
    e = _energy(f)
    d = hop_distances(g, [i])[0] if distances is None else np.asarray(distances)[i]
    return float(np.dot(d ** 2, f ** 2) / e)


def spatial_spread(g: Graph, f, distances=None):
    """Minimum spatial spread over all centers; returns ``(spread, center)``."""
    f = np.asarray(f, dtype=float)
    e = _energy(f)
    D = _connected_distances(g, distances).astype(float)
    per_center = (D ** 2) @ (f ** 2) / e
    c = int(np.argmin(per_center))
    return float(per_center[c]), c


def spectral_spread_from_density(eigenvalues, density, fix_mu_zero: bool = False) -> float:
    """Spread of ``sqrt(lambda)`` under the pmf ``density / sum(density)``.

    The optimal ``sqrt(mu)`` is the pmf mean of ``sqrt(lambda)`` (nonnegative,
    so the ``mu >= 0`` constraint never binds). ``fix_mu_zero`` uses ``mu = 0``
    instead, giving the second moment of ``sqrt(lambda)``.
    """
    density = np.asarray(density, dtype=float)
    total = density.sum()
    if total <= 0:
        raise ParameterError("spread is undefined for the zero signal")
    p = density / total
    r = np.sqrt(np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None))
    m = 0.0 if fix_mu_zero else max(float(p @ r), 0.0)
    return float(p @ (r - m) ** 2)


def spectral_spread(s: Spectrum, f, fix_mu_zero: bool = False) -> float:
    fhat = gft(s, f)
    return spectral_spread_from_density(s.eigenvalues, fhat ** 2, fix_mu_zero)


@dataclass(frozen=True)
class SpreadPoint:
    kind: str
    scale: float
    spatial: float
    spectral: float


def average_spreads(g: Graph, s: Spectrum, atomset: WaveletAtomSet, distances=None,
                    fix_mu_zero: bool = False) -> SpreadPoint:
    """Average localization of one transform scale.

    Spatial: mean over centers ``i`` of the spread of ``psi_i`` around ``i``.
    Spectral: spread of the center-averaged spectral density
    ``(1/N) sum_i psihat_i(lambda)^2``.
    """
    Psi = np.asarray(atomset.atoms, dtype=float)
    if Psi.size == 0:
        raise ParameterError("empty atom set")
    D = _connected_distances(g, distances).astype(float)
    energy = np.einsum("ij,ij->i", Psi, Psi)
    if np.any(energy == 0):
        raise ParameterError(f"{atomset.kind} scale {atomset.scale}: zero atom, spread undefined")
    spatial = np.einsum("ij,ij->i", D ** 2, Psi ** 2) / energy
    density = np.mean((Psi @ s.eigenvectors) ** 2, axis=0)
    spectral = spectral_spread_from_density(s.eigenvalues, density, fix_mu_zero)
    return SpreadPoint(atomset.kind, atomset.scale, float(spatial.mean()), spectral)
