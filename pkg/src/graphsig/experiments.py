"""Reproducible wavelet experiments: spread comparison and discontinuity localization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generators import random_geometric_graph, random_regular_graph
from .graph import Graph, LaplacianVariant, hop_distances
from .spectral import eigendecompose
from .wavelets import (
    DEFAULT_MOTHER,
    average_spreads,
    ckwt_atoms,
    ckwt_coefficients,
    sgwt_atom_sets,
    sgwt_scales,
    sgwt_transform,
)


@dataclass(frozen=True)
class SpreadReport:
    """Per-(transform, scale) spreads averaged over graph instances.

    ``rows`` holds ``(scale, kind, spatial, spectral)`` tuples. For SGWT the
    scale column is the scale index (0 for the scaling kernel, 1..K for the
    wavelets, finest first); for CKWT it is the hop radius ``k``.
    """

    rows: list
    variant: LaplacianVariant

    def kind_mean(self, kind: str, column: str) -> float:
        idx = {"spatial": 2, "spectral": 3}[column]
        vals = [r[idx] for r in self.rows if r[1].startswith(kind)]
        return float(np.mean(vals))


def spread_bench(n: int = 300, d: int = 5, instances: int = 5, seed: int = 7,
                 ckwt_scales=range(1, 6), n_sgwt_scales: int = 5,
                 mother=DEFAULT_MOTHER) -> SpreadReport:
    """Average spatial/spectral spreads of CKWT and SGWT on random regular graphs."""
    streams = np.random.SeedSequence(seed).spawn(instances)
    acc: dict[tuple, list] = {}
    for ss in streams:
        g = random_regular_graph(n, d, np.random.default_rng(ss))
        s = eigendecompose(g, LaplacianVariant.COMBINATORIAL)
        D = hop_distances(g)
        for k in ckwt_scales:
            p = average_spreads(g, s, ckwt_atoms(g, k, mother, D), D)
            acc.setdefault((k, "ckwt"), []).append((p.spatial, p.spectral))
        atom_sets = sgwt_atom_sets(s, sgwt_scales(s.lambda_max, n_sgwt_scales))
        for idx, atoms in enumerate(atom_sets):
            p = average_spreads(g, s, atoms, D)
            acc.setdefault((idx, atoms.kind), []).append((p.spatial, p.spectral))
    rows = []
    for (scale, kind), vals in acc.items():
        spatial, spectral = np.mean(vals, axis=0)
        rows.append((scale, kind, float(spatial), float(spectral)))
    return SpreadReport(rows, LaplacianVariant.COMBINATORIAL)


# -- discontinuity --------------------------------------------------------------------

def planted_cut_signal(n: int = 500, radius: float = 0.07, seed: int = 0, jump: float = 1.0):
    """Piecewise-smooth signal on a random geometric graph with a jump across ``x = 1/2``.

    Returns ``(graph, points, signal, cut_edges)`` where ``cut_edges`` are the
    edges joining the two sides.
    """
    g, X = random_geometric_graph(n, radius, seed)
    x, y = X[:, 0], X[:, 1]
    side = x >= 0.5
    f = 0.25 * np.sin(np.pi * x) * np.cos(np.pi * y) + jump * side
    i, j, _ = g.edges()
    cut = side[i] != side[j]
    return g, X, f, list(zip(i[cut].tolist(), j[cut].tolist()))


@dataclass(frozen=True)
class ConcentrationRow:
    kind: str
    scale: float
    fraction: float
    baseline: float

    @property
    def ratio(self) -> float:
        return self.fraction / self.baseline if self.baseline > 0 else math.inf


def near_cut_vertices(g: Graph, cut_edges, hops: int = 2) -> np.ndarray:
    ends = np.unique(np.asarray(cut_edges, dtype=np.int64).ravel())
    if ends.size == 0:
        return ends
    D = hop_distances(g, ends)
    return np.flatnonzero(D.min(axis=0) <= hops)


def top_fraction_near(coeffs, near, top: float = 0.05) -> float:
    """Share of the top ``top`` fraction of ``|coeffs|`` whose center lies in ``near``."""
    c = np.abs(np.asarray(coeffs, dtype=float))
    m = max(1, int(math.ceil(top * c.size)))
    best = np.argsort(-c, kind="stable")[:m]
    return float(np.isin(best, near).mean())


def discontinuity_experiment(g: Graph, f, cut_edges, ckwt_scales=range(1, 11),
                             n_sgwt_scales: int = 5, top: float = 0.05, hops: int = 2,
                             mother=DEFAULT_MOTHER) -> list[ConcentrationRow]:
    """Where do the largest wavelet coefficients of ``f`` sit relative to the cut?

    For each CKWT scale, the SGWT scaling kernel and each SGWT scale, reports
    the fraction of top-``top`` magnitude coefficients whose center vertex is
    within ``hops`` of a cut edge endpoint, alongside the uniform baseline
    (the share of all vertices that are that close).
    """
    near = near_cut_vertices(g, cut_edges, hops)
    baseline = near.size / g.n
    rows = []
    C = ckwt_coefficients(g, f, ckwt_scales, mother)
    for col, k in enumerate(ckwt_scales):
        rows.append(ConcentrationRow("ckwt", k, top_fraction_near(C[:, col], near, top), baseline))
    s = eigendecompose(g)
    scales = sgwt_scales(s.lambda_max, n_sgwt_scales)
    S = sgwt_transform(s, f, scales)
    rows.append(ConcentrationRow("sgwt-scaling", 0, top_fraction_near(S[:, 0], near, top), baseline))
    for idx in range(1, S.shape[1]):
        rows.append(ConcentrationRow("sgwt", idx, top_fraction_near(S[:, idx], near, top), baseline))
    return rows
