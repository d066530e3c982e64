import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import spearmanr

from graphsig.errors import (
    DisconnectedGraphError,
    LengthMismatchError,
    ParameterError,
    UnsupportedVariantError,
)
from graphsig.generators import random_geometric_graph
from graphsig.graph import Graph, laplacian
from graphsig.spectral import (
    apply_sign_convention,
    component_spectra,
    dirichlet_form,
    edge_derivative,
    edge_sum_form,
    eigendecompose,
    gft,
    igft,
    lambda_max_bound,
    laplacian_seminorm,
    local_variation,
    power_iteration_lambda_max,
    quadratic_form,
    rayleigh_check,
    zero_crossings,
)

from _graphs import complete, cycle, path, random_connected, random_multi_component

R2 = 1 / math.sqrt(2)


@pytest.fixture(scope="module")
def g40():
    return random_connected(40, np.random.default_rng(11))


@pytest.fixture(scope="module")
def s40(g40):
    return eigendecompose(g40)


# -- eigendecomposition -------------------------------------------------------------

def test_p2_spectrum():
    s = eigendecompose(path(2))
    assert np.allclose(s.eigenvalues, [0, 2], atol=1e-14)
    assert np.allclose(s.U[:, 0], [R2, R2], atol=1e-14)
    assert np.allclose(s.U[:, 1], [R2, -R2], atol=1e-14)


def test_triangle_spectrum():
    assert np.allclose(eigendecompose(complete(3)).eigenvalues, [0, 3, 3], atol=1e-12)


def test_constant_first_eigenvector(s40):
    assert np.allclose(s40.U[:, 0], 1 / math.sqrt(s40.n), atol=1e-10)
    assert s40.eigenvalues[0] <= 1e-8


def test_spectrum_invariants(s40):
    U = s40.U
    assert np.max(np.abs(U.T @ U - np.eye(s40.n))) <= 1e-8
    assert np.all(np.diff(s40.eigenvalues) >= 0)
    L = laplacian(s40.graph).toarray()
    resid = np.linalg.norm(L @ U - U * s40.eigenvalues, axis=0)
    assert np.all(resid <= 1e-8 * np.maximum(1, s40.eigenvalues))
    assert np.allclose(s40.eigenvalues, np.linalg.eigvalsh(L), atol=1e-10)


def test_sign_convention(s40):
    U = s40.U
    first = np.argmax(np.abs(U) > 1e-10, axis=0)
    assert np.all(U[first, np.arange(U.shape[1])] > 0)


def test_apply_sign_convention_flips_columns():
    U = np.array([[0.0, -0.6], [-1.0, 0.8]])
    assert np.array_equal(apply_sign_convention(U), [[0.0, 0.6], [1.0, -0.8]])


def test_spectrum_is_read_only(s40):
    with pytest.raises(ValueError):
        s40.eigenvalues[0] = 1.0


def test_deterministic(g40, s40):
    again = eigendecompose(g40)
    assert np.array_equal(again.eigenvalues, s40.eigenvalues)
    assert np.array_equal(again.U, s40.U)


def test_degenerate_spectrum_projection_is_basis_independent():
    # C6 has repeated eigenvalues; projectors onto eigenspaces are unique
    s = eigendecompose(cycle(6))
    lam = s.eigenvalues
    ref = np.linalg.eigh(laplacian(cycle(6)).toarray())[1]
    for value in np.unique(np.round(lam, 8)):
        idx = np.abs(lam - value) < 1e-8
        P = s.U[:, idx] @ s.U[:, idx].T
        Q = ref[:, idx] @ ref[:, idx].T
        assert np.allclose(P, Q, atol=1e-10)


def test_rejects_non_symmetric_variant():
    with pytest.raises(UnsupportedVariantError):
        eigendecompose(path(3), "random-walk")


def test_disconnected_needs_opt_in():
    g = Graph.from_edges(4, [0, 2], [1, 3])
    with pytest.raises(DisconnectedGraphError):
        eigendecompose(g)
    assert eigendecompose(g, allow_disconnected=True).zero_multiplicity() == 2
    parts = list(component_spectra(g))
    assert [v.tolist() for v, _ in parts] == [[0, 1], [2, 3]]
    assert all(np.allclose(sp.eigenvalues, [0, 2]) for _, sp in parts)


def test_zero_multiplicity_counts_components():
    rng = np.random.default_rng(12)
    for _ in range(25):
        g, m = random_multi_component(rng, max_n=80)
        assert eigendecompose(g, allow_disconnected=True).zero_multiplicity() == m


def test_normalized_spectrum_in_range():
    rng = np.random.default_rng(13)
    for _ in range(10):
        s = eigendecompose(random_connected(30, rng), "normalized")
        assert s.eigenvalues[0] >= -1e-10 and s.lambda_max <= 2 + 1e-10


# -- lambda_max bound --------------------------------------------------------------------

def test_power_iteration_and_bound():
    rng = np.random.default_rng(14)
    for _ in range(10):
        g = random_connected(int(rng.integers(5, 80)), rng)
        lmax = eigendecompose(g).lambda_max
        assert power_iteration_lambda_max(g) == pytest.approx(lmax, rel=1e-3)
        bound = lambda_max_bound(g)
        assert lmax <= bound <= 2 * g.degrees.max() + 1e-12
        nb = lambda_max_bound(g, "normalized")
        assert eigendecompose(g, "normalized").lambda_max <= nb <= 2.0


# -- Fourier pair ---------------------------------------------------------------------------

def test_gft_of_first_eigenvector(s40):
    e0 = np.zeros(s40.n)
    e0[0] = 1
    assert np.allclose(gft(s40, s40.U[:, 0]), e0, atol=1e-12)
    assert np.allclose(igft(s40, e0), 1 / math.sqrt(s40.n), atol=1e-12)


def test_round_trip_and_parseval(s40):
    rng = np.random.default_rng(15)
    F = rng.standard_normal((s40.n, 50))
    Fh = gft(s40, F)
    assert np.max(np.abs(igft(s40, Fh) - F)) <= 1e-10
    assert np.max(np.abs(gft(s40, igft(s40, F)) - F)) <= 1e-10
    assert np.allclose(np.linalg.norm(Fh, axis=0), np.linalg.norm(F, axis=0), atol=1e-10)


def test_gft_matches_explicit_sum(s40):
    f = np.random.default_rng(16).standard_normal(s40.n)
    explicit = np.array([sum(f[i] * s40.U[i, l] for i in range(s40.n)) for l in range(s40.n)])
    assert np.allclose(gft(s40, f), explicit, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**31))
def test_igft_linearity(s40, a, b, seed):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, s40.n))
    lhs = igft(s40, a * x + b * y)
    assert np.allclose(lhs, a * igft(s40, x) + b * igft(s40, y), atol=1e-12, rtol=0)


def test_igft_heat_kernel_is_concentrated_near_small_frequencies():
    s = eigendecompose(path(20))
    h = igft(s, np.exp(-5 * s.eigenvalues))
    # the inverse transform of e^{-5 lambda} is dominated by the constant mode
    assert abs(h.sum() - math.sqrt(20)) < 1e-10
    assert np.allclose(gft(s, h), np.exp(-5 * s.eigenvalues), atol=1e-12)


def test_length_checks(s40):
    with pytest.raises(LengthMismatchError):
        gft(s40, np.ones(s40.n + 1))
    with pytest.raises(LengthMismatchError):
        igft(s40, np.ones(3))
    with pytest.raises(ParameterError):
        gft(s40, np.full(s40.n, np.nan))


# -- zero crossings -------------------------------------------------------------------------

def test_zero_crossings_basic():
    assert zero_crossings(path(4), [1, 2, 3, 4]) == []
    assert zero_crossings(path(2), [1, -1]) == [(0, 1)]
    assert zero_crossings(path(3), [1, 0, -1]) == []


def test_zero_crossings_increase_with_frequency():
    g, _ = random_geometric_graph(64, 0.25, seed=3)
    s = eigendecompose(g)
    counts = [len(zero_crossings(g, s.U[:, l])) for l in range(g.n)]
    rho = spearmanr(np.arange(g.n), counts).statistic
    assert rho > 0.7


# -- discrete calculus ------------------------------------------------------------------------

def test_local_variation_p2():
    g = path(2)
    assert np.allclose(local_variation(g, [0, 1]), [1, 1])
    assert local_variation(g, [0, 1], 1) == 1.0
    assert edge_derivative(g, [0, 1], 0, 1) == 1.0
    assert edge_derivative(g, [0, 1], 1, 0) == -1.0


def test_local_variation_weighted_direct_formula():
    g = Graph.from_edges(3, [0, 0], [1, 2], [4.0, 9.0])
    f = np.array([1.0, 2.0, -1.0])
    assert local_variation(g, f, 0) == pytest.approx(math.sqrt(4 * 1 + 9 * 4))


def test_local_variation_constant_and_scaling(g40):
    assert np.all(local_variation(g40, np.full(g40.n, 3.7)) == 0)
    f = np.random.default_rng(17).standard_normal(g40.n)
    assert np.allclose(local_variation(g40, -2.5 * f), 2.5 * local_variation(g40, f))


def test_local_variation_rejects_bad_vertex():
    with pytest.raises(ParameterError):
        local_variation(path(2), [0, 1], 2)


def test_dirichlet_p2():
    g = path(2)
    assert dirichlet_form(g, [0, 1], 2) == pytest.approx(1.0)
    assert quadratic_form(g, [0, 1]) == pytest.approx(1.0)
    assert dirichlet_form(g, [0, 1], 1) == pytest.approx(2.0)
    with pytest.raises(ParameterError):
        dirichlet_form(g, [0, 1], 0.5)


@pytest.mark.parametrize("p", [1, 1.5, 2, 3])
def test_dirichlet_constant_is_zero(g40, p):
    assert dirichlet_form(g40, np.ones(g40.n), p) == 0


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, 40, elements=st.floats(-10, 10, allow_nan=False)))
def test_three_smoothness_computations_agree(g40, f):
    a, b, c = dirichlet_form(g40, f), quadratic_form(g40, f), edge_sum_form(g40, f)
    scale = max(1.0, abs(b))
    assert abs(a - b) <= 1e-10 * scale and abs(b - c) <= 1e-10 * scale
    assert laplacian_seminorm(g40, f) == pytest.approx(math.sqrt(max(a, 0)), abs=1e-10)


# -- min-max characterisation -----------------------------------------------------------------

def test_rayleigh_check_on_30_vertices():
    s = eigendecompose(random_connected(30, np.random.default_rng(18)))
    rep = rayleigh_check(s, samples=100)
    assert rep.ok
    assert rep.min_sampled_margin[1] >= -1e-8
    assert quadratic_form(s.graph, s.U[:, 0]) == pytest.approx(0, abs=1e-12)
    assert quadratic_form(s.graph, s.U[:, -1]) == pytest.approx(s.lambda_max, rel=1e-12)


def test_rayleigh_check_detects_wrong_eigenvalues():
    s = eigendecompose(path(5))
    fake = type(s)(s.graph, s.variant, s.eigenvalues + 0.1, s.eigenvectors)
    assert not rayleigh_check(fake).ok
