import math

import numpy as np
import pytest

from graphsig.denoise import (
    GrayImage,
    add_gaussian_noise,
    build_semilocal_image_graph,
    checkerboard_image,
    denoise_image,
    edge_mask,
    gaussian_blur_baseline,
    gradient_image,
    mse,
    psnr,
    tikhonov_denoise,
)
from graphsig.errors import LengthMismatchError, NumericError, ParameterError
from graphsig.graph import laplacian
from graphsig.spectral import dirichlet_form, eigendecompose

from _graphs import random_connected


def dense_image_laplacian(P, theta):
    """Independent 8-neighbour Laplacian built by looping over pixels."""
    h, w = P.shape
    n = h * w
    W = np.zeros((n, n))
    for r in range(h):
        for c in range(w):
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    rr, cc = r + dr, c + dc
                    if (dr, dc) != (0, 0) and 0 <= rr < h and 0 <= cc < w:
                        d = P[r, c] - P[rr, cc]
                        W[r * w + c, rr * w + cc] = math.exp(-d * d / (2 * theta ** 2))
    return np.diag(W.sum(axis=1)) - W


@pytest.fixture(scope="module")
def g200():
    return random_connected(200, np.random.default_rng(41), p=0.02)


@pytest.fixture(scope="module")
def y200():
    return np.random.default_rng(42).standard_normal(200)


# -- Tikhonov --------------------------------------------------------------------------

def test_modes_agree(g200, y200):
    s = eigendecompose(g200)
    a = tikhonov_denoise(g200, y200, 10.0, "spectral", spectrum=s)
    b = tikhonov_denoise(g200, y200, 10.0, "direct")
    c = tikhonov_denoise(g200, y200, 10.0, "cg")
    assert np.max(np.abs(a - b)) <= 1e-8
    assert np.max(np.abs(c - b)) <= 1e-6


def test_first_order_optimality(g200, y200):
    f = tikhonov_denoise(g200, y200, 10.0)
    resid = f + 10.0 * (laplacian(g200) @ f) - y200
    assert np.max(np.abs(resid)) <= 1e-8


def test_limits(g200, y200):
    assert np.max(np.abs(tikhonov_denoise(g200, y200, 1e-12) - y200)) <= 1e-8
    c = np.full(200, 0.37)
    for gamma in (0.1, 10.0, 1e4):
        assert np.max(np.abs(tikhonov_denoise(g200, c, gamma) - c)) <= 1e-12


def test_smoothing_grows_with_gamma(g200, y200):
    dist = []
    for gamma in (0.01, 0.1, 1.0, 10.0, 100.0):
        f = tikhonov_denoise(g200, y200, gamma)
        assert dirichlet_form(g200, f) <= dirichlet_form(g200, y200)
        dist.append(np.linalg.norm(f - y200))
    assert all(a <= b for a, b in zip(dist, dist[1:]))


def test_tikhonov_errors(g200, y200):
    with pytest.raises(ParameterError):
        tikhonov_denoise(g200, y200, 0.0)
    with pytest.raises(ParameterError):
        tikhonov_denoise(g200, y200, 1.0, mode="qr")
    with pytest.raises(LengthMismatchError):
        tikhonov_denoise(g200, y200[:10], 1.0)
    with pytest.raises(NumericError):
        tikhonov_denoise(g200, y200, 1e4, mode="cg", maxiter=2)


# -- image graph --------------------------------------------------------------------------

def test_two_pixel_graph():
    g = build_semilocal_image_graph(GrayImage([[0.0, 0.1]]), theta=0.1)
    assert g.num_edges == 1
    assert g.W[0, 1] == pytest.approx(math.exp(-0.5), abs=1e-15)


def test_lattice_structure():
    g = build_semilocal_image_graph(GrayImage(np.full((5, 6), 0.4)))
    deg = np.diff(g.W.indptr).reshape(5, 6)
    assert deg[2, 3] == 8 and deg[0, 0] == 3 and deg[0, 3] == 5
    assert np.all(g.W.data == 1.0)


def test_image_laplacian_matches_loop_oracle():
    P = np.random.default_rng(43).random((7, 5))
    g = build_semilocal_image_graph(GrayImage(P), theta=0.3)
    assert np.allclose(laplacian(g).toarray(), dense_image_laplacian(P, 0.3), atol=1e-15)


def test_image_graph_errors():
    with pytest.raises(ParameterError):
        build_semilocal_image_graph(GrayImage([[0.5]]))
    with pytest.raises(ParameterError):
        build_semilocal_image_graph(GrayImage([[0.5, 0.2]]), theta=0)


# -- Gaussian baseline ---------------------------------------------------------------------

@pytest.mark.parametrize("sigma", [1.5, 3.5])
def test_blur_impulse_is_sampled_gaussian(sigma):
    r = math.ceil(3 * sigma)
    size = 2 * r + 1 + 10
    P = np.zeros((size, size))
    c = size // 2
    P[c, c] = 1.0
    out = gaussian_blur_baseline(GrayImage(P), sigma).pixels
    x = np.arange(-r, r + 1)
    G = np.exp(-(x[:, None] ** 2 + x[None, :] ** 2) / (2 * sigma ** 2))
    G /= G.sum()
    assert np.max(np.abs(out[c - r:c + r + 1, c - r:c + r + 1] - G)) <= 1e-10
    assert np.all(out[: c - r] == 0)


def test_blur_trivial_cases():
    P = np.random.default_rng(44).random((9, 9))
    assert np.max(np.abs(gaussian_blur_baseline(GrayImage(P), 1e-6).pixels - P)) <= 1e-6
    flat = np.full((8, 8), 0.3)
    assert np.allclose(gaussian_blur_baseline(GrayImage(flat), 3.5).pixels, flat, atol=1e-15)
    with pytest.raises(ParameterError):
        gaussian_blur_baseline(GrayImage(flat), 0)


# -- pipeline -------------------------------------------------------------------------------

def test_pipeline_matches_dense_oracle():
    clean = checkerboard_image(12, 4)
    noisy = add_gaussian_noise(clean, 0.1, seed=3)
    L = dense_image_laplacian(noisy.pixels, 0.1)
    f = np.linalg.solve(np.eye(144) + 10 * L, noisy.ravel())
    out = denoise_image(noisy, gamma=10, theta=0.1)
    assert np.max(np.abs(out.pixels - np.clip(f, 0, 1).reshape(12, 12))) <= 1e-10


def test_gentle_gradient_passes_through():
    img = gradient_image(64, 0.4, 0.6)
    assert psnr(denoise_image(img), img) >= 40


def test_full_range_gradient_shrinks_at_the_border():
    img = gradient_image(64, 0.1, 0.9)
    out = denoise_image(img)
    # frozen from a dense solve with the pixel-loop Laplacian above
    assert psnr(out, img) == pytest.approx(33.970061, abs=1e-3)
    # L annihilates the ramp away from the border; the error decays towards the middle
    err = np.abs(out.pixels - img.pixels).mean(axis=0)[:31]
    assert np.all(np.diff(err) < 0)
    assert err[0] > 0.05 and err[-1] < 2e-4


def test_denoising_checkerboard_beats_noise_and_blur():
    clean = checkerboard_image()
    noisy = add_gaussian_noise(clean, 0.1, seed=0)
    out = denoise_image(noisy)
    blur = gaussian_blur_baseline(noisy, 3.5)
    mask = edge_mask(clean)
    assert mse(out, clean) < mse(noisy, clean)
    assert mse(out, clean, mask) < mse(blur, clean, mask)
    again = denoise_image(noisy)
    assert np.array_equal(out.pixels, again.pixels)


def test_cg_pipeline_agrees_with_direct():
    noisy = add_gaussian_noise(checkerboard_image(32, 8), 0.1, seed=1)
    a = denoise_image(noisy, mode="direct").pixels
    b = denoise_image(noisy, mode="cg").pixels
    assert np.max(np.abs(a - b)) <= 1e-6


# -- metrics and images ------------------------------------------------------------------------

def test_metrics():
    a, b = np.zeros((2, 2)), np.full((2, 2), 0.1)
    assert mse(a, b) == pytest.approx(0.01)
    assert psnr(a, b) == pytest.approx(20.0)
    assert psnr(a, a) == math.inf
    assert mse(a, b, np.array([[True, False], [False, False]])) == pytest.approx(0.01)


def test_edge_mask():
    img = checkerboard_image(8, 4)
    m = edge_mask(img, radius=0)
    assert m[0, 3] and m[0, 4] and not m[0, 0]
    assert edge_mask(img, radius=2)[0, 1]


def test_gray_image_validation():
    with pytest.raises(ParameterError):
        GrayImage(np.zeros(4))
    with pytest.raises(ParameterError):
        GrayImage([[np.nan, 0]])
    assert GrayImage([[-0.2, 1.3]]).clamped().pixels.tolist() == [[0.0, 1.0]]
