"""Signal processing on weighted undirected graphs.

Graph construction and Laplacians, the graph Fourier transform, spectral and
vertex-domain filtering, generalized translation/modulation/dilation, heat
diffusion, Tikhonov denoising, and two graph wavelet transforms with
localization measures.
"""

from .errors import GraphSignalError, NumericError, ValidationError
from .graph import (
    Graph,
    LaplacianVariant,
    build_gaussian_graph,
    build_knn_graph,
    connected_components,
    downsample_polarity,
    hop_distances,
    is_bipartite,
    laplacian,
)
from .denoise import GrayImage, denoise_image, gaussian_blur_baseline, tikhonov_denoise
from .generators import random_geometric_graph, random_regular_graph
from .kernels import SpectralKernel, bandpass, dilate, heat, lowpass, polynomial, tikhonov
from .operators import (
    convolve,
    filter_chebyshev,
    filter_exact,
    filter_vertex,
    heat_diffuse,
    modulate,
    translate,
)
from .spectral import Spectrum, dirichlet_form, eigendecompose, gft, igft, local_variation, zero_crossings
from .wavelets import (
    ckwt_atoms,
    ckwt_coefficients,
    sgwt_atom_sets,
    sgwt_scales,
    sgwt_transform,
    spatial_spread,
    spectral_spread,
)

__version__ = "0.1.0"
