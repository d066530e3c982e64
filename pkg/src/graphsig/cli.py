"""Command-line front end.

Exit status: 0 on success, 1 on validation errors (bad arguments, malformed
files, contract violations), 2 on numerical failures.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys

import numpy as np

from . import io
from .denoise import GrayImage, denoise_image, gaussian_blur_baseline, mse, psnr
from .errors import NumericError, ParameterError, ValidationError
from .experiments import spread_bench
from .generators import random_geometric_graph, random_regular_graph
from .graph import LaplacianVariant, build_gaussian_graph, build_knn_graph, downsample_polarity
from .kernels import KERNEL_NAMES, from_name
from .operators import DEFAULT_CHEBYSHEV_ORDER, FilterOperator, heat_diffuse, translate
from .spectral import eigendecompose, gft, igft
from .wavelets import DEFAULT_MOTHER, MOTHER_WAVELETS, ckwt_coefficients, sgwt_scales, sgwt_transform

FORMATS = """\
file formats:
  edge list    first line "N M", then M lines "i j w" (0-based, whitespace separated)
  point cloud  first line "N D", then N lines of D floats
  signal       one float per line, N lines
  CSV          header row, LF line endings, floats written with %.12g
Use "-" as an output path to write to standard output."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def _sub(subparsers, name, help_, description):
    return subparsers.add_parser(
        name, help=help_, description=description, epilog=FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )


def _add_kernel_args(p):
    p.add_argument("--kernel", required=True, help=f"kernel name: {', '.join(KERNEL_NAMES)}")
    p.add_argument("--tau", type=float, default=1.0, help="heat kernel exp(-tau*lambda); tau in inverse eigenvalue units")
    p.add_argument("--gamma", type=float, default=1.0, help="tikhonov kernel 1/(1+gamma*lambda)")
    p.add_argument("--coeffs", help="polynomial kernel coefficients a0,a1,... (lowest order first)")
    p.add_argument("--cutoff", type=float, default=1.0, help="lowpass kernel exp(-(lambda/cutoff)^4)")


def _kernel(args):
    params = {"tau": args.tau, "gamma": args.gamma, "cutoff": args.cutoff}
    if args.coeffs is not None:
        params["coeffs"] = _floats(args.coeffs)
    return from_name(args.kernel, **params)


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
        except ValueError:
            raise ParameterError(f"expected integers or ranges like 1-10, got {text!r}") from None
    return out


def _emit(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        io.atomic_write(path, text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphsig", description="Signal processing on weighted undirected graphs.",
                     epilog=FORMATS, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = _sub(sub, "build-graph", "construct a graph and write an edge list",
             "Build a graph from a point cloud (Gaussian-thresholded or k-NN) or from a "
             "seeded random model. Gaussian weights are exp(-dist^2/(2 theta^2)) with "
             "Euclidean dist in the point coordinates' units; --kappa 0 disables the threshold.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="point-cloud file")
    src.add_argument("--random-regular", nargs=2, type=int, metavar=("N", "D"))
    src.add_argument("--geometric", nargs=2, metavar=("N", "RADIUS"), help="unit-square geometric graph")
    p.add_argument("--theta", type=float, help="Gaussian kernel width (same units as the points)")
    p.add_argument("--kappa", type=float, default=0.0, help="distance threshold; 0 disables")
    p.add_argument("--knn", type=int, help="use a k-nearest-neighbour graph instead of thresholding")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-")

    p = _sub(sub, "spectrum", "eigenvalues of a Laplacian",
             "Full eigendecomposition. Writes CSV (ell, lambda) with eigenvalues ascending "
             "(units of edge weight); --dump-u writes the eigenvector matrix as CSV, one row per vertex.")
    p.add_argument("--graph", required=True)
    p.add_argument("--variant", default="combinatorial", choices=["combinatorial", "normalized"])
    p.add_argument("--dump-u")
    p.add_argument("--output", default="-")

    p = _sub(sub, "gft", "graph Fourier transform",
             "Forward (default) or inverse graph Fourier transform. Coefficient l pairs with "
             "eigenvalue l of the spectrum (ascending). Eigenvectors are signed so their first "
             "non-negligible entry is positive.")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--variant", default="combinatorial", choices=["combinatorial", "normalized"])
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--output", default="-")

    p = _sub(sub, "filter", "spectral filtering",
             "Apply kernel(L) to a signal, exactly in the eigenbasis or by a Chebyshev "
             "expansion (sparse products only, order-hop local).")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    _add_kernel_args(p)
    p.add_argument("--mode", default="exact", choices=["exact", "chebyshev"])
    p.add_argument("--order", type=int, default=DEFAULT_CHEBYSHEV_ORDER)
    p.add_argument("--output", default="-")

    p = _sub(sub, "translate", "generalized translation of a kernel",
             "Write sqrt(N) * kernel(L) delta_n, the kernel translated to vertex n (0-based).")
    p.add_argument("--graph", required=True)
    _add_kernel_args(p)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--output", default="-")

    p = _sub(sub, "heat", "heat diffusion exp(-tau L) f",
             "Diffuse a signal for time tau (inverse edge-weight units); tau=0 is the identity.")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--output", default="-")

    p = _sub(sub, "denoise", "Tikhonov denoising of a PGM image",
             "Build an 8-neighbour pixel graph with Gaussian weights on intensity differences "
             "(pixels mapped to [0,1] as v/255) and solve (I + gamma L) f = y; output clamped "
             "to [0,1]. Prints a CSV report (method, mse, psnr) against --clean when given, "
             "else against the input. PGM P2 and P5 with maxval <= 255 are accepted.")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--gamma", type=float, default=10.0)
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--solver", default="direct", choices=["direct", "cg"])
    p.add_argument("--baseline", choices=["gaussian"])
    p.add_argument("--sigma", type=float, default=1.5, help="Gaussian baseline std. dev. in pixels")
    p.add_argument("--baseline-output")
    p.add_argument("--clean", help="reference PGM for MSE/PSNR")
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    p = _sub(sub, "sgwt", "spectral graph wavelet coefficients",
             "CSV (scale, center, value). scale is the dilation t_k (eigenvalue^-1 units); "
             "scale 0 denotes the low-pass scaling kernel.")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--scales", help="comma-separated t values (default: log-spaced)")
    p.add_argument("--n-scales", type=int, default=5)
    p.add_argument("--lowpass-cutoff", type=float, default=1.0)
    p.add_argument("--mode", default="exact", choices=["exact", "chebyshev"])
    p.add_argument("--order", type=int, default=50)
    p.add_argument("--output", default="-")

    p = _sub(sub, "ckwt", "hop-shell graph wavelet coefficients",
             "CSV (scale, center, value); scale is the hop radius k.")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--scales", default="1-10", help="e.g. 1-10 or 1,2,4")
    p.add_argument("--mother", default=DEFAULT_MOTHER, choices=sorted(MOTHER_WAVELETS))
    p.add_argument("--output", default="-")

    p = _sub(sub, "spread-bench", "CKWT vs SGWT localization on random regular graphs",
             "CSV (scale, kind, spatial, spectral, variant) averaged over instances. spatial is "
             "in squared hops, spectral in eigenvalue units. For SGWT rows, scale is the index "
             "(0 = scaling kernel, finest wavelet first); for CKWT it is the hop radius.")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--ckwt-scales", default="1-5")
    p.add_argument("--n-scales", type=int, default=5)
    p.add_argument("--output", default="-")

    p = _sub(sub, "downsample", "split vertices by the sign of the top Laplacian eigenvector",
             "CSV (vertex, kept). Ambiguous splits (repeated top eigenvalue or exact zeros) "
             "are reported on standard error.")
    p.add_argument("--graph", required=True)
    p.add_argument("--output", default="-")
    return parser


# -- commands --------------------------------------------------------------------------

def _cmd_build_graph(a):
    if a.points:
        X = io.read_points(a.points)
        if a.knn is not None:
            g = build_knn_graph(X, a.knn, a.theta)
        else:
            if a.theta is None:
                raise ParameterError("--theta is required for Gaussian graphs")
            g = build_gaussian_graph(X, a.theta, a.kappa)
    elif a.random_regular:
        g = random_regular_graph(*a.random_regular, seed=a.seed)
    else:
        try:
            n, r = int(a.geometric[0]), float(a.geometric[1])
        except ValueError:
            raise ParameterError("--geometric expects N RADIUS") from None
        g, _ = random_geometric_graph(n, r, seed=a.seed)
    if a.output == "-":
        i, j, w = g.edges()
        sys.stdout.write(f"{g.n} {len(i)}\n" + "".join(f"{x} {y} {io.fmt(v)}\n" for x, y, v in zip(i, j, w)))
    else:
        io.write_edge_list(a.output, g)


def _spectrum(a):
    g = io.read_edge_list(a.graph)
    return g, eigendecompose(g, getattr(a, "variant", "combinatorial"))


def _cmd_spectrum(a):
    g, s = _spectrum(a)
    _emit(a.output, io.format_csv(["ell", "lambda"], [(l, float(v)) for l, v in enumerate(s.eigenvalues)]))
    if a.dump_u:
        U = s.eigenvectors
        io.write_csv(a.dump_u, [f"u{l}" for l in range(U.shape[1])], [list(map(float, r)) for r in U])


def _cmd_gft(a):
    g, s = _spectrum(a)
    f = io.read_signal(a.signal, g.n)
    _emit(a.output, io.format_signal(igft(s, f) if a.inverse else gft(s, f)))


def _cmd_filter(a):
    g = io.read_edge_list(a.graph)
    f = io.read_signal(a.signal, g.n)
    k = _kernel(a)
    s = eigendecompose(g) if a.mode == "exact" else None
    op = FilterOperator(g, k, a.mode, a.order, s)
    _emit(a.output, io.format_signal(op(f)))


def _cmd_translate(a):
    g, s = _spectrum(a)
    _emit(a.output, io.format_signal(translate(s, _kernel(a), a.vertex)))


def _cmd_heat(a):
    g, s = _spectrum(a)
    f = io.read_signal(a.signal, g.n)
    _emit(a.output, io.format_signal(heat_diffuse(s, f, a.tau)))


def _read_image(path):
    try:
        return GrayImage(io.read_pgm(path))
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc


def _cmd_denoise(a):
    noisy = _read_image(a.input)
    ref = _read_image(a.clean) if a.clean else noisy
    rows = [("input", mse(noisy, ref), psnr(noisy, ref))]
    out = denoise_image(noisy, a.gamma, a.theta, a.kappa, mode=a.solver)
    rows.append(("graph", mse(out, ref), psnr(out, ref)))
    if a.output:
        io.write_pgm(a.output, out.pixels, binary=not a.ascii)
    if a.baseline == "gaussian":
        blur = gaussian_blur_baseline(noisy, a.sigma).clamped()
        rows.append((f"gaussian-{io.fmt(a.sigma)}", mse(blur, ref), psnr(blur, ref)))
        if a.baseline_output:
            io.write_pgm(a.baseline_output, blur.pixels, binary=not a.ascii)
    sys.stdout.write(io.format_csv(["method", "mse", "psnr"], rows))


def _cmd_sgwt(a):
    from .kernels import lowpass

    g = io.read_edge_list(a.graph)
    f = io.read_signal(a.signal, g.n)
    if a.mode == "exact":
        s = eigendecompose(g)
        upper = s.lambda_max
    else:
        from .spectral import lambda_max_bound

        s, upper = g, lambda_max_bound(g)
    scales = np.array(_floats(a.scales)) if a.scales else sgwt_scales(upper, a.n_scales)
    C = sgwt_transform(s, f, scales, low=lowpass(a.lowpass_cutoff), mode=a.mode, order=a.order, upper=upper)
    labels = [0.0] + [float(t) for t in scales]
    rows = [(io.fmt(labels[c]), i, float(C[i, c])) for c in range(C.shape[1]) for i in range(g.n)]
    _emit(a.output, io.format_csv(["scale", "center", "value"], rows))


def _cmd_ckwt(a):
    g = io.read_edge_list(a.graph)
    f = io.read_signal(a.signal, g.n)
    scales = _ints(a.scales)
    C = ckwt_coefficients(g, f, scales, a.mother)
    rows = [(k, i, float(C[i, c])) for c, k in enumerate(scales) for i in range(g.n)]
    _emit(a.output, io.format_csv(["scale", "center", "value"], rows))


def _cmd_spread_bench(a):
    rep = spread_bench(a.n, a.d, a.instances, a.seed, _ints(a.ckwt_scales), a.n_scales)
    rows = [(scale, kind, spatial, spectral, rep.variant.value) for scale, kind, spatial, spectral in rep.rows]
    _emit(a.output, io.format_csv(["scale", "kind", "spatial", "spectral", "variant"], rows))


def _cmd_downsample(a):
    g = io.read_edge_list(a.graph)
    split = downsample_polarity(g)
    kept = np.zeros(g.n, dtype=int)
    kept[split.kept] = 1
    if split.repeated_lambda_max:
        print("warning: largest eigenvalue is repeated; split depends on the eigenbasis", file=sys.stderr)
    if split.zero_entries.size:
        print(f"warning: vertices {split.zero_entries.tolist()} have zero polarity; kept", file=sys.stderr)
    _emit(a.output, io.format_csv(["vertex", "kept"], [(i, int(k)) for i, k in enumerate(kept)]))


COMMANDS = {
    "build-graph": _cmd_build_graph,
    "spectrum": _cmd_spectrum,
    "gft": _cmd_gft,
    "filter": _cmd_filter,
    "translate": _cmd_translate,
    "heat": _cmd_heat,
    "denoise": _cmd_denoise,
    "sgwt": _cmd_sgwt,
    "ckwt": _cmd_ckwt,
    "spread-bench": _cmd_spread_bench,
    "downsample": _cmd_downsample,
}


def _thread_limit():
    raw = os.environ.get("GRAPHSIG_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"GRAPHSIG_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ParameterError("GRAPHSIG_THREADS must be >= 0")
    if n == 0:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        with _thread_limit():
            COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())
