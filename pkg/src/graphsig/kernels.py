"""Spectral kernels: real functions of a nonnegative eigenvalue argument."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import KernelDomainError, ParameterError

# eigenvalues of PSD matrices can come back as -1e-15
_NEG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralKernel:
    """A transfer function ``lambda -> value`` with a declared domain ``[0, upper]``.

    ``kind`` tags closed forms (``heat``, ``tikhonov``, ``polynomial``,
    ``table``, ``bandpass``, ``lowpass``, ``custom``) and ``params`` holds their
    parameters. Dilated kernels keep a reference to their base so repeated
    dilations compose into a single scale.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    upper: float = math.inf

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if np.any(lam < -_NEG_TOL) or np.any(lam > self.upper * (1 + 1e-12)):
            raise KernelDomainError(
                f"{self.kind} kernel evaluated outside its domain [0, {self.upper:g}]"
            )
        out = np.asarray(self.fn(np.clip(lam, 0.0, None)), dtype=float)
        if not np.all(np.isfinite(out)):
            raise KernelDomainError(f"{self.kind} kernel produced non-finite values")
        return out

    def __repr__(self):
        return f"SpectralKernel(kind={self.kind!r}, params={self.params!r})"


def heat(tau: float = 1.0) -> SpectralKernel:
    if tau < 0:
        raise ParameterError(f"tau must be nonnegative, got {tau}")
    return SpectralKernel(lambda x: np.exp(-tau * x), "heat", {"tau": tau})


def tikhonov(gamma: float) -> SpectralKernel:
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return SpectralKernel(lambda x: 1.0 / (1.0 + gamma * x), "tikhonov", {"gamma": gamma})


def polynomial(coeffs) -> SpectralKernel:
    """``sum_k coeffs[k] * lambda**k`` (lowest order first)."""
    c = tuple(float(a) for a in coeffs)
    if not c:
        raise ParameterError("polynomial kernel needs at least one coefficient")
    return SpectralKernel(
        lambda x: np.polynomial.polynomial.polyval(x, c), "polynomial", {"coeffs": c}
    )


def identity() -> SpectralKernel:
    return polynomial([1.0])


def table(lams, values) -> SpectralKernel:
    """Piecewise-linear kernel through ``(lams, values)``; no extrapolation."""
    x = np.asarray(lams, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise ParameterError("table kernel needs matching 1-D arrays of length >= 2")
    if np.any(np.diff(x) <= 0):
        raise ParameterError("table abscissae must be strictly increasing")
    if x[0] > 0:
        raise ParameterError("table kernel must start at lambda <= 0")
    return SpectralKernel(
        lambda v: np.interp(v, x, y), "table", {"lams": x, "values": y}, upper=float(x[-1])
    )


def bandpass() -> SpectralKernel:
    """Default wavelet generator ``lambda * exp(-lambda)``: zero at 0 and at infinity."""
    return SpectralKernel(lambda x: x * np.exp(-x), "bandpass", {})


def lowpass(cutoff: float = 1.0) -> SpectralKernel:
    """Default scaling kernel ``exp(-(lambda / cutoff)**4)``."""
    if not cutoff > 0:
        raise ParameterError(f"cutoff must be positive, got {cutoff}")
    return SpectralKernel(lambda x: np.exp(-((x / cutoff) ** 4)), "lowpass", {"cutoff": cutoff})


def dilate(k: SpectralKernel, s: float, lambda_max: float | None = None) -> SpectralKernel:
    """Kernel ``lambda -> k(s * lambda)``.

    With ``lambda_max`` given, a bounded (table) kernel is checked to cover
    ``[0, s * lambda_max]`` up front instead of failing at evaluation time.
    """
    if not s > 0:
        raise ParameterError(f"dilation scale must be positive, got {s}")
    if k.kind == "dilated":
        base, s = k.params["base"], k.params["scale"] * s
    else:
        base = k
    if lambda_max is not None and s * lambda_max > base.upper * (1 + 1e-12):
        raise KernelDomainError(
            f"{base.kind} kernel covers [0, {base.upper:g}] but dilation needs [0, {s * lambda_max:g}]"
        )
    fn = base.fn
    return SpectralKernel(lambda x: fn(s * x), "dilated", {"base": base, "scale": s}, base.upper / s)


def from_name(name: str, **params) -> SpectralKernel:
    """Build a kernel from a name and keyword parameters (used by the CLI)."""
    builders = {
        "heat": lambda: heat(params.get("tau", 1.0)),
        "tikhonov": lambda: tikhonov(params.get("gamma", 1.0)),
        "polynomial": lambda: polynomial(params["coeffs"]),
        "identity": identity,
        "bandpass": bandpass,
        "lowpass": lambda: lowpass(params.get("cutoff", 1.0)),
    }
    if name not in builders:
        raise ParameterError(f"unknown kernel {name!r}; choose from {sorted(builders)}")
    try:
        return builders[name]()
    except KeyError as exc:
        raise ParameterError(f"kernel {name!r} requires parameter {exc.args[0]!r}") from None


KERNEL_NAMES = ("heat", "tikhonov", "polynomial", "identity", "bandpass", "lowpass")
