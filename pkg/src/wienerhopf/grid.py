"""Uniform grids, discrete Fourier transforms and cardinal (sinc) series.

Conventions used throughout the package::

    F(w) = integral f(x) exp(-i w x) dx
    f(x) = (1 / 2 pi) integral F(w) exp(i w x) dw

so a function is positive definite when ``F >= 0``, and a function whose
transform lives on ``[0, inf)`` extends holomorphically to the upper
half-plane.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import wofz

from . import kernels

DEFAULT_H = 0.25
DEFAULT_N_HALF = 512


@dataclass(frozen=True)
class Grid:
    """Odd, centred grid ``x_k = k h`` for ``k = -n_half .. n_half``."""

    h: float = DEFAULT_H
    n_half: int = DEFAULT_N_HALF

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ValueError(f"grid spacing must be positive, got {self.h!r}")
        if int(self.n_half) != self.n_half or self.n_half < 1:
            raise ValueError(f"n_half must be an integer >= 1, got {self.n_half!r}")
        object.__setattr__(self, "n_half", int(self.n_half))
        object.__setattr__(self, "h", float(self.h))

    @property
    def size(self) -> int:
        return 2 * self.n_half + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n_half, self.n_half + 1)

    @property
    def points(self) -> np.ndarray:
        return self.indices * self.h

    @property
    def extent(self) -> float:
        """Largest sample abscissa, ``n_half * h``."""
        return self.n_half * self.h

    @property
    def d_omega(self) -> float:
        return 2.0 * math.pi / (self.size * self.h)

    @property
    def omega(self) -> np.ndarray:
        """Frequency grid induced by the DFT; symmetric, ``|w| < pi / h``."""
        return self.indices * self.d_omega

    def sample(self, func: Callable, hermitian: bool = False) -> "SampledFunction":
        return SampledFunction(self, np.asarray(func(self.points), dtype=complex), hermitian=hermitian)

    def index_of(self, x, rtol: float = 1e-9):
        """Node index nearest to ``x`` if ``x`` is a node, else ``None``."""
        k = round(x / self.h)
        if abs(x - k * self.h) <= rtol * self.h and abs(k) <= self.n_half:
            return int(k)
        return None


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sampled values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.hermitian:
            scale = max(1.0, float(np.abs(v).max()))
            if self.hermitian_defect() > 1e-10 * scale:
                raise ValueError("samples flagged hermitian but f(-x) != conj(f(x))")

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    @property
    def at_zero(self) -> complex:
        return complex(self.values[self.grid.n_half])

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())

    def hermitian_defect(self) -> float:
        """``max |f(-x) - conj f(x)|`` over the grid."""
        return float(np.abs(self.values[::-1] - np.conj(self.values)).max())

    def with_values(self, values, hermitian: bool = False) -> "SampledFunction":
        return SampledFunction(self.grid, values, hermitian=hermitian)

    def at(self, x):
        """Evaluate at arbitrary points: exact at nodes, cardinal series elsewhere."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(x) > self.grid.extent * (1 + 1e-12)):
            raise ValueError("evaluation point outside the sampled range")
        k = np.rint(x / self.grid.h)
        on_node = np.abs(x - k * self.grid.h) <= 1e-9 * self.grid.h
        out = np.empty(x.shape, dtype=complex)
        out[on_node] = self.values[k[on_node].astype(int) + self.grid.n_half]
        if np.any(~on_node):
            out[~on_node] = kernels.cardinal_series(
                self.values, self.grid.h, -self.grid.n_half, x[~on_node], kernels.SINC
            )
        return out

    def _other(self, other):
        if isinstance(other, SampledFunction):
            if other.grid != self.grid:
                raise ValueError("sampled functions live on different grids")
            return other.values, other.hermitian
        return other, isinstance(other, (int, float)) and not isinstance(other, bool)

    def __add__(self, other):
        v, herm = self._other(other)
        return SampledFunction(self.grid, self.values + v, hermitian=self.hermitian and herm)

    __radd__ = __add__

    def __sub__(self, other):
        v, herm = self._other(other)
        return SampledFunction(self.grid, self.values - v, hermitian=self.hermitian and herm)

    def __mul__(self, other):
        v, herm = self._other(other)
        return SampledFunction(self.grid, self.values * v, hermitian=self.hermitian and herm)

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values, hermitian=self.hermitian)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Transform values on a symmetric frequency grid.

    When ``source`` is set, :meth:`evaluate` gives the trapezoidal transform
    of the source samples at any frequency, not just on the grid.
    """

    omega: np.ndarray
    values: np.ndarray
    source: SampledFunction | None = None

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        v = np.asarray(self.values, dtype=np.complex128)
        if w.shape != v.shape or w.ndim != 1 or w.size % 2 == 0:
            raise ValueError("omega and values must be 1-d arrays of the same odd length")
        if not np.allclose(w, -w[::-1], rtol=0, atol=1e-12 * max(1.0, abs(w[-1]))):
            raise ValueError("frequency grid must be symmetric about 0")
        if not np.all(np.isfinite(v)):
            raise ValueError("spectral values must be finite")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "values", v)

    @property
    def d_omega(self) -> float:
        return float(self.omega[1] - self.omega[0])

    @property
    def omega_max(self) -> float:
        return float(self.omega[-1])

    def evaluate(self, omega) -> np.ndarray:
        if self.source is None:
            raise ValueError("off-grid evaluation needs the source samples")
        f = self.source
        return f.grid.h * kernels.fourier_sum(f.values, f.x, np.atleast_1d(omega), -1.0)


def forward_ft(f: SampledFunction) -> SpectralFunction:
    """Approximate the continuous transform of ``f`` by a centred DFT.

    The sum ``h * sum_k f(x_k) exp(-i w_j x_k)`` is the trapezoid rule for
    the periodic extension of the samples, exact in the sense that
    :func:`inverse_ft` undoes it to round-off.
    """
    if not np.all(np.isfinite(f.values)):
        raise ValueError("non-finite samples")
    g = f.grid
    F = g.h * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(f.values)))
    return SpectralFunction(g.omega, F, source=f)


def inverse_ft(F: SpectralFunction, hermitian: bool = False) -> SampledFunction:
    """Inverse of :func:`forward_ft`; the x-grid is inferred from the ω-grid."""
    if not np.all(np.isfinite(F.values)):
        raise ValueError("non-finite spectral values")
    size = F.omega.size
    if F.source is not None and F.source.grid.size == size:
        grid = F.source.grid
    else:
        grid = Grid(2.0 * math.pi / (size * F.d_omega), (size - 1) // 2)
    v = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(F.values))) / grid.h
    return SampledFunction(grid, v, hermitian=hermitian)


def roundtrip_error(f: SampledFunction) -> tuple[float, float]:
    """Return ``(residual, bound)`` for ``inverse_ft(forward_ft(f))``.

    The bound is a conservative FFT round-off estimate,
    ``8 eps log2(M) ||f||_inf``.
    """
    back = inverse_ft(forward_ft(f))
    residual = float(np.abs(back.values - f.values).max())
    bound = 8.0 * np.finfo(float).eps * math.log2(f.grid.size) * max(f.sup_norm(), np.finfo(float).tiny)
    return residual, bound


def cardinal_interpolate(f: SampledFunction, x, n_terms: int | None = None):
    """Shannon-Whittaker partial sum over nodes ``|n| <= n_terms``.

    Returns a complex scalar for scalar ``x``, else an array.
    """
    n_half = f.grid.n_half
    if n_terms is None:
        n_terms = n_half
    if not 0 <= n_terms <= n_half:
        raise ValueError(f"n_terms must lie in [0, {n_half}]")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    vals = f.values[n_half - n_terms:n_half + n_terms + 1]
    out = kernels.cardinal_series(vals, f.grid.h, -n_terms, xs, kernels.SINC)
    # at a node the series is the sample itself; skip the sin(pi k) round-off
    k = np.rint(xs / f.grid.h)
    node = (np.abs(xs - k * f.grid.h) <= 1e-12 * f.grid.h) & (np.abs(k) <= n_terms)
    out[node] = vals[k[node].astype(int) + n_terms]
    return complex(out[0]) if scalar else out


def series_tail_bound(f: SampledFunction, x, n_terms: int) -> float:
    """Bound on the sampled terms dropped by a partial sum of ``n_terms``.

    Uses ``|sinc(t)| <= min(1, 1 / (pi |t|))``; samples beyond the grid are
    not seen and must be covered by the caller.
    """
    g = f.grid
    n = g.indices
    dropped = np.abs(n) > n_terms
    if not np.any(dropped):
        return 0.0
    xs = np.atleast_1d(np.asarray(x, dtype=float)) / g.h
    t = np.abs(xs[:, None] - n[None, dropped])
    k = np.minimum(1.0, 1.0 / (math.pi * np.maximum(t, 1e-300)))
    return float((k * np.abs(f.values[dropped])[None, :]).sum(axis=1).max())


def truncation_error_bound(F: SpectralFunction, h: float, tail: float | Callable[[float], float] | None = None) -> float:
    """Aliasing bound ``(1/pi) * integral_{|w| >= pi/h} |F(w)| dw``.

    The part of the band that ``F`` covers is integrated with Gauss-Legendre
    panels (using the source samples when available, so the integrand is
    smooth and evaluated exactly off-grid). Anything beyond ``F.omega_max``
    must come from ``tail``: either a number (already the contribution of
    ``|w| > omega_max`` to the integral) or a callable taking ``omega_max``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    a = math.pi / h
    b = F.omega_max
    total = 0.0
    if a < b:
        nodes, weights = np.polynomial.legendre.leggauss(24)
        n_panels = max(1, int(math.ceil((b - a) / (4 * F.d_omega))))
        edges = np.linspace(a, b, n_panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        w = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        wts = (half[:, None] * weights[None, :]).ravel()
        if F.source is not None:
            vals = np.abs(F.evaluate(w)) + np.abs(F.evaluate(-w))
        else:
            vals = np.abs(np.interp(w, F.omega, F.values.real) + 1j * np.interp(w, F.omega, F.values.imag))
            vals = vals + np.abs(np.interp(-w, F.omega, F.values.real) + 1j * np.interp(-w, F.omega, F.values.imag))
        total = float(wts @ vals)
    if tail is None:
        if a >= b:
            warnings.warn(
                f"spectrum only known up to {b:.6g} < pi/h = {a:.6g}; bound covers nothing without a tail",
                RuntimeWarning,
                stacklevel=2,
            )
    else:
        total += float(tail(max(a, b)) if callable(tail) else tail)
    return total / math.pi


_DAWSON_EXP_LIMIT = 700.0


def dawson_via_cardinal(z: complex, h: float = 0.1, n_terms: int = 400) -> complex:
    """Odd-node cardinal series for the complex Dawson integral.

    ``F(z) ~ (1 / sqrt(pi)) * sum_{n odd, |n| <= n_terms} exp(-(z - n h)^2) / n``,
    which converges to Dawson's integral as ``h -> 0`` and ``n_terms -> inf``.
    """
    if h <= 0 or n_terms < 1:
        raise ValueError("need h > 0 and n_terms >= 1")
    z = complex(z)
    if z.imag * z.imag > _DAWSON_EXP_LIMIT:
        raise OverflowError(f"|Im z| = {abs(z.imag):.3g} too large: terms overflow exp")
    n = np.arange(-n_terms, n_terms + 1)
    n = n[n % 2 != 0]
    terms = np.exp(-((z - n * h) ** 2)) / n
    return complex(terms.sum() / math.sqrt(math.pi))


def dawson_reference(z) -> complex:
    """Dawson's integral through the Faddeeva function, ``-i sqrt(pi)/2 (w(z) - exp(-z^2))``."""
    z = np.asarray(z, dtype=complex)
    out = -0.5j * math.sqrt(math.pi) * (wofz(z) - np.exp(-(z**2)))
    return complex(out) if out.ndim == 0 else out
