"""Named test functions, addressable from configuration files.

Each entry maps ``x`` (an array) and keyword parameters to complex values.
``POSITIVE_DEFINITE`` lists the entries whose transform is nonnegative for
all admissible parameters.
"""

from __future__ import annotations

import numpy as np


def _sinc(t):
    # sin(t) / t
    return np.sinc(np.asarray(t, dtype=float) / np.pi)


def gaussian(x, scale=1.0):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * (x / scale) ** 2).astype(complex)


def cauchy(x, scale=1.0):
    x = np.asarray(x, dtype=float)
    return (1.0 / (1.0 + (x / scale) ** 2)).astype(complex)


def modulated_gaussian(x, freq=1.0, scale=1.0):
    return np.exp(1j * freq * np.asarray(x, dtype=float)) * gaussian(x, scale)


def cos_gaussian(x, freq=1.0, scale=1.0):
    return np.cos(freq * np.asarray(x, dtype=float)) * gaussian(x, scale)


def sinc(x, band=1.0):
    """``sin(band x) / (band x)``; transform supported on ``|w| <= band``."""
    return _sinc(band * np.asarray(x, dtype=float)).astype(complex)


def sinc2(x, band=1.0):
    """Squared sinc with transform (a triangle) supported on ``|w| <= band``."""
    return (_sinc(0.5 * band * np.asarray(x, dtype=float)) ** 2).astype(complex)


def sinc4(x, band=1.0):
    return (_sinc(0.25 * band * np.asarray(x, dtype=float)) ** 4).astype(complex)


def modulated_sinc2(x, freq=1.0, band=1.0):
    return np.exp(1j * freq * np.asarray(x, dtype=float)) * sinc2(x, band)


def exp_abs(x, rate=1.0):
    return np.exp(-rate * np.abs(np.asarray(x, dtype=float))).astype(complex)


def rectangular(x, half_width=1.0):
    """Indicator of ``|x| <= half_width``; its transform ``2 sin(w a)/w`` changes sign."""
    x = np.asarray(x, dtype=float)
    return (np.abs(x) <= half_width * (1 + 1e-12)).astype(complex)


def x2_gaussian(x):
    """``x^2 exp(-x^2/2)``; transform ``sqrt(2 pi)(1 - w^2) exp(-w^2/2)`` changes sign."""
    x = np.asarray(x, dtype=float)
    return (x * x * np.exp(-0.5 * x * x)).astype(complex)


def cosine(x, freq=1.0):
    return np.cos(freq * np.asarray(x, dtype=float)).astype(complex)


def constant(x, value=1.0):
    return np.full(np.shape(x), value, dtype=complex)


def zero(x):
    return np.zeros(np.shape(x), dtype=complex)


def reciprocal_rational(x, eps=0.0):
    """``1/(1 + x^2) + eps``, the product of ``1/(1 - ix)`` and ``1/(1 + ix)`` when ``eps = 0``."""
    return cauchy(x) + eps


CATALOG = {
    "gaussian": gaussian,
    "cauchy": cauchy,
    "modulated_gaussian": modulated_gaussian,
    "cos_gaussian": cos_gaussian,
    "sinc": sinc,
    "sinc2": sinc2,
    "sinc4": sinc4,
    "modulated_sinc2": modulated_sinc2,
    "exp_abs": exp_abs,
    "rectangular": rectangular,
    "x2_gaussian": x2_gaussian,
    "cosine": cosine,
    "constant": constant,
    "zero": zero,
    "reciprocal_rational": reciprocal_rational,
}

POSITIVE_DEFINITE = frozenset(
    {"gaussian", "cauchy", "modulated_gaussian", "cos_gaussian", "sinc", "sinc2", "sinc4", "modulated_sinc2", "exp_abs", "cosine", "reciprocal_rational"}
)


def make(name: str, **params):
    """Return ``x -> CATALOG[name](x, **params)``; unknown names raise ``KeyError``."""
    try:
        fn = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; choose from {sorted(CATALOG)}") from None
    return lambda x: fn(x, **params)
