"""Positive definiteness: Bochner Gram matrices and spectral nonnegativity."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import SampledFunction


class Verdict(str, enum.Enum):
    PD = "pd"
    NOT_PD = "not_pd"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PdReport:
    min_bochner_eigenvalue: float
    negative_spectral_mass: float
    total_spectral_mass: float
    verdict: Verdict
    tolerance_used: float
    max_asymmetry: float = 0.0

    @property
    def is_pd(self) -> bool:
        return self.verdict is Verdict.PD

    def to_dict(self) -> dict:
        return {
            "min_bochner_eigenvalue": self.min_bochner_eigenvalue,
            "negative_spectral_mass": self.negative_spectral_mass,
            "total_spectral_mass": self.total_spectral_mass,
            "verdict": self.verdict.value,
            "tolerance_used": self.tolerance_used,
            "max_asymmetry": self.max_asymmetry,
        }


def bochner_matrix(f: SampledFunction | Callable, points) -> np.ndarray:
    """Return ``M[i, j] = f(points[i] - points[j])``.

    ``f`` may be a callable (vectorised over numpy arrays) or sampled
    values; the latter are looked up exactly at grid nodes and interpolated
    by the cardinal series elsewhere.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if pts.size < 1:
        raise ValueError("need at least one point")
    diff = pts[:, None] - pts[None, :]
    if isinstance(f, SampledFunction):
        vals = f.at(diff.ravel()).reshape(diff.shape)
    else:
        vals = np.asarray(f(diff), dtype=complex)
        if vals.shape != diff.shape:
            vals = np.broadcast_to(vals, diff.shape).astype(complex)
    return vals


def hermitian_part(m: np.ndarray) -> tuple[np.ndarray, float]:
    """``((M + M*) / 2, max |M - M*|)``."""
    asym = float(np.abs(m - m.conj().T).max()) if m.size else 0.0
    return 0.5 * (m + m.conj().T), asym


def min_bochner_eigenvalue(f, points) -> float:
    herm, _ = hermitian_part(bochner_matrix(f, points))
    return float(np.linalg.eigvalsh(herm)[0])


def fejer_spectrum(f: SampledFunction) -> tuple[np.ndarray, np.ndarray]:
    """Transform of ``f`` after a triangular (Fejér) taper; returns ``(omega, values)``.

    At any frequency the tapered sum equals ``v* T v / (N + 1)`` where ``T``
    is the Toeplitz Gram matrix of the samples and ``v_k = exp(i w x_k)``,
    so it is nonnegative whenever the samples come from a positive definite
    function, however slowly that function decays.
    """
    g = f.grid
    taper = 1.0 - np.abs(g.indices) / (g.n_half + 1.0)
    F = g.h * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(f.values * taper)))
    return g.omega, F


def _random_point_sets(f: SampledFunction, n_sets: int, size: int, seed: int):
    # nodes from the central half so every pairwise difference is itself a node
    g = f.grid
    half = g.n_half // 2
    pool = np.arange(-half, half + 1)
    size = min(size, pool.size)
    rng = np.random.default_rng(seed)
    for _ in range(n_sets):
        yield np.sort(rng.choice(pool, size=size, replace=False)) * g.h


def pd_report(
    f: SampledFunction,
    random_point_sets: int = 8,
    set_size: int = 32,
    tol: float | None = None,
    seed: int = 0,
) -> PdReport:
    """Combine a spectral and a Bochner test into one verdict.

    The verdict is ``pd`` when the smallest Bochner eigenvalue is at least
    ``-tol`` and the negative spectral mass is at most ``tol / ||f||_inf``
    times the total; ``not_pd`` when a Bochner eigenvalue is below ``-tol`` or the
    negative mass exceeds ten times that; ``inconclusive`` in between.
    ``tol`` defaults to ``1e-8 * ||f||_inf``. Point sets are drawn with
    ``numpy.random.default_rng(seed)`` so reports are reproducible.
    """
    scale = f.sup_norm()
    if tol is None:
        tol = 1e-8 * scale if scale > 0 else 1e-300
    if tol <= 0:
        raise ValueError("tol must be positive")

    omega, F = fejer_spectrum(f)
    dw = omega[1] - omega[0]
    negative = float(np.clip(-F.real, 0.0, None).sum() * dw)
    total = float(np.abs(F).sum() * dw)

    min_eig = np.inf
    asym = 0.0
    point_sets = [np.zeros(1)] + list(_random_point_sets(f, random_point_sets, set_size, seed))
    for pts in point_sets:
        herm, a = hermitian_part(bochner_matrix(f, pts))
        asym = max(asym, a)
        min_eig = min(min_eig, float(np.linalg.eigvalsh(herm)[0]))

    # spectral criterion is relative: tol / ||f|| is the dimensionless level
    rel = (tol / scale) * total if scale > 0 and total > 0 else tol
    if min_eig < -tol or negative > 10.0 * rel:
        verdict = Verdict.NOT_PD
    elif negative > rel:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PD
    return PdReport(min_eig, negative, total, verdict, float(tol), asym)
