"""Multiplicative factorization ``f = phi_plus * phi_minus`` via a continuous logarithm.

Pipeline: continuous log of ``f`` (optionally after adding ``epsilon``), removal
of the constant limit at infinity, additive split of the decaying remainder,
exponentiation of each half with half the constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .additive import AdditiveSplit, Side, halfline_energy, split_additive
from .errors import GridTooCoarseError, ResidualError, ZeroCrossingError
from .grid import Grid, SampledFunction, forward_ft

ZERO_RTOL = 1e-4
MAX_PHASE_STEP = 0.75 * math.pi


@dataclass(frozen=True, eq=False)
class LogBranch:
    """Continuous logarithm on a grid; ``values`` are complex samples."""

    grid: Grid
    values: np.ndarray
    winding_accumulated: float
    min_modulus: float

    def sampled(self) -> SampledFunction:
        return SampledFunction(self.grid, self.values)


@dataclass(frozen=True, eq=False)
class FactorizationResult:
    phi_plus: SampledFunction
    phi_minus: SampledFunction
    g_plus: SampledFunction
    g_minus: SampledFunction
    const_lambda: complex
    epsilon_used: float
    normalization_factor: complex
    product_residual: float
    split: AdditiveSplit
    epsilon_retried: bool = False
    diagnostics: dict = field(default_factory=dict)


def continuous_log(f: SampledFunction, zero_rtol: float = ZERO_RTOL, max_phase_step: float = MAX_PHASE_STEP) -> LogBranch:
    """``log|f| + i arg f`` with the argument continued from the left end.

    Raises :class:`ZeroCrossingError` when ``min |f| < zero_rtol * max |f|``
    and :class:`GridTooCoarseError` when adjacent samples turn by more than
    ``max_phase_step`` radians.
    """
    v = f.values
    mod = np.abs(v)
    top = float(mod.max()) if mod.size else 0.0
    low = float(mod.min()) if mod.size else 0.0
    if top == 0.0 or low < zero_rtol * top:
        raise ZeroCrossingError(
            f"zero-crossing; retry with --epsilon (min |f| = {low:.3e} vs max |f| = {top:.3e})",
            {"min_modulus": low, "max_modulus": top, "zero_rtol": zero_rtol},
        )
    steps = np.angle(v[1:] / v[:-1])
    worst = float(np.abs(steps).max()) if steps.size else 0.0
    if worst > max_phase_step:
        k = int(np.abs(steps).argmax())
        raise GridTooCoarseError(
            f"phase turns by {worst:.3f} rad between x={f.x[k]:.6g} and x={f.x[k + 1]:.6g}; refine the grid",
            {"max_phase_step": worst},
        )
    phase = np.angle(v[0]) + np.concatenate(([0.0], np.cumsum(steps)))
    logv = np.log(mod) + 1j * phase
    return LogBranch(f.grid, logv, float(phase[-1] - phase[0]), low)


def perturb_epsilon(f: SampledFunction, epsilon: float) -> SampledFunction:
    """``f + epsilon``; keeps positive definiteness (adds a point mass at w = 0)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return f + float(epsilon)


def error_propagation_bound(g_error: float, m_bound: float) -> float:
    """Sup-norm bound ``exp(M) * g_error`` on ``|exp(x) - exp(y)|`` for ``|x - y| <= g_error``.

    ``m_bound`` bounds the real parts along the segment joining the two
    exponents.
    """
    if g_error < 0:
        raise ValueError("g_error must be nonnegative")
    return math.exp(m_bound) * g_error


def factorize_multiplicative(
    f: SampledFunction,
    tol: float = 1e-8,
    epsilon: float = 0.0,
    normalize_at_zero: bool = False,
    method: str = "spectral",
    retry_epsilon: float | None = 1e-3,
    zero_rtol: float = ZERO_RTOL,
) -> FactorizationResult:
    """Factor ``f + epsilon`` into upper and lower half-plane factors.

    The constant removed from ``log f`` is the mean of its two end values
    (its limit at infinity for functions in ``L2 + C``). If ``epsilon == 0``
    and ``f`` vanishes somewhere, the call is retried once with
    ``epsilon = retry_epsilon * ||f||_inf`` unless ``retry_epsilon`` is None.
    With ``normalize_at_zero`` the pair is rescaled so ``phi_plus(0) == 1``.
    ``tol`` bounds ``||phi_plus phi_minus - (f + epsilon)||_inf`` relative to
    ``||f + epsilon||_inf``.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    retried = False
    target = perturb_epsilon(f, epsilon) if epsilon > 0 else f
    try:
        branch = continuous_log(target, zero_rtol=zero_rtol)
    except ZeroCrossingError:
        if epsilon > 0 or retry_epsilon is None:
            raise
        epsilon = retry_epsilon * f.sup_norm()
        target = perturb_epsilon(f, epsilon)
        branch = continuous_log(target, zero_rtol=zero_rtol)
        retried = True

    logf = branch.values
    lam0 = complex(0.5 * (logf[0] + logf[-1]))
    g = SampledFunction(f.grid, logf - lam0)
    split = split_additive(g, method=method, tol=None)
    gp, gm = split.f_plus, split.f_minus

    phi_p = np.exp(gp.values + 0.5 * lam0)
    phi_m = np.exp(gm.values + 0.5 * lam0)
    norm = 1.0 + 0.0j
    if normalize_at_zero:
        norm = complex(phi_p[f.grid.n_half])
        phi_p = phi_p / norm
        phi_m = phi_m * norm

    scale = target.sup_norm()
    residual = float(np.abs(phi_p * phi_m - target.values).max())
    if residual > tol * scale:
        raise ResidualError(
            f"product residual {residual:.3e} exceeds {tol * scale:.3e}",
            {"product_residual": residual, "epsilon": epsilon},
        )

    log_p = forward_ft(gp)
    log_m = forward_ft(gm)
    diagnostics = {
        "winding_accumulated": branch.winding_accumulated,
        "min_modulus": branch.min_modulus,
        "split_method": split.method,
        "split_error_bound": split.error_bound,
        "wrongside_log_plus": halfline_energy(log_p, Side.NEGATIVE),
        "wrongside_log_minus": halfline_energy(log_m, Side.POSITIVE),
    }
    return FactorizationResult(
        phi_plus=SampledFunction(f.grid, phi_p),
        phi_minus=SampledFunction(f.grid, phi_m),
        g_plus=gp,
        g_minus=gm,
        const_lambda=lam0,
        epsilon_used=float(epsilon),
        normalization_factor=norm,
        product_residual=residual,
        split=split,
        epsilon_retried=retried,
        diagnostics=diagnostics,
    )
