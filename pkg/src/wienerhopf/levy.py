"""Characteristic exponents of jump-diffusion Lévy processes.

``E exp(i lam X_t) = exp(-t psi(lam))`` with

    psi(lam) = sigma^2 lam^2 / 2 - i mu lam + eta (1 - E exp(i lam J))

for a Brownian motion with drift plus compound Poisson jumps of intensity
``eta`` and jump law ``J``. Finite-activity laws need no small-jump
compensator, so the formula above is the full Lévy-Khintchine exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import GridTooCoarseError, ResidualError, ZeroCrossingError
from .grid import Grid, SampledFunction
from .multiplicative import MAX_PHASE_STEP, ZERO_RTOL
from .posdef import PdReport, pd_report


@dataclass(frozen=True)
class GaussianJumps:
    """Normal jumps with mean ``m`` and standard deviation ``s``."""

    m: float = 0.0
    s: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.s) and self.s >= 0):
            raise ValueError("gaussian jumps need finite m and s >= 0")

    def char_fn(self, lam):
        lam = np.asarray(lam, dtype=float)
        return np.exp(1j * self.m * lam - 0.5 * self.s**2 * lam**2)

    def mgf(self, beta: float) -> float:
        return math.exp(beta * self.m + 0.5 * self.s**2 * beta**2)

    def mgf_domain(self) -> tuple[float, float]:
        return -math.inf, math.inf

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.m + self.s * rng.standard_normal(n)

    def to_dict(self) -> dict:
        return {"law": "gaussian", "m": self.m, "s": self.s}


@dataclass(frozen=True)
class DoubleExponentialJumps:
    """Up-jumps ``Exp(theta_up)`` with probability ``p``, down-jumps ``-Exp(theta_down)`` otherwise."""

    p: float = 0.5
    theta_up: float = 1.0
    theta_down: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if not (self.theta_up > 0 and self.theta_down > 0):
            raise ValueError("exponential rates must be positive")

    def char_fn(self, lam):
        lam = np.asarray(lam, dtype=float)
        up = self.theta_up / (self.theta_up - 1j * lam)
        down = self.theta_down / (self.theta_down + 1j * lam)
        return self.p * up + (1.0 - self.p) * down

    def mgf(self, beta: float) -> float:
        lo, hi = self.mgf_domain()
        if not lo < beta < hi:
            return math.inf
        return self.p * self.theta_up / (self.theta_up - beta) + (1.0 - self.p) * self.theta_down / (self.theta_down + beta)

    def mgf_domain(self) -> tuple[float, float]:
        return -self.theta_down, self.theta_up

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        up = rng.random(n) < self.p
        size = rng.standard_exponential(n)
        return np.where(up, size / self.theta_up, -size / self.theta_down)

    def to_dict(self) -> dict:
        return {"law": "exponential_twosided", "p": self.p, "theta_up": self.theta_up, "theta_down": self.theta_down}


JumpLaw = GaussianJumps | DoubleExponentialJumps


@dataclass(frozen=True)
class CompoundPoisson:
    intensity: float
    law: JumpLaw

    def __post_init__(self):
        if not (math.isfinite(self.intensity) and self.intensity > 0):
            raise ValueError("jump intensity must be positive")

    def to_dict(self) -> dict:
        return {"intensity": self.intensity, **self.law.to_dict()}


@dataclass(frozen=True)
class LevyModel:
    """Drift ``mu``, volatility ``sigma`` and optional compound Poisson jumps."""

    mu: float = 0.0
    sigma: float = 1.0
    jumps: CompoundPoisson | None = None

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError("sigma must be finite and >= 0")

    def psi(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        out = 0.5 * self.sigma**2 * lam**2 - 1j * self.mu * lam
        if self.jumps is not None:
            out = out + self.jumps.intensity * (1.0 - self.jumps.law.char_fn(lam))
        return out

    def cumulant(self, beta: float) -> float:
        """``log E exp(beta X_1) = -psi(-i beta)``; ``inf`` outside the jump law's domain."""
        out = 0.5 * self.sigma**2 * beta**2 + self.mu * beta
        if self.jumps is not None:
            m = self.jumps.law.mgf(beta)
            if not math.isfinite(m):
                return math.inf
            out += self.jumps.intensity * (m - 1.0)
        return out

    def cumulant_roots(self, q: float) -> tuple[float, float]:
        """Positive ``(b_plus, b_minus)`` with ``cumulant(b_plus) = cumulant(-b_minus) = q``.

        ``q + psi`` vanishes at ``lam = -i b_plus`` and ``lam = i b_minus``.
        Requires ``sigma > 0`` so that both roots exist.
        """
        if not q > 0:
            raise ValueError("q must be positive")
        if not self.sigma > 0:
            raise ValueError("cumulant roots need sigma > 0")
        lo, hi = (-math.inf, math.inf) if self.jumps is None else self.jumps.law.mgf_domain()
        return self._root(q, 1.0, hi), self._root(q, -1.0, -lo)

    def _root(self, q, sign, limit):
        def fn(b):
            return self.cumulant(sign * b) - q

        top = min(1.0, 0.5 * limit)
        while fn(top) <= 0:
            # double, but approach a finite domain edge (where the cumulant blows up) by bisection
            top = 2.0 * top if 2.0 * top < limit else 0.5 * (top + limit)
        return float(optimize.brentq(fn, 0.0, top, xtol=1e-15, rtol=4 * np.finfo(float).eps))

    def to_dict(self) -> dict:
        return {"mu": self.mu, "sigma": self.sigma, "jumps": None if self.jumps is None else self.jumps.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "LevyModel":
        known = {"mu", "sigma", "jumps"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown model keys: {sorted(extra)}")
        jumps = d.get("jumps")
        cp = None
        if jumps:
            jumps = dict(jumps)
            law = jumps.pop("law", "gaussian")
            intensity = jumps.pop("intensity")
            if law == "gaussian":
                cp = CompoundPoisson(float(intensity), GaussianJumps(**{k: float(v) for k, v in jumps.items()}))
            elif law == "exponential_twosided":
                cp = CompoundPoisson(float(intensity), DoubleExponentialJumps(**{k: float(v) for k, v in jumps.items()}))
            else:
                raise ValueError(f"unknown jump law {law!r}")
        return cls(float(d.get("mu", 0.0)), float(d.get("sigma", 1.0)), cp)


@dataclass(frozen=True)
class KillingTime:
    """Independent random horizon: ``exponential`` with rate ``q`` or ``geometric`` with ``P(T = n) = (1-q) q^n``."""

    kind: str = "exponential"
    q: float = 1.0

    def __post_init__(self):
        if self.kind == "exponential":
            if not (math.isfinite(self.q) and self.q > 0):
                raise ValueError("exponential killing needs q > 0")
        elif self.kind == "geometric":
            if not 0 < self.q < 1:
                raise ValueError("geometric killing needs 0 < q < 1")
        else:
            raise ValueError(f"unknown killing kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "q": self.q}


def psi_eval(model: LevyModel, lam):
    """Characteristic exponent at ``lam``; scalar in, complex scalar out."""
    out = model.psi(lam)
    return complex(out) if np.ndim(out) == 0 else out


def _grid(grid):
    return Grid() if grid is None else grid


def char_fn_exp_time(model: LevyModel, q: float, grid: Grid | None = None) -> SampledFunction:
    """``q / (q + psi)`` on the grid: the characteristic function of ``X`` at an ``Exp(q)`` time."""
    if not q > 0:
        raise ValueError("q must be positive")
    g = _grid(grid)
    return SampledFunction(g, q / (q + model.psi(g.points)), hermitian=True)


def char_fn_geom_time(model: LevyModel, q: float, t_step: float = 1.0, grid: Grid | None = None) -> SampledFunction:
    """``(1 - q) / (1 - q phi)`` with ``phi = exp(-t_step psi)``, the law of ``X_T`` for geometric ``T``."""
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    g = _grid(grid)
    phi = np.exp(-t_step * model.psi(g.points))
    return SampledFunction(g, (1.0 - q) / (1.0 - q * phi), hermitian=True)


def char_fn_time(model: LevyModel, t: float = 1.0, grid: Grid | None = None) -> SampledFunction:
    g = _grid(grid)
    return SampledFunction(g, np.exp(-t * model.psi(g.points)), hermitian=True)


def winding_index(f: SampledFunction, offset: complex = 0.0, zero_rtol: float = ZERO_RTOL) -> tuple[int, float]:
    """Winding number of ``f + offset`` about 0 along the real line.

    The argument is followed across the grid and the curve is closed through
    the point at infinity by the principal angle from the last value back to
    the first. Returns ``(index, raw)`` where ``raw`` is the accumulated
    turn before rounding.
    """
    v = f.values + offset
    mod = np.abs(v)
    # unbounded curves (psi + alpha) are compared against a unit scale
    if mod.max() == 0 or mod.min() < zero_rtol * min(mod.max(), 1.0):
        raise ZeroCrossingError(
            "f + offset passes too close to 0 for a winding number",
            {"min_modulus": float(mod.min()), "max_modulus": float(mod.max())},
        )
    steps = np.angle(v[1:] / v[:-1])
    if steps.size and np.abs(steps).max() > MAX_PHASE_STEP:
        raise GridTooCoarseError("argument turns too fast between samples; refine the grid", {"max_phase_step": float(np.abs(steps).max())})
    total = steps.sum() + np.angle(v[0] / v[-1])
    raw = float(total / (2 * math.pi))
    return int(round(raw)), raw


@dataclass(frozen=True, eq=False)
class BetaPowerCheck:
    report: PdReport
    values: SampledFunction
    check_points: np.ndarray
    identity_error: float


def _gamma_identity(model, q, beta, lam):
    # substitute x = u^(1/beta): x^(beta-1) dx = du / beta, which removes the x = 0 singularity
    p = complex(model.psi(lam))
    c = math.gamma(beta + 1.0)

    def part(fn):
        return integrate.quad(fn, 0.0, math.inf, epsabs=1e-12, epsrel=1e-12, limit=400)[0]

    def re(u):
        x = u ** (1.0 / beta)
        return (np.exp(-x - x * p / q)).real

    def im(u):
        x = u ** (1.0 / beta)
        return (np.exp(-x - x * p / q)).imag

    return complex(part(re), part(im)) / c


def beta_power_check(
    model: LevyModel,
    q: float,
    beta: float,
    grid: Grid | None = None,
    identity_tol: float = 1e-6,
    check_at=(0.0, 0.5, 1.0, 2.0, 4.0),
    **pd_kwargs,
) -> BetaPowerCheck:
    """Positive definiteness of ``(q / (q + psi))^beta``.

    The power uses the principal logarithm, which is continuous because
    ``q + psi`` stays in the right half-plane. Values at the grid nodes
    nearest to ``check_at`` are compared with the gamma-mixture
    representation ``int x^(beta-1) e^-x / Gamma(beta) exp(-(x/q) psi) dx``
    by adaptive quadrature; a disagreement above ``identity_tol`` raises
    :class:`ResidualError`.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    base = char_fn_exp_time(model, q, grid)
    g = base.grid
    vals = np.exp(beta * (math.log(q) - np.log(q + model.psi(g.points))))
    f = SampledFunction(g, vals, hermitian=True)
    idx = np.unique(np.clip(np.rint(np.asarray(check_at) / g.h).astype(int), -g.n_half, g.n_half)) + g.n_half
    pts = g.points[idx]
    err = max(abs(_gamma_identity(model, q, beta, x) - vals[i]) for x, i in zip(pts, idx))
    if err > identity_tol:
        raise ResidualError(f"gamma-mixture identity off by {err:.3e}", {"identity_error": err, "beta": beta})
    return BetaPowerCheck(pd_report(f, **pd_kwargs), f, pts, float(err))


def l1_l2_bounds_check(model: LevyModel, t: float, grid: Grid | None = None, rel_slack: float = 1e-6) -> tuple[float, float]:
    """Grid ``L1`` norm and squared ``L2`` norm of ``exp(-t psi)``.

    Both are dominated by the Gaussian part: ``L1 <= sqrt(2 pi) / (sigma sqrt t)``
    and ``L2^2 <= sqrt(pi) / (sigma sqrt t)``. Raises :class:`ResidualError`
    when either bound is exceeded by more than ``rel_slack`` relative.
    """
    if not (model.sigma > 0 and t > 0):
        raise ValueError("need sigma > 0 and t > 0")
    phi = np.abs(char_fn_time(model, t, grid).values)
    h = _grid(grid).h
    l1 = float(h * phi.sum())
    l2 = float(h * (phi**2).sum())
    b1 = math.sqrt(2 * math.pi) / (model.sigma * math.sqrt(t))
    b2 = math.sqrt(math.pi) / (model.sigma * math.sqrt(t))
    if l1 > b1 * (1 + rel_slack) or l2 > b2 * (1 + rel_slack):
        raise ResidualError("L1/L2 norms exceed the Gaussian bounds", {"l1": l1, "l1_bound": b1, "l2sq": l2, "l2sq_bound": b2})
    return l1, l2


def psi_growth_ratio(model: LevyModel, grid: Grid | None = None, outer: float = 0.1) -> tuple[float, float]:
    """Range of ``|psi(lam)| / lam^2`` over the outermost fraction of the grid.

    A narrow range close to ``sigma^2 / 2`` indicates quadratic growth.
    """
    g = _grid(grid)
    lam = g.points
    mask = np.abs(lam) >= (1.0 - outer) * g.extent
    r = np.abs(model.psi(lam[mask])) / lam[mask] ** 2
    return float(r.min()), float(r.max())
