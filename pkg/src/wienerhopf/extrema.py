"""Laws of the supremum and infimum of a Lévy process at an exponential time.

With ``g = (c + ln q - ln(q + psi)) / (1 + i lam)`` split as ``g = g+ + g-``,

    q / (q + psi) = exp((1 + i lam) g+ - c/2) * exp((1 + i lam) g- - c/2)

and after normalising each factor to 1 at ``lam = 0`` the first is the
characteristic function of ``M_q = sup_{s <= tau} X_s`` and the second that
of ``I_q = inf_{s <= tau} X_s``.

``g`` only decays like ``log|lam| / |lam|``, too slowly for a sampled split
to be accurate. It is therefore written as ``r + d`` where ``r`` comes from
the rational reference ``(sigma^2/2)(b+ - i lam)(b- + i lam)`` and is split in
closed form, and the remainder ``d`` decays like ``1/lam^2`` and is split by
the half-band cardinal series. With ``reference="roots"`` the reference
shares its zeros with ``q + psi``, which makes the Brownian case exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .additive import Side, cardinal_plus, halfline_energy
from .errors import MassError, NotPositiveDefiniteError, ResidualError
from .grid import Grid, SampledFunction, forward_ft
from .levy import LevyModel, char_fn_exp_time
from .posdef import PdReport, Verdict, pd_report

REFERENCES = ("roots", "symmetric", "none")


def analytic_bm_factors(mu: float, sigma: float, q: float) -> tuple[float, float]:
    """Rates ``(b_plus, b_minus)`` of the Brownian factors ``b+/(b+ - i lam)`` and ``b-/(b- + i lam)``.

    ``b_plus = (-mu + sqrt(mu^2 + 2 q sigma^2)) / sigma^2`` and ``b_minus``
    with ``mu`` negated; ``M_q ~ Exp(b_plus)`` and ``-I_q ~ Exp(b_minus)``.
    """
    if not (sigma > 0 and q > 0):
        raise ValueError("need sigma > 0 and q > 0")
    root = math.sqrt(mu * mu + 2.0 * q * sigma * sigma)
    # rationalised forms avoid cancellation when mu^2 >> q sigma^2
    s2 = sigma * sigma
    b_plus = (root - mu) / s2 if mu <= 0 else 2.0 * q / (root + mu)
    b_minus = (root + mu) / s2 if mu >= 0 else 2.0 * q / (root - mu)
    return b_plus, b_minus


def build_g(model: LevyModel, q: float, c: float = 0.0, grid: Grid | None = None) -> SampledFunction:
    """``(c + ln q - ln(q + psi)) / (1 + i lam)`` on the grid.

    The principal logarithm is continuous here because ``Re psi >= 0``
    keeps ``q + psi`` in the right half-plane.
    """
    g = grid or Grid()
    lam = g.points
    vals = (c + math.log(q) - np.log(q + model.psi(lam))) / (1.0 + 1j * lam)
    return SampledFunction(g, vals, hermitian=True)


def _reference_rates(model, q, reference):
    if reference == "roots":
        return model.cumulant_roots(q)
    if reference == "symmetric":
        s0 = math.sqrt(2.0 * q) / model.sigma
        return s0, s0
    raise ValueError(f"unknown reference {reference!r}")


@dataclass(frozen=True, eq=False)
class WhFactors:
    """Normalised Wiener-Hopf factors of ``q / (q + psi)`` on a grid.

    ``psi_q_plus`` is the characteristic function of the supremum,
    ``psi_q_minus`` that of the infimum. ``rate_plus`` / ``rate_minus`` and
    ``limit_plus`` / ``limit_minus`` describe the leading behaviour
    ``psi_q_plus ~ limit_plus * rate_plus / (rate_plus - i lam)`` used to
    invert the factors without Gibbs ringing.
    """

    psi_q_plus: SampledFunction
    psi_q_minus: SampledFunction
    g_plus: SampledFunction
    g_minus: SampledFunction
    c_used: float
    product_residual: float
    model: LevyModel
    q: float
    reference: str
    rate_plus: float
    rate_minus: float
    limit_plus: float
    limit_minus: float
    pd_plus: PdReport | None = None
    pd_minus: PdReport | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return self.psi_q_plus.grid


def _remainder(model, q, b_plus, b_minus, lam):
    # -log((q + psi) / reference) / (1 + i lam), which decays like 1/lam^2
    s2 = 0.5 * model.sigma**2
    log_ref = math.log(s2) + np.log(b_plus - 1j * lam) + np.log(b_minus + 1j * lam)
    return -(np.log(q + model.psi(lam)) - log_ref) / (1.0 + 1j * lam)


def _wrongside_fraction(phi, rate, limit, sign):
    # wrong-half-line mass of the transform of phi minus its leading term,
    # relative to 2 pi, the transform mass of a characteristic function
    lam = phi.grid.points
    rest = phi.values
    if math.isfinite(rate):
        rest = rest - limit * rate / (rate - 1j * sign * lam)
    F = forward_ft(SampledFunction(phi.grid, rest))
    return halfline_energy(F, Side.NEGATIVE if sign > 0 else Side.POSITIVE) / (2 * math.pi)


def _integral_with_tail(d, lam, h):
    # d ~ a / lam^2 at both ends and is hermitian, so the two tails add 2 Re(a) / L
    a = d[-1] * lam[-1] ** 2
    return float((h * d.sum()).real + 2.0 * a.real / lam[-1])


def wh_factors(
    model: LevyModel,
    q: float,
    c: float = 0.0,
    grid: Grid | None = None,
    reference: str = "roots",
    tol: float = 1e-8,
    check_pd: bool = True,
    pd_tol: float | None = None,
    tail_factor: int = 16,
) -> WhFactors:
    """Wiener-Hopf factors of ``q / (q + psi)`` normalised to 1 at ``lam = 0``.

    ``reference`` selects the rational part that is split in closed form:
    ``"roots"`` uses the two real roots of ``cumulant(b) = q``,
    ``"symmetric"`` uses ``b = sqrt(2q)/sigma`` on both sides, and
    ``"none"`` splits ``g`` directly with the cardinal series. The first
    two need ``sigma > 0``. ``tol`` bounds the product residual relative
    to 1. The remainder is sampled on a grid ``tail_factor`` times wider
    so that its split is not truncated at the grid edge. A ``not_pd`` verdict on either factor raises
    :class:`NotPositiveDefiniteError` when ``check_pd`` is set.
    """
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}")
    if not q > 0:
        raise ValueError("q must be positive")
    g = grid or Grid()
    lam = g.points
    zero = g.n_half
    gfun = build_g(model, q, c, g)
    target = char_fn_exp_time(model, q, g).values
    ell = c + math.log(q) - np.log(q + model.psi(lam))
    one = 1.0 + 1j * lam

    ext = Grid(g.h, g.n_half * tail_factor)
    if reference == "none":
        gp = cardinal_plus(build_g(model, q, c, ext), lam)
        log_p = one * gp - 0.5 * c
        log_m = one * (gfun.values - gp) - 0.5 * c
        b_plus = b_minus = math.nan
        e_plus = e_minus = math.nan
        d = None
    else:
        b_plus, b_minus = _reference_rates(model, q, reference)
        d_ext = _remainder(model, q, b_plus, b_minus, ext.points)
        # the remainder is sampled far beyond the grid so the series sees its tails
        dp = cardinal_plus(SampledFunction(ext, d_ext), lam)
        d = d_ext[ext.n_half - g.n_half:ext.n_half + g.n_half + 1]
        lref_p = np.log(b_plus - 1j * lam)
        dm = d - dp
        rp = -(lref_p - math.log(1.0 + b_plus)) / one
        gp = rp + dp
        log_p = -lref_p + math.log(1.0 + b_plus) + one * dp - 0.5 * c
        log_m = ell - one * gp - 0.5 * c
        total = _integral_with_tail(d_ext, ext.points, g.h)
        e_plus = math.exp(-total / (2 * math.pi) - dp[zero].real)
        e_minus = math.exp(total / (2 * math.pi) - dm[zero].real)

    # normalise so both factors equal 1 at lam = 0; the product is unchanged
    shift = log_p[zero]
    log_p = log_p - shift
    log_m = log_m + shift
    phi_p = np.exp(log_p)
    phi_m = np.exp(log_m)
    residual = float(np.abs(phi_p * phi_m - target).max())
    if residual > tol:
        raise ResidualError(f"factor product residual {residual:.3e} exceeds {tol:.3e}", {"product_residual": residual})

    g_plus = SampledFunction(g, gp)
    g_minus = SampledFunction(g, gfun.values - gp)
    fp = SampledFunction(g, phi_p)
    fm = SampledFunction(g, phi_m)
    rep_p = rep_m = None
    if check_pd:
        rep_p = pd_report(fp, tol=pd_tol)
        rep_m = pd_report(fm, tol=pd_tol)
        for name, rep in (("plus", rep_p), ("minus", rep_m)):
            if rep.verdict is Verdict.NOT_PD:
                raise NotPositiveDefiniteError(f"{name} factor is not positive definite; refine the grid", rep.to_dict())

    diagnostics = {
        "log_remainder_max": None if d is None else float(np.abs(d).max()),
        "wrongside_plus": _wrongside_fraction(fp, b_plus, e_plus, 1.0),
        "wrongside_minus": _wrongside_fraction(fm, b_minus, e_minus, -1.0),
    }
    return WhFactors(
        fp, fm, g_plus, g_minus, float(c), residual, model, float(q), reference,
        float(b_plus), float(b_minus), float(e_plus), float(e_minus), rep_p, rep_m, diagnostics,
    )


@dataclass(frozen=True, eq=False)
class ExtremaDistributions:
    x_grid: np.ndarray
    pdf_sup: np.ndarray
    cdf_sup: np.ndarray
    pdf_inf: np.ndarray
    cdf_inf: np.ndarray
    mass_sup: float
    mass_inf: float
    negativity_sup: float
    negativity_inf: float

    def sup_cdf(self, x):
        """Interpolated cdf of the supremum (0 left of the grid, mass right of it)."""
        return np.interp(x, self.x_grid, self.cdf_sup, left=0.0, right=self.mass_sup)

    def inf_cdf(self, x):
        return np.interp(x, self.x_grid, self.cdf_inf, left=0.0, right=self.mass_inf)

    def to_csv(self) -> str:
        rows = ["x,pdf_sup,cdf_sup,pdf_inf,cdf_inf"]
        cols = (self.x_grid, self.pdf_sup, self.cdf_sup, self.pdf_inf, self.cdf_inf)
        for vals in zip(*cols):
            rows.append(",".join("%.17g" % v for v in vals))
        return "\n".join(rows) + "\n"


def default_x_grid(factors: WhFactors, n: int = 2001) -> np.ndarray:
    """Symmetric grid on which both laws keep all but about ``e^-25`` of their mass.

    The span is capped at 0.45 of the period ``2 pi / h`` of the inverted
    densities, beyond which the periodic images of the other tail show up.
    """
    rates = [r for r in (factors.rate_plus, factors.rate_minus) if math.isfinite(r) and r > 0]
    span = max(10.0, 25.0 / min(rates)) if rates else 10.0
    span = min(span, 0.45 * 2 * math.pi / factors.grid.h)
    return np.linspace(-span, span, n)


def _density(phi, lam, h, x, rate, limit, sign):
    # subtract the limit * rate / (rate - i sign lam) singular part, invert it exactly
    if math.isfinite(rate):
        lead = limit * rate / (rate - 1j * sign * lam)
        rest = phi - lead
        xs = np.clip(sign * x, 0.0, None)
        tail = np.exp(-rate * xs)
        exact = np.where(sign * x >= 0, limit * rate * tail, 0.0)
        # the supremum law has its atom-free exponential part on x >= 0, the infimum on x <= 0
        exact_cdf = limit * (1.0 - tail) if sign > 0 else limit * tail
    else:
        rest = phi
        exact = np.zeros_like(x)
        exact_cdf = np.zeros_like(x)
    pdf = exact + (h / (2 * math.pi)) * kernels.fourier_sum(rest, lam, x, -1.0).real
    rest_pdf = pdf - exact
    rest_cdf = np.concatenate(([0.0], np.cumsum(0.5 * (rest_pdf[1:] + rest_pdf[:-1]) * np.diff(x))))
    return pdf, exact_cdf + rest_cdf


def extrema_distributions(
    factors: WhFactors,
    x_grid=None,
    tol_mass: float = 0.02,
    clip_tol: float = math.inf,
) -> ExtremaDistributions:
    """Invert the normalised factors into densities and cdfs of ``M_q`` and ``I_q``.

    The density of ``M_q`` at ``x`` is ``(1/2pi) int exp(-i lam x) psi_q_plus(lam) dlam``.
    The leading exponential term is inverted in closed form and the rest
    by the trapezoid rule on the factor grid; cdfs add the exact integral
    of the leading term to the cumulative trapezoid of the rest, anchored
    at 0 at the left end of ``x_grid``. Negative density values are clipped
    and their integral recorded. Masses outside ``1 +- tol_mass`` raise
    :class:`MassError`.
    """
    x = default_x_grid(factors) if x_grid is None else np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ValueError("x_grid must be strictly increasing with at least two points")
    g = factors.grid
    lam = g.points
    pdf_s, cdf_s = _density(factors.psi_q_plus.values, lam, g.h, x, factors.rate_plus, factors.limit_plus, 1.0)
    pdf_i, cdf_i = _density(factors.psi_q_minus.values, lam, g.h, x, factors.rate_minus, factors.limit_minus, -1.0)

    def negativity(p):
        neg = np.clip(-p, 0.0, None)
        return float(np.sum(0.5 * (neg[1:] + neg[:-1]) * np.diff(x)))

    neg_s, neg_i = negativity(pdf_s), negativity(pdf_i)
    mass_s, mass_i = float(cdf_s[-1]), float(cdf_i[-1])
    for name, m in (("supremum", mass_s), ("infimum", mass_i)):
        if not abs(m - 1.0) <= tol_mass:
            raise MassError(f"{name} law has mass {m:.6f}; factorization unusable", {"mass": m})
    if max(neg_s, neg_i) > clip_tol:
        raise MassError("density has too much negative mass", {"negativity_sup": neg_s, "negativity_inf": neg_i})

    cdf_s = np.clip(np.maximum.accumulate(cdf_s), 0.0, None)
    cdf_i = np.clip(np.maximum.accumulate(cdf_i), 0.0, None)
    return ExtremaDistributions(
        x, np.clip(pdf_s, 0.0, None), cdf_s, np.clip(pdf_i, 0.0, None), cdf_i, mass_s, mass_i, neg_s, neg_i
    )
