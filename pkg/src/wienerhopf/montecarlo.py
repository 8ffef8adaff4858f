"""Monte-Carlo extrema of jump-diffusion paths killed at a random time.

Random streams: ``numpy.random.SeedSequence(seed).spawn(n_workers)`` gives
one independent PCG64 stream per worker (worker ``w`` owns spawn key
``(w,)``). Path ``i`` belongs to worker ``i mod n_workers``; each worker
walks its paths in order, in chunks of ``chunk_paths``, so the output is
a pure function of ``(seed, n_workers, chunk_paths)`` and the model.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .levy import KillingTime, LevyModel

MONITORING = ("bridge", "discrete")


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``monitoring="bridge"`` samples the exact maximum and minimum of the
    Brownian bridge inside every step; ``"discrete"`` only looks at step
    endpoints and biases the supremum low by ``O(sqrt(dt))``. Geometric
    killing always uses unit steps observed at integer times.
    """

    model: LevyModel
    killing: KillingTime
    n_paths: int = 100_000
    dt: float = 1e-3
    seed: int = 0
    n_workers: int = 1
    monitoring: str = "bridge"
    chunk_paths: int = 4096

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError("n_paths must be an integer >= 1")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be positive")
        if int(self.n_workers) != self.n_workers or self.n_workers < 1:
            raise ValueError("n_workers must be an integer >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.monitoring not in MONITORING:
            raise ValueError(f"monitoring must be one of {MONITORING}")
        if self.chunk_paths < 1:
            raise ValueError("chunk_paths must be >= 1")

    def diagnostics(self) -> dict:
        """Step-size indicators: ``sigma sqrt(dt)`` and expected jumps per step ``eta dt``."""
        step = 1.0 if self.killing.kind == "geometric" else self.dt
        eta = 0.0 if self.model.jumps is None else self.model.jumps.intensity
        return {"sigma_sqrt_dt": self.model.sigma * math.sqrt(step), "eta_dt": eta * step}

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "killing": self.killing.to_dict(),
            "n_paths": int(self.n_paths),
            "dt": self.dt,
            "seed": int(self.seed),
            "n_workers": int(self.n_workers),
            "monitoring": self.monitoring,
            "chunk_paths": int(self.chunk_paths),
        }


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    sorted_samples: np.ndarray
    n: int

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        s = np.sort(np.asarray(samples, dtype=float))
        s.setflags(write=False)
        return cls(s, int(s.size))

    def cdf(self, x):
        return np.searchsorted(self.sorted_samples, x, side="right") / self.n


def ks_distance(emp: EmpiricalDistribution, cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance ``sup_x |F_n(x) - F(x)|``.

    Evaluated at the sample points as ``max(i/n - F(x_i), F(x_i) - (i-1)/n)``,
    which accounts for the jump of ``F_n`` at each sample; ``F`` is assumed
    continuous, so a block of tied samples at a point of zero ``F`` mass
    (e.g. all samples at 0 against an ``Exp(1)`` cdf) gives distance 1.
    """
    n = emp.n
    F = np.asarray(cdf(emp.sorted_samples), dtype=float)
    i = np.arange(1, n + 1)
    return float(np.clip(max((i / n - F).max(), (F - (i - 1) / n).max()), 0.0, 1.0))


def _draw_chunk(cfg: SimConfig, rng: np.random.Generator, n: int):
    model = cfg.model
    jumps = model.jumps
    if cfg.killing.kind == "exponential":
        tau = rng.exponential(1.0 / cfg.killing.q, n)
        n_steps = np.floor(tau / cfg.dt).astype(np.int64) + 1
        last_dt = tau - (n_steps - 1) * cfg.dt
        dt = cfg.dt
    else:
        n_steps = rng.geometric(1.0 - cfg.killing.q, n).astype(np.int64) - 1
        tau = n_steps.astype(float)
        last_dt = np.ones(n)
        dt = 1.0
    total = int(n_steps.sum())
    z = rng.standard_normal(total)
    u = rng.random(total) if cfg.monitoring == "bridge" and cfg.killing.kind == "exponential" else np.ones(total)
    jump = np.zeros(total)
    if jumps is not None and total:
        offsets = np.concatenate(([0], np.cumsum(n_steps)[:-1]))
        counts = rng.poisson(jumps.intensity * tau)
        k = int(counts.sum())
        if k:
            owner = np.repeat(np.arange(n), counts)
            # uniform jump times, each credited to the end of the step containing it
            t = rng.random(k) * tau[owner]
            step = np.minimum(np.floor(t / dt).astype(np.int64), n_steps[owner] - 1)
            np.add.at(jump, offsets[owner] + step, jumps.law.sample(rng, k))
    return n_steps, last_dt, z, u, jump, dt


def simulate_paths(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-path ``(sup, inf, terminal)`` in path order."""
    bridge = cfg.monitoring == "bridge" and cfg.killing.kind == "exponential"
    W = int(cfg.n_workers)
    streams = np.random.SeedSequence(int(cfg.seed)).spawn(W)
    sup = np.empty(cfg.n_paths)
    inf = np.empty(cfg.n_paths)
    end = np.empty(cfg.n_paths)

    def work(w):
        rng = np.random.Generator(np.random.PCG64(streams[w]))
        mine = np.arange(w, cfg.n_paths, W)
        for start in range(0, mine.size, cfg.chunk_paths):
            idx = mine[start:start + cfg.chunk_paths]
            n_steps, last_dt, z, u, jump, dt = _draw_chunk(cfg, rng, idx.size)
            s, i, e = kernels.path_extrema(n_steps, last_dt, z, u, jump, cfg.model.mu, cfg.model.sigma, dt, bridge)
            sup[idx], inf[idx], end[idx] = s, i, e

    if W == 1:
        work(0)
    else:
        with ThreadPoolExecutor(max_workers=W) as pool:
            list(pool.map(work, range(W)))
    return sup, inf, end


def simulate_extrema(cfg: SimConfig) -> tuple[EmpiricalDistribution, EmpiricalDistribution]:
    """Empirical laws of ``M = sup X`` and ``I = inf X`` up to the killing time."""
    sup, inf, _ = simulate_paths(cfg)
    return EmpiricalDistribution.from_samples(sup), EmpiricalDistribution.from_samples(inf)
