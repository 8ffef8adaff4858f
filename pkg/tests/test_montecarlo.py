import math

import numpy as np
import pytest

from wienerhopf import (
    EmpiricalDistribution,
    KillingTime,
    LevyModel,
    SimConfig,
    char_fn_geom_time,
    extrema_distributions,
    ks_distance,
    simulate_extrema,
    simulate_paths,
    wh_factors,
)
from wienerhopf.levy import psi_eval

from conftest import BM, JUMP_DIFFUSION, KOU

EXP1 = KillingTime("exponential", 1.0)


def exp_cdf(rate):
    return lambda x: np.where(np.asarray(x) > 0, 1 - np.exp(-rate * np.clip(x, 0, None)), 0.0)


def kolmogorov_99(n):
    # asymptotic 99% quantile of sqrt(n) * KS is 1.628
    return 1.628 / math.sqrt(n)


class TestKs:
    def test_point_mass_against_exponential(self):
        assert ks_distance(EmpiricalDistribution.from_samples(np.zeros(50)), exp_cdf(1.0)) == 1.0

    def test_exponential_samples(self):
        rng = np.random.default_rng(11)
        emp = EmpiricalDistribution.from_samples(rng.exponential(1.0, 100_000))
        assert ks_distance(emp, exp_cdf(1.0)) < min(0.01, kolmogorov_99(emp.n))

    def test_brute_force(self):
        rng = np.random.default_rng(3)
        s = rng.normal(size=40)
        emp = EmpiricalDistribution.from_samples(s)
        from scipy.stats import norm

        grid = np.sort(np.concatenate([s, s - 1e-12, np.linspace(-4, 4, 2001)]))
        brute = np.abs(emp.cdf(grid) - norm.cdf(grid)).max()
        assert ks_distance(emp, norm.cdf) == pytest.approx(brute, abs=1e-9)


class TestSimulate:
    def test_constant_path(self):
        M, I = simulate_extrema(SimConfig(LevyModel(0.0, 0.0), EXP1, n_paths=500))
        assert np.all(M.sorted_samples == 0) and np.all(I.sorted_samples == 0)

    def test_monotone_path(self):
        cfg = SimConfig(LevyModel(0.7, 0.0), EXP1, n_paths=20_000, dt=0.01, seed=5)
        sup, inf, end = simulate_paths(cfg)
        assert np.all(inf == 0)
        assert np.abs(sup - end).max() < 1e-9
        # sup = mu * tau with tau ~ Exp(1)
        assert ks_distance(EmpiricalDistribution.from_samples(sup / 0.7), exp_cdf(1.0)) < kolmogorov_99(cfg.n_paths)

    def test_brownian_supremum(self):
        M, I = simulate_extrema(SimConfig(LevyModel(0.0, math.sqrt(2)), EXP1, n_paths=100_000, dt=1e-3, seed=1))
        assert ks_distance(M, exp_cdf(1.0)) < 0.02
        assert ks_distance(EmpiricalDistribution.from_samples(-I.sorted_samples), exp_cdf(1.0)) < 0.02

    def test_ordering(self):
        sup, inf, end = simulate_paths(SimConfig(KOU, EXP1, n_paths=5_000, dt=1e-2, seed=2))
        assert np.all(sup >= 0) and np.all(inf <= 0)
        assert np.all(sup >= end) and np.all(end >= inf)

    @pytest.mark.parametrize("workers", [1, 3])
    def test_deterministic(self, workers):
        cfg = SimConfig(JUMP_DIFFUSION, EXP1, n_paths=3_001, dt=1e-2, seed=9, n_workers=workers, chunk_paths=500)
        a = simulate_paths(cfg)
        b = simulate_paths(cfg)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)
        other = simulate_paths(SimConfig(JUMP_DIFFUSION, EXP1, n_paths=3_001, dt=1e-2, seed=10, n_workers=workers))
        assert not np.array_equal(a[0], other[0])

    def test_terminal_law_exponential(self):
        cfg = SimConfig(JUMP_DIFFUSION, EXP1, n_paths=100_000, dt=1e-3, seed=6)
        end = simulate_paths(cfg)[2]
        for lam in (0.5, 1.0, 2.0):
            emp = np.exp(1j * lam * end).mean()
            want = 1.0 / (1.0 + psi_eval(JUMP_DIFFUSION, lam))
            assert abs(emp - want) < 4 / math.sqrt(cfg.n_paths)

    def test_terminal_law_geometric(self):
        q = 0.6
        cfg = SimConfig(JUMP_DIFFUSION, KillingTime("geometric", q), n_paths=100_000, seed=7)
        end = simulate_paths(cfg)[2]
        lam = np.array([0.3, 0.8, 1.5])
        want = char_fn_geom_time(JUMP_DIFFUSION, q).at(lam)
        for l, w in zip(lam, want):
            assert abs(np.exp(1j * l * end).mean() - w) < 4 / math.sqrt(cfg.n_paths)
        assert np.mean(end == 0) == pytest.approx(1 - q, abs=4 * math.sqrt(q * (1 - q) / cfg.n_paths))

    def test_dt_halving_within_noise(self):
        ks = []
        for dt in (2e-3, 1e-3):
            M, _ = simulate_extrema(SimConfig(LevyModel(0.0, math.sqrt(2)), EXP1, n_paths=100_000, dt=dt, seed=8))
            ks.append(ks_distance(M, exp_cdf(1.0)))
        assert abs(ks[0] - ks[1]) < kolmogorov_99(100_000)

    def test_discrete_monitoring_biased_low(self):
        # E M = 1 here; endpoint-only monitoring misses about 0.5826 sigma sqrt(dt)
        cfg = dict(model=LevyModel(0.0, math.sqrt(2)), killing=EXP1, n_paths=40_000, dt=1e-2, seed=3)
        bridge = simulate_paths(SimConfig(**cfg))[0]
        discrete = simulate_paths(SimConfig(**cfg, monitoring="discrete"))[0]
        se = 4 / math.sqrt(cfg["n_paths"])
        assert abs(bridge.mean() - 1) < se
        assert 1 - discrete.mean() > 0.5826 * math.sqrt(2 * cfg["dt"]) - se

    def test_validation(self):
        for bad in (dict(n_paths=0), dict(dt=0.0), dict(n_workers=0), dict(seed=-1), dict(monitoring="x"), dict(chunk_paths=0)):
            with pytest.raises(ValueError):
                SimConfig(BM, EXP1, **bad)

    def test_diagnostics(self):
        d = SimConfig(JUMP_DIFFUSION, EXP1, dt=1e-2).diagnostics()
        assert d["sigma_sqrt_dt"] == pytest.approx(0.1) and d["eta_dt"] == pytest.approx(0.01)
        assert SimConfig(BM, KillingTime("geometric", 0.5)).diagnostics()["sigma_sqrt_dt"] == 1.0


@pytest.mark.slow
def test_model_laws_match_simulation(model, grid):
    d = extrema_distributions(wh_factors(model, 1.0, grid=grid))
    M, I = simulate_extrema(SimConfig(model, EXP1, n_paths=100_000, dt=1e-3, seed=12))
    assert ks_distance(M, d.sup_cdf) < 0.02
    assert ks_distance(I, d.inf_cdf) < 0.02
