import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import erfc

from wienerhopf import (
    Grid,
    SampledFunction,
    SpectralFunction,
    cardinal_interpolate,
    dawson_reference,
    dawson_via_cardinal,
    forward_ft,
    inverse_ft,
    roundtrip_error,
    truncation_error_bound,
)
from wienerhopf.grid import series_tail_bound


def gauss(x):
    return np.exp(-0.5 * np.asarray(x) ** 2)


def dawson_taylor(z, dps=40):
    """Dawson's integral from its power series sum (-2)^n z^(2n+1) / (2n+1)!!."""
    with mpmath.workdps(dps):
        z = mpmath.mpc(z)
        term = z
        total = term
        n = 0
        while abs(term) > mpmath.mpf(10) ** (-dps):
            n += 1
            term = term * (-2) * z * z / (2 * n + 1)
            total += term
        return complex(total)


def gaussian_alias_bound(h):
    # (1/pi) * 2 * int_{pi/h}^inf sqrt(2 pi) exp(-w^2/2) dw
    return 2.0 * erfc(math.pi / (h * math.sqrt(2.0)))


class TestGrid:
    def test_shape(self):
        g = Grid(0.5, 3)
        assert g.size == 7
        np.testing.assert_array_equal(g.points, [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5])
        assert g.omega.max() < math.pi / g.h

    @pytest.mark.parametrize("h, n", [(0.0, 4), (-1.0, 4), (math.nan, 4), (0.1, 0), (0.1, 2.5)])
    def test_rejects_bad_parameters(self, h, n):
        with pytest.raises(ValueError):
            Grid(h, n)

    def test_sampled_function_checks(self):
        g = Grid(1.0, 2)
        with pytest.raises(ValueError):
            SampledFunction(g, np.zeros(4))
        with pytest.raises(ValueError):
            SampledFunction(g, [0, 0, np.nan, 0, 0])
        with pytest.raises(ValueError):
            SampledFunction(g, [1, 2, 3, 4, 5], hermitian=True)
        f = SampledFunction(g, [1j, 2, 3, 2, -1j], hermitian=True)
        assert f.at_zero == 3
        assert not f.values.flags.writeable


class TestForwardInverse:
    def test_gaussian_pair(self):
        f = Grid(0.25, 256).sample(gauss)
        F = forward_ft(f)
        assert np.abs(F.values - math.sqrt(2 * math.pi) * gauss(F.omega)).max() < 1e-8

    def test_zero(self):
        f = Grid().sample(lambda x: 0 * x)
        assert np.all(forward_ft(f).values == 0)
        assert np.all(inverse_ft(forward_ft(f)).values == 0)

    def test_two_sided_exponential(self):
        g = Grid()
        h = g.h
        F = forward_ft(g.sample(lambda x: np.exp(-np.abs(x))))
        # the sampled sum h sum_{|k|<=N} r^|k| e^{-iwkh} as a finite geometric series
        z = math.exp(-h) * np.exp(-1j * F.omega * h)
        N = g.n_half
        exact_sum = h * (1 + 2 * (z * (1 - z**N) / (1 - z)).real)
        assert np.abs(F.values - exact_sum).max() < 1e-12
        # trapezoid error of a kink: h coth(h/2) - 2 = h^2/6 at w = 0, below h^2/3 everywhere
        assert np.abs(F.values - 2 / (1 + F.omega**2)).max() < h * h / 3

    def test_roundtrip(self):
        f = Grid(0.25, 256).sample(gauss)
        back = inverse_ft(forward_ft(f))
        assert back.grid == f.grid
        assert np.abs(back.values - f.values).max() < 1e-8
        residual, bound = roundtrip_error(f)
        assert residual <= bound

    def test_windowed_halfline_indicator(self):
        g = Grid(0.5, 64)
        w = g.omega
        F = SpectralFunction(w, np.where(w > 0, 1.0, np.where(w == 0, 0.5, 0.0)))
        x = inverse_ft(F).values
        # (1 / (M h)) * (1/2 + sum_{j=1}^{N} exp(i j dw x_k)) by the geometric sum formula
        M, N = g.size, g.n_half
        theta = g.d_omega * g.points
        with np.errstate(invalid="ignore", divide="ignore"):
            geo = np.exp(1j * theta) * (1 - np.exp(1j * N * theta)) / (1 - np.exp(1j * theta))
        geo = np.where(theta == 0, N, geo)
        assert np.abs(x - (0.5 + geo) / (M * g.h)).max() < 1e-13

    def test_rejects_nonfinite_spectrum(self):
        with pytest.raises(ValueError):
            SpectralFunction(np.array([-1.0, 0.0, 1.0]), np.array([0, np.inf, 0]))
        with pytest.raises(ValueError):
            SpectralFunction(np.array([-1.0, 0.0, 2.0]), np.zeros(3))

    @given(
        a=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        b=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        s=st.floats(0.3, 3.0),
        m=st.floats(-3.0, 3.0),
    )
    def test_linearity(self, a, b, s, m):
        g = Grid(0.25, 128)
        f = g.sample(lambda x: np.exp(-0.5 * (x / s) ** 2))
        k = g.sample(lambda x: np.exp(1j * m * x - np.abs(x)))
        lhs = forward_ft(f.with_values(a * f.values + b * k.values)).values
        rhs = a * forward_ft(f).values + b * forward_ft(k).values
        assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + abs(a) + abs(b)) * 8

    @given(s=st.floats(0.5, 4.0), m=st.floats(-2.0, 2.0))
    def test_roundtrip_property(self, s, m):
        f = Grid(0.25, 256).sample(lambda x: np.exp(1j * m * x - 0.5 * (x / s) ** 2))
        residual, bound = roundtrip_error(f)
        assert residual < 1e-8
        assert residual <= bound


class TestCardinal:
    def test_own_sinc_reproduced(self):
        g = Grid(0.5, 40)
        f = g.sample(lambda x: np.sinc(x / g.h))
        x = np.linspace(-17.3, 17.3, 913)
        assert np.abs(cardinal_interpolate(f, x) - np.sinc(x / g.h)).max() < 1e-12

    def test_nodes_exact(self):
        g = Grid(0.5, 40)
        f = g.sample(lambda x: np.exp(-np.abs(x)) * (1 + 1j * x))
        assert cardinal_interpolate(f, 3 * g.h) == f.values[g.n_half + 3]
        got = cardinal_interpolate(f, g.points)
        assert np.abs(got - f.values).max() < 1e-12

    def test_gaussian_within_bounds(self):
        g = Grid(0.5, 40)
        f = g.sample(gauss)
        x = np.linspace(-8, 8, 1601)
        for n_terms in (10, 20, 40):
            err = np.abs(cardinal_interpolate(f, x, n_terms) - gauss(x)).max()
            # samples beyond |n| = 40 are below exp(-200) and contribute nothing measurable
            bound = gaussian_alias_bound(g.h) + series_tail_bound(f, x, n_terms)
            assert err <= bound

    def test_n_terms_validated(self):
        f = Grid(1.0, 3).sample(gauss)
        with pytest.raises(ValueError):
            cardinal_interpolate(f, 0.0, 4)


class TestTruncationBound:
    def test_band_limited_is_zero(self):
        w = np.linspace(-10, 10, 201)
        F = SpectralFunction(w, np.where(np.abs(w) <= 2.0, 1.0 - np.abs(w) / 2.0, 0.0))
        assert truncation_error_bound(F, 1.0, tail=0.0) == 0.0

    def test_gaussian_h025_negligible(self):
        w = np.linspace(-60, 60, 2401)
        F = SpectralFunction(w, math.sqrt(2 * math.pi) * gauss(w))
        b = truncation_error_bound(F, 0.25, tail=0.0)
        assert 0.0 <= b < 1e-30
        assert gaussian_alias_bound(0.25) < 1e-30

    def test_gaussian_h2_matches_erfc(self):
        F = forward_ft(Grid(0.05, 2000).sample(gauss))
        assert abs(truncation_error_bound(F, 2.0) - gaussian_alias_bound(2.0)) < 1e-10

    def test_tail_callable_and_warning(self):
        w = np.linspace(-1, 1, 21)
        F = SpectralFunction(w, np.ones(21))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert truncation_error_bound(F, 1.0, tail=lambda a: 2 * a) == pytest.approx(2.0)
        with pytest.warns(RuntimeWarning):
            truncation_error_bound(F, 1.0)
        with pytest.raises(ValueError):
            truncation_error_bound(F, 0.0)


class TestDawson:
    @pytest.mark.parametrize("z, value", [(1.0, 0.5380795069127684), (2.0, 0.30134038892379196)])
    def test_frozen_values(self, z, value):
        assert abs(dawson_taylor(z) - value) < 1e-13
        assert abs(dawson_via_cardinal(z, 0.1, 400) - value) < 1e-6

    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 1 + 0.5j, -0.7 + 0.2j, 0.3j])
    def test_reference_matches_taylor(self, z):
        assert abs(dawson_reference(z) - dawson_taylor(z)) < 1e-13

    def test_zero(self):
        assert abs(dawson_via_cardinal(0.0)) < 1e-15

    def test_guards(self):
        with pytest.raises(ValueError):
            dawson_via_cardinal(1.0, 0.0, 10)
        with pytest.raises(ValueError):
            dawson_via_cardinal(1.0, 0.1, 0)
        with pytest.raises(OverflowError):
            dawson_via_cardinal(30j)
