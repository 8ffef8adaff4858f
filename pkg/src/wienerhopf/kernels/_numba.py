"""numba-compiled kernels; same signatures and semantics as ``_numpy``."""

import math

import numpy as np
from numba import njit

SINC, PLUS, MINUS = 0, 1, 2


@njit(cache=True, nogil=True)
def _sinc(u):
    if u == 0.0:
        return 1.0
    a = math.pi * u
    return math.sin(a) / a


@njit(cache=True, nogil=True)
def _cardinal_series(values, h, n_first, x, kind):
    m = values.size
    out = np.empty(x.size, dtype=np.complex128)
    for i in range(x.size):
        xi = x[i] / h
        acc = 0.0 + 0.0j
        for k in range(m):
            t = xi - (n_first + k)
            if kind == 0:
                acc += values[k] * _sinc(t)
            else:
                half = 0.5 * _sinc(0.5 * t)
                ang = 0.5 * math.pi * t
                if kind == 2:
                    ang = -ang
                acc += values[k] * complex(half * math.cos(ang), half * math.sin(ang))
        out[i] = acc
    return out


def cardinal_series(values, h, n_first, x, kind):
    """Sum ``values[k] * K(x / h - (n_first + k))`` for every ``x``."""
    return _cardinal_series(
        np.ascontiguousarray(values, dtype=np.complex128),
        float(h),
        float(n_first),
        np.ascontiguousarray(x, dtype=np.float64).ravel(),
        int(kind),
    )


@njit(cache=True, nogil=True)
def _fourier_sum(values, nodes, x, sign):
    out = np.empty(x.size, dtype=np.complex128)
    for i in range(x.size):
        acc = 0.0 + 0.0j
        for k in range(nodes.size):
            ang = sign * x[i] * nodes[k]
            acc += values[k] * complex(math.cos(ang), math.sin(ang))
        out[i] = acc
    return out


def fourier_sum(values, nodes, x, sign):
    """Sum ``values[k] * exp(sign * 1j * x * nodes[k])`` for every ``x``."""
    return _fourier_sum(
        np.ascontiguousarray(values, dtype=np.complex128),
        np.ascontiguousarray(nodes, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64).ravel(),
        float(sign),
    )


@njit(cache=True, nogil=True)
def _path_extrema(n_steps, last_dt, z, u, jumps, mu, sigma, dt, bridge):
    n_paths = n_steps.size
    sup = np.zeros(n_paths)
    inf = np.zeros(n_paths)
    end = np.zeros(n_paths)
    pos = 0
    for p in range(n_paths):
        x = 0.0
        hi = 0.0
        lo = 0.0
        ns = n_steps[p]
        for s in range(ns):
            st = dt if s < ns - 1 else last_dt[p]
            cont = mu * st + sigma * math.sqrt(st) * z[pos]
            x_pre = x + cont
            x_new = x_pre + jumps[pos]
            if bridge:
                spread = math.sqrt(cont * cont - 2.0 * sigma * sigma * st * math.log(u[pos]))
                top = 0.5 * (x + x_pre + spread)
                bot = 0.5 * (x + x_pre - spread)
                if top > hi:
                    hi = top
                if bot < lo:
                    lo = bot
            if x_new > hi:
                hi = x_new
            if x_new < lo:
                lo = x_new
            x = x_new
            pos += 1
        sup[p] = hi
        inf[p] = lo
        end[p] = x
    return sup, inf, end


def path_extrema(n_steps, last_dt, z, u, jumps, mu, sigma, dt, bridge):
    """Running supremum/infimum of piecewise Gaussian paths (see ``_numpy``)."""
    return _path_extrema(
        np.ascontiguousarray(n_steps, dtype=np.int64),
        np.ascontiguousarray(last_dt, dtype=np.float64),
        np.ascontiguousarray(z, dtype=np.float64),
        np.ascontiguousarray(u, dtype=np.float64),
        np.ascontiguousarray(jumps, dtype=np.float64),
        float(mu),
        float(sigma),
        float(dt),
        bool(bridge),
    )
