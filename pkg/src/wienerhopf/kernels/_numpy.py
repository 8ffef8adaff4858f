"""Pure-numpy reference implementations of the hot kernels.

Every function here has a twin with the same signature in ``_numba``; the
two are interchangeable and are checked against each other in the test suite.
"""

import numpy as np

SINC, PLUS, MINUS = 0, 1, 2

_CHUNK = 256


def _kernel(t, kind):
    # (e^{i pi t} - 1) / (2 pi i t) == 0.5 * e^{i pi t / 2} * sinc(t / 2)
    if kind == SINC:
        return np.sinc(t)
    half = 0.5 * np.sinc(0.5 * t)
    if kind == PLUS:
        return half * np.exp(0.5j * np.pi * t)
    return half * np.exp(-0.5j * np.pi * t)


def cardinal_series(values, h, n_first, x, kind):
    """Sum ``values[k] * K(x / h - (n_first + k))`` for every ``x``."""
    values = np.asarray(values, dtype=np.complex128)
    x = np.asarray(x, dtype=np.float64)
    n = n_first + np.arange(values.size, dtype=np.float64)
    out = np.empty(x.size, dtype=np.complex128)
    for start in range(0, x.size, _CHUNK):
        xs = x[start:start + _CHUNK]
        t = xs[:, None] / h - n[None, :]
        out[start:start + _CHUNK] = _kernel(t, kind) @ values
    return out


def fourier_sum(values, nodes, x, sign):
    """Sum ``values[k] * exp(sign * 1j * x * nodes[k])`` for every ``x``."""
    values = np.asarray(values, dtype=np.complex128)
    nodes = np.asarray(nodes, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.size, dtype=np.complex128)
    for start in range(0, x.size, _CHUNK):
        xs = x[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(sign * 1j * np.outer(xs, nodes)) @ values
    return out


def path_extrema(n_steps, last_dt, z, u, jumps, mu, sigma, dt, bridge):
    """Running supremum/infimum of piecewise Gaussian paths.

    Path ``p`` owns ``n_steps[p]`` consecutive entries of ``z``, ``u`` and
    ``jumps``; all steps have length ``dt`` except the last, of length
    ``last_dt[p]``. Jumps land at the end of their step. With ``bridge`` the
    continuous maximum of the Brownian bridge inside each step is sampled
    from the uniform ``u``; otherwise only step endpoints are monitored.
    Returns ``(sup, inf, terminal)``.
    """
    n_steps = np.asarray(n_steps, dtype=np.int64)
    last_dt = np.asarray(last_dt, dtype=np.float64)
    n_paths = n_steps.size
    sup = np.zeros(n_paths)
    inf = np.zeros(n_paths)
    end = np.zeros(n_paths)
    total = int(n_steps.sum())
    if total == 0:
        return sup, inf, end

    step_dt = np.full(total, dt)
    offsets = np.zeros(n_paths, dtype=np.int64)
    np.cumsum(n_steps[:-1], out=offsets[1:])
    active = n_steps > 0
    step_dt[offsets[active] + n_steps[active] - 1] = last_dt[active]

    cont = mu * step_dt + sigma * np.sqrt(step_dt) * z[:total]
    inc = cont + jumps[:total]
    csum = np.cumsum(inc)
    # rebase the running sum to zero at the start of each path
    idx = offsets[active]
    base = np.repeat(csum[idx] - inc[idx], n_steps[active])
    x_end = csum - base
    x_pre = x_end - jumps[:total]
    x_start = x_pre - cont

    if bridge:
        spread = np.sqrt(cont * cont - 2.0 * sigma * sigma * step_dt * np.log(u[:total]))
        hi = np.maximum(0.5 * (x_start + x_pre + spread), x_end)
        lo = np.minimum(0.5 * (x_start + x_pre - spread), x_end)
    else:
        hi = x_end
        lo = x_end

    sup[active] = np.maximum(np.maximum.reduceat(hi, idx), 0.0)
    inf[active] = np.minimum(np.minimum.reduceat(lo, idx), 0.0)
    end[active] = x_end[idx + n_steps[active] - 1]
    return sup, inf, end
