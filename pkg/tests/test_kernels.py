import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from wienerhopf import kernels
from wienerhopf.kernels import _numba, _numpy

KINDS = [kernels.SINC, kernels.PLUS, kernels.MINUS]


def direct_kernel(t, kind):
    # the defining quotients, evaluated away from t = 0
    t = np.asarray(t, dtype=float)
    if kind == kernels.SINC:
        return np.sin(np.pi * t) / (np.pi * t)
    if kind == kernels.PLUS:
        return (np.exp(1j * np.pi * t) - 1) / (2j * np.pi * t)
    return (1 - np.exp(-1j * np.pi * t)) / (2j * np.pi * t)


@pytest.mark.parametrize("impl", [_numpy, _numba], ids=["numpy", "numba"])
@pytest.mark.parametrize("kind", KINDS)
def test_kernel_against_quotient(impl, kind):
    x = np.array([0.37, -1.3, 2.71, 5.5])
    one = np.zeros(1, dtype=complex) + 1
    got = np.array([impl.cardinal_series(one, 1.0, 0, np.array([t]), kind)[0] for t in x])
    assert np.abs(got - direct_kernel(x, kind)).max() < 1e-14


@pytest.mark.parametrize("impl", [_numpy, _numba], ids=["numpy", "numba"])
def test_halfband_node_values(impl):
    # own node 1/2, odd offsets i/(pi j), even offsets 0
    one = np.ones(1, dtype=complex)
    for j in range(-6, 7):
        got = impl.cardinal_series(one, 1.0, -j, np.array([0.0]), kernels.PLUS)[0]
        want = 0.5 if j == 0 else (1j / (math.pi * j) if j % 2 else 0.0)
        assert abs(got - want) < 1e-15
        got_m = impl.cardinal_series(one, 1.0, -j, np.array([0.0]), kernels.MINUS)[0]
        assert abs(got + got_m - (1.0 if j == 0 else 0.0)) < 1e-15


@pytest.mark.parametrize("kind", KINDS)
def test_cardinal_parity(kind):
    rng = np.random.default_rng(1)
    vals = rng.normal(size=301) + 1j * rng.normal(size=301)
    x = np.concatenate([rng.uniform(-50, 50, 500), np.arange(-20, 21) * 0.25])
    a = _numpy.cardinal_series(vals, 0.25, -150, x, kind)
    b = _numba.cardinal_series(vals, 0.25, -150, x, kind)
    assert np.abs(a - b).max() < 1e-11 * np.abs(vals).sum()


@pytest.mark.parametrize("sign", [-1.0, 1.0])
def test_fourier_parity(sign):
    rng = np.random.default_rng(2)
    vals = rng.normal(size=257) + 1j * rng.normal(size=257)
    nodes = np.linspace(-32, 32, 257)
    x = rng.uniform(-10, 10, 300)
    a = _numpy.fourier_sum(vals, nodes, x, sign)
    b = _numba.fourier_sum(vals, nodes, x, sign)
    direct = np.array([np.sum(vals * np.exp(sign * 1j * xi * nodes)) for xi in x])
    assert np.abs(a - direct).max() < 1e-10
    assert np.abs(b - direct).max() < 1e-10


@pytest.mark.parametrize("bridge", [True, False])
def test_path_extrema_parity(bridge):
    rng = np.random.default_rng(3)
    n_steps = rng.integers(1, 40, size=200)
    total = int(n_steps.sum())
    last = rng.uniform(0.0, 0.01, 200)
    z = rng.standard_normal(total)
    u = rng.random(total)
    jumps = np.where(rng.random(total) < 0.05, rng.normal(size=total), 0.0)
    a = _numpy.path_extrema(n_steps, last, z, u, jumps, 0.3, 1.2, 0.01, bridge)
    b = _numba.path_extrema(n_steps, last, z, u, jumps, 0.3, 1.2, 0.01, bridge)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=0, atol=1e-12)


def test_path_extrema_discrete_is_walk():
    # without the bridge, extrema are those of the cumulative sums of the steps
    z = np.array([1.0, -2.0, 0.5, 3.0])
    sup, inf, end = _numpy.path_extrema(np.array([4]), np.array([1.0]), z, np.ones(4), np.zeros(4), 0.0, 1.0, 1.0, False)
    walk = np.concatenate([[0.0], np.cumsum(z)])
    assert sup[0] == walk.max() and inf[0] == walk.min() and end[0] == walk[-1]


def test_backend_flag_subprocess():
    code = "import json, wienerhopf.kernels as k; print(json.dumps(k.BACKEND))"
    env = dict(os.environ, WIENERHOPF_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert json.loads(out.stdout) == "numpy"
    env.pop("WIENERHOPF_DISABLE_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert json.loads(out.stdout) == "numba"


def test_benchmark_runs():
    script = os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks", "bench_kernels.py")
    out = subprocess.run([sys.executable, script, "--size", "small", "--repeat", "1"], capture_output=True, text=True, check=True)
    rows = out.stdout.strip().splitlines()[1:]
    assert [r.split()[0] for r in rows] == ["cardinal_series", "fourier_sum", "path_extrema"]
    assert all(float(r.split()[-1]) < 1e-9 for r in rows)
