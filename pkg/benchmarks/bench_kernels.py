"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--size small|default]

Both backends are imported directly, so the ``WIENERHOPF_DISABLE_NUMBA`` flag
does not matter here. The first numba call (compilation) is excluded.
"""

import argparse
import time

import numpy as np

from wienerhopf.kernels import PLUS, _numba, _numpy

SIZES = {
    "small": dict(n_nodes=513, n_eval=513, n_paths=2_000, dt=1e-2),
    "default": dict(n_nodes=1025, n_eval=2049, n_paths=20_000, dt=1e-3),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n_nodes, n_eval, n_paths, dt):
    rng = np.random.default_rng(0)
    h = 0.25
    half = n_nodes // 2
    values = np.exp(-0.5 * (h * np.arange(-half, half + 1)) ** 2).astype(complex)
    x = np.linspace(-half * h, half * h, n_eval)
    nodes = np.linspace(-np.pi / h, np.pi / h, n_nodes)

    tau = rng.exponential(1.0, n_paths)
    n_steps = np.floor(tau / dt).astype(np.int64) + 1
    last_dt = tau - (n_steps - 1) * dt
    total = int(n_steps.sum())
    z = rng.standard_normal(total)
    u = rng.random(total)
    jumps = np.where(rng.random(total) < dt, rng.normal(0, 0.5, total), 0.0)

    return {
        "cardinal_series": lambda k: k.cardinal_series(values, h, -half, x, PLUS),
        "fourier_sum": lambda k: k.fourier_sum(values, nodes, x, 1),
        "path_extrema": lambda k: k.path_extrema(n_steps, last_dt, z, u, jumps, 0.2, 1.0, dt, True),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", choices=sorted(SIZES), default="default")
    args = ap.parse_args()

    print(f"{'kernel':<18}{'numpy [s]':>12}{'numba [s]':>12}{'speed-up':>10}{'max |diff|':>14}")
    for name, run in cases(**SIZES[args.size]).items():
        ref = run(_numpy)
        fast = run(_numba)  # compile
        if isinstance(ref, tuple):
            diff = max(np.abs(a - b).max() for a, b in zip(ref, fast))
        else:
            diff = np.abs(ref - fast).max()
        t_np = best_of(lambda: run(_numpy), args.repeat)
        t_nb = best_of(lambda: run(_numba), args.repeat)
        print(f"{name:<18}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x{diff:>14.2e}")


if __name__ == "__main__":
    main()
