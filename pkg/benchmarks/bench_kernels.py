"""Time each hot kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are called directly through ``kernels.NUMBA`` / ``kernels.NUMPY``,
so the environment flag does not matter here.  Numba compilation happens in a
warm-up call and is reported separately.
"""

import argparse
import time
import timeit

import numpy as np

from qicoherence import kernels
from qicoherence.sampling import random_density_matrix


def cases(rng):
    rho_small = random_density_matrix(4, rng)
    rho_big = random_density_matrix(64, rng)
    evals = np.linalg.eigvalsh(rho_big)
    grid = np.linspace(0.0, 20.0, 4001)
    kappa = -np.exp(-grid / 3)
    eta = np.exp(-grid / 3)
    return {
        "spectrum_entropy (64)": ("spectrum_entropy", (evals, 1e-10)),
        "dephase_s (2x2)": ("dephase_s", (rho_small, 2, 2)),
        "dephase_s (8x8)": ("dephase_s", (rho_big, 8, 8)),
        "partial_trace keep A (2x2)": ("partial_trace", (rho_small, 2, 2, True)),
        "partial_trace keep S (8x8)": ("partial_trace", (rho_big, 8, 8, False)),
        "lorentzian_ratio (4001)": ("lorentzian_ratio", (grid, 10.0)),
        "gamma_z (4001)": ("gamma_z", (grid, 3.5, 0.4)),
        "phase_cov_coherence (4001)": ("phase_cov_coherence", (kappa, eta, 0.5 * eta)),
    }


def bench(func, args, repeat):
    loops = max(1, timeit.Timer(lambda: func(*args)).autorange()[0])
    best = min(timeit.repeat(lambda: func(*args), number=loops, repeat=repeat))
    return best / loops


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(7)
    table = cases(rng)

    t0 = time.perf_counter()
    for name, call in table.values():
        getattr(kernels.NUMBA, name)(*call)
    print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.2f} s\n")

    print(f"{'kernel':30s} {'numba [us]':>12s} {'numpy [us]':>12s} {'speedup':>8s}")
    for label, (name, call) in table.items():
        t_nb = bench(getattr(kernels.NUMBA, name), call, args.repeat)
        t_np = bench(getattr(kernels.NUMPY, name), call, args.repeat)
        print(f"{label:30s} {t_nb * 1e6:12.2f} {t_np * 1e6:12.2f} {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
