"""Compare the numba and numpy gate kernels.

Times one local two-qubit gate application on a dense aux (x) chain operator,
then a full Laurent build of the doubled monodromy, under each backend.

    python3 benchmarks/bench_kernels.py [--n 4 6 8] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from openxxz import _kernels, lattice
from openxxz.algebra import make_params


def best_of(fn, repeat):
    fn()  # warm-up (includes numba compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    gate = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    print(f"{'task':<28}{'N':>3}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for n in args.n:
        nq = n + 1
        mat = rng.normal(size=(2**nq, 2**nq)) + 0j
        row = {}
        for b in backends:
            with _kernels.backend_ctx(b):
                row[b] = best_of(lambda: _kernels.apply_gate_left(gate, mat, 0, n, nq), args.repeat)
        _print("gate_left", n, row, backends)

        p = make_params(0.7, 0.6, 0.2, n)
        row = {}
        for b in backends:
            with _kernels.backend_ctx(b):
                def build():
                    lattice._doubled.cache_clear()
                    lattice.doubled_monodromy(p)
                row[b] = best_of(build, max(1, args.repeat // 2))
        _print("doubled_monodromy (Laurent)", n, row, backends)


def _print(task, n, row, backends):
    cells = "".join(f"{row[b] * 1e3:>10.3f}ms" for b in backends)
    speed = f"{row['numpy'] / row['numba']:>9.1f}x" if "numba" in row else ""
    print(f"{task:<28}{n:>3}{cells}{speed}")


if __name__ == "__main__":
    main()
