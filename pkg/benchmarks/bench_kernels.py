"""Time the pure-python kernels against the compiled twin.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py

Prints one table per kernel: median wall time of each backend plus the
max elementwise deviation between the two results on the same input.
"""

import time

import numpy as np

from qdho import _pure

try:
    from qdho import _kernels
except ImportError:
    _kernels = None


def _timed(fn, arg, repeats):
    best = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(arg)
        best.append(time.perf_counter() - t0)
    return sorted(best)[len(best) // 2], out


def _random_complex(rng, n):
    return (rng.standard_normal((n, n))
            + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0 * n)


def bench_expm(rng):
    print("expm (complex general matrix)")
    print(f"{'dim':>6s} {'pure [ms]':>12s} {'compiled [ms]':>14s} "
          f"{'speedup':>8s} {'max |diff|':>11s}")
    for n, repeats in ((100, 9), (400, 5), (900, 3)):
        a = _random_complex(rng, n)
        t_pure, out_pure = _timed(_pure.expm, a, repeats)
        if _kernels is None:
            print(f"{n:>6d} {1e3 * t_pure:>12.2f} {'absent':>14s}")
            continue
        t_comp, out_comp = _timed(_kernels.expm, a, repeats)
        diff = np.max(np.abs(out_pure - out_comp))
        print(f"{n:>6d} {1e3 * t_pure:>12.2f} {1e3 * t_comp:>14.2f} "
              f"{t_pure / t_comp:>7.1f}x {diff:>11.2e}")
    print()


def bench_eig(rng):
    print("hermitian_eig (cyclic Jacobi)")
    print(f"{'dim':>6s} {'pure [ms]':>12s} {'compiled [ms]':>14s} "
          f"{'speedup':>8s} {'max |diff|':>11s}")
    for n, repeats in ((20, 9), (40, 5), (80, 3)):
        a = _random_complex(rng, n)
        h = (a + a.conj().T) / 2.0
        t_pure, out_pure = _timed(lambda m: _pure.hermitian_eig(m)[0],
                                  h, repeats)
        if _kernels is None:
            print(f"{n:>6d} {1e3 * t_pure:>12.2f} {'absent':>14s}")
            continue
        t_comp, out_comp = _timed(lambda m: _kernels.hermitian_eig(m)[0],
                                  h, repeats)
        diff = np.max(np.abs(out_pure - out_comp))
        print(f"{n:>6d} {1e3 * t_pure:>12.2f} {1e3 * t_comp:>14.2f} "
              f"{t_pure / t_comp:>7.1f}x {diff:>11.2e}")
    print()


def main():
    if _kernels is None:
        print("compiled backend not importable; timing pure only\n")
    rng = np.random.default_rng(7)
    bench_expm(rng)
    bench_eig(rng)


if __name__ == "__main__":
    main()
