"""Timing comparison of the compiled and numpy kernel backends.

Runs each hot kernel on solver-representative sizes, checks the two
backends agree, and prints per-call times with the speedup. Usage:

    python3 benchmarks/bench_kernels.py [--repeats 5] [--n 50]
"""

import argparse
import time

import numpy as np

from irsbeam._kernels import _pure

try:
    from irsbeam._kernels import _core
except ImportError:
    _core = None


def timer(fn, repeats):
    """Best-of-repeats wall time for one call of fn()."""
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2


def bench_sweep(mod, R, Y0, sweeps):
    def run():
        Y = Y0.copy()
        S = R @ Y
        for _ in range(sweeps):
            mod.sweep_unit_rows(R, Y, S)
        return Y
    return run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--n", type=int, default=50,
                    help="surface element count (problem size n+1)")
    ap.add_argument("--count", type=int, default=1000,
                    help="randomization candidates")
    ap.add_argument("--points", type=int, default=64,
                    help="grid resolution for the 3-element scan")
    args = ap.parse_args()

    if _core is None:
        print("compiled backend not importable; timing the numpy backend only")

    rng = np.random.default_rng(0)
    dim = args.n + 1
    k = int(np.ceil(np.sqrt(2.0 * dim)))
    R = hermitian(rng, dim)
    Y0 = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    Y0 /= np.linalg.norm(Y0, axis=1, keepdims=True)
    L = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    raw = (rng.standard_normal((args.count, k))
           + 1j * rng.standard_normal((args.count, k)))
    Phi = rng.standard_normal((3, 8)) + 1j * rng.standard_normal((3, 8))
    hd = rng.standard_normal(8) + 1j * rng.standard_normal(8)

    cases = [
        (f"sweep_unit_rows  ({dim}x{dim}, k={k}, 20 sweeps)",
         lambda mod: bench_sweep(mod, R, Y0, 20)),
        (f"best_unit_modulus ({args.count} candidates, n={dim})",
         lambda mod: (lambda: mod.best_unit_modulus(L, raw, R))),
        (f"phase_grid_scan  (3 elements, {args.points}^3 points)",
         lambda mod: (lambda: mod.phase_grid_scan(Phi, hd, args.points))),
    ]

    width = max(len(name) for name, _ in cases)
    header = f"{'kernel'.ljust(width)}   numpy      cython     speedup"
    print(header)
    print("-" * len(header))
    for name, make in cases:
        t_pure = timer(make(_pure), args.repeats)
        line = f"{name.ljust(width)}   {1e3 * t_pure:8.3f}ms"
        if _core is not None:
            # agreement check on the comparable outputs
            if "grid" in name:
                assert np.allclose(make(_pure)(), make(_core)())
            elif "modulus" in name:
                op, oi, _ = make(_pure)()
                cp, ci, _ = make(_core)()
                assert oi == ci and np.isclose(op, cp)
            t_core = timer(make(_core), args.repeats)
            line += f"   {1e3 * t_core:8.3f}ms   {t_pure / t_core:6.2f}x"
        print(line)


if __name__ == "__main__":
    main()
