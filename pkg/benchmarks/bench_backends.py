"""Compare the compiled kernels against the NumPy reference backend.

Two levels:
  * microbenchmarks of the banded interpolation products and the
    soft-threshold kernel, against each other and against the dense
    operator product they replace,
  * an end-to-end denoising solve timed in a subprocess per backend
    (PRPCA_PURE_PYTHON toggles the selection at import).

Usage: python benchmarks/bench_backends.py [--quick]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from prpca import _reference
from prpca.interpolation import interpolation_matrix

try:
    from prpca import _native
except ImportError:
    _native = None


def best_of(fn, repeats=5):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def micro(sizes, inner=20):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'size':>10}{'dense':>12}{'reference':>12}{'native':>12}")
    for N in sizes:
        J = interpolation_matrix(N)
        X = rng.standard_normal((N // 2, N))
        R = rng.standard_normal((N, N))

        cases = [
            ("interp_rows_apply", X, lambda a: J @ a, _reference.interp_rows_apply,
             None if _native is None else _native.interp_rows_apply),
            ("interp_rows_adjoint", R, lambda a: J.T @ a, _reference.interp_rows_adjoint,
             None if _native is None else _native.interp_rows_adjoint),
        ]
        for name, arg, dense, ref, nat in cases:
            t_dense = best_of(lambda: [dense(arg) for _ in range(inner)])
            t_ref = best_of(lambda: [ref(arg) for _ in range(inner)])
            t_nat = best_of(lambda: [nat(arg) for _ in range(inner)]) if nat else float("nan")
            print(f"{name:<22}{N:>10}{t_dense / inner:>12.2e}{t_ref / inner:>12.2e}{t_nat / inner:>12.2e}")

        tau = 0.1
        t_ref = best_of(lambda: [_reference.soft_threshold(R, tau) for _ in range(inner)])
        if _native is not None:
            t_nat = best_of(lambda: [_native.soft_threshold(R, tau) for _ in range(inner)])
        else:
            t_nat = float("nan")
        print(f"{'soft_threshold':<22}{N:>10}{'-':>12}{t_ref / inner:>12.2e}{t_nat / inner:>12.2e}")


SOLVE_SNIPPET = """
import time
import numpy as np
import prpca

rng = np.random.default_rng(0)
N = {N}
pair = prpca.projector_pair("single", N, N)
core = rng.standard_normal((N // 2, N // 2))
Z = pair.apply(core) + rng.standard_normal((N, N)) * 0.3
cfg = prpca.SolveConfig(Z=Z, pair=pair, lambda1=1.0, lambda2=0.3,
                        max_iters={iters}, rel_tol=0.0, accelerate=True)
prpca.solve(cfg)  # warm up
start = time.perf_counter()
prpca.solve(cfg)
print(f"{{prpca.active_backend()}} {{time.perf_counter() - start:.3f}}")
"""


def end_to_end(N, iters):
    print(f"\nfull solve, single interpolation, N={N}, {iters} iterations:")
    for pure in ("0", "1"):
        env = dict(os.environ, PRPCA_PURE_PYTHON=pure)
        out = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET.format(N=N, iters=iters)],
            env=env, capture_output=True, text=True, check=True,
        )
        backend, seconds = out.stdout.split()
        print(f"  {backend:<10} {float(seconds):.3f}s")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller sizes, fewer repeats")
    args = parser.parse_args()
    if _native is None:
        print("note: compiled extension not available, native column will be nan")
    sizes = (64, 256) if args.quick else (64, 256, 1024)
    micro(sizes)
    end_to_end(N=128 if args.quick else 256, iters=60)


if __name__ == "__main__":
    main()
