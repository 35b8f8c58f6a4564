"""Benchmark the multiplicative-update kernels: numba JIT vs pure numpy.

Usage:
    python benchmarks/bench_kernels.py [--sizes 100,200,500] [--repeats 200]

Also times a full solver run under each backend. Needs numba installed;
the numpy column is the IDEOFACTOR_BACKEND=numpy fallback path.
"""

import argparse
import time

import numpy as np

from ideofactor.kernels import NUMPY_IMPLS, jit_compile
from ideofactor.datamodel import affinity_cols, affinity_rows, laplacian


def _problem(n, m, k, seed=0):
    rng = np.random.default_rng(seed)
    A = rng.random((n, n))
    C = rng.random((n, m))
    U, V = rng.random((n, k)), rng.random((m, k))
    Hu, Hs = rng.random((k, k)), rng.random((k, k))
    Su = affinity_rows(C).entries
    Ss = affinity_cols(C).entries
    Lu, Ls = laplacian(Su), laplacian(Ss)
    return dict(A=A, C=C, U=U, V=V, Hu=Hu, Hs=Hs, Su=Su, Lu=Lu, Ss=Ss, Ls=Ls)


def _calls(p):
    eps = 1e-12
    return [
        ("update_joint_row_factor",
         (p["A"], p["C"], p["U"], p["V"], p["Hu"], p["Hs"], p["Su"],
          p["Lu"].degree, p["Lu"].entries, 1.0, eps)),
        ("update_col_factor",
         (p["C"], p["U"], p["Hs"], p["V"], p["Ss"], p["Ls"].degree,
          p["Ls"].entries, 1.0, eps)),
        ("update_mid_factor", (p["C"], p["U"], p["Hs"], p["V"], eps)),
        ("update_mid_factor_sym", (p["A"], p["U"], p["Hu"], eps)),
        ("joint_objective_terms",
         (p["A"], p["C"], p["U"], p["V"], p["Hu"], p["Hs"],
          p["Lu"].entries, p["Ls"].entries, 1.0, 1.0)),
    ]


def _time(fn, args, repeats):
    fn(*args)  # warm (and compile, for the jitted side)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def bench_kernels(sizes, repeats):
    jitted = jit_compile()
    print(f"{'kernel':28s} {'n':>5s} {'numpy':>12s} {'numba':>12s} {'speedup':>8s}")
    for n in sizes:
        p = _problem(n, max(n // 4, 4), 2)
        for name, args in _calls(p):
            t_np = _time(NUMPY_IMPLS[name], args, repeats)
            t_nb = _time(jitted[name], args, repeats)
            print(f"{name:28s} {n:5d} {t_np * 1e6:10.1f}us {t_nb * 1e6:10.1f}us "
                  f"{t_np / t_nb:7.2f}x")


def bench_fit(sizes):
    import os
    import subprocess
    import sys
    script = (
        "import time\n"
        "from ideofactor.synthetic import SyntheticSpec, generate\n"
        "from ideofactor.solver import SolverConfig, fit\n"
        "inst = generate(SyntheticSpec(n_users={n}, m_sources={m}, seed=1))\n"
        "cfg = SolverConfig(k=2, alpha=1.0, beta=1.0, seed=2, max_iters=200,"
        " rel_tol=1e-30)\n"
        "fit(inst.A, inst.C, cfg)\n"  # warm/compile
        "t0 = time.perf_counter()\n"
        "fit(inst.A, inst.C, cfg)\n"
        "print(time.perf_counter() - t0)\n"
    )
    print(f"\n{'full fit (200 iters)':28s} {'n':>5s} {'numpy':>12s} {'numba':>12s}"
          f" {'speedup':>8s}")
    for n in sizes:
        timings = {}
        for backend in ("numpy", "numba"):
            env = dict(os.environ, IDEOFACTOR_BACKEND=backend)
            out = subprocess.run([sys.executable, "-c",
                                  script.format(n=n, m=max(n // 4, 4))],
                                 env=env, capture_output=True, text=True, check=True)
            timings[backend] = float(out.stdout.strip().splitlines()[-1])
        print(f"{'':28s} {n:5d} {timings['numpy'] * 1e3:10.1f}ms "
              f"{timings['numba'] * 1e3:10.1f}ms "
              f"{timings['numpy'] / timings['numba']:7.2f}x")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="100,200,500")
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--skip-fit", action="store_true")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes, args.repeats)
    if not args.skip_fit:
        bench_fit(sizes)


if __name__ == "__main__":
    main()
