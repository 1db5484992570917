"""Compare the compiled kernels against the pure-numpy fallback.

Times the three hot kernels in isolation and a full IK benchmark slice
end to end. Run from the repository root:

    python benchmarks/kernel_benchmark.py [--count 20]
"""

import argparse
import time

import numpy as np


def time_call(fn, *args, repeat=2000):
    fn(*args)   # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def kernel_timings(kernels):
    rng = np.random.default_rng(0)
    n = 7
    theta = rng.uniform(-np.pi, np.pi, n)
    d = rng.uniform(0, 0.5, n)
    a = rng.uniform(0, 0.5, n)
    alpha = rng.uniform(-np.pi, np.pi, n)
    kinds = np.array([0, 0, 1, 0, 0, 0, 0], dtype=np.int8)
    q = rng.uniform(-np.pi, np.pi, n)
    frames = kernels.dh_frames(theta, d, a, alpha, kinds, q)
    A = rng.standard_normal((6, 7)) * np.exp(rng.uniform(-3, 3, (6, 7)))
    return {
        "dh_frames": time_call(kernels.dh_frames, theta, d, a, alpha, kinds, q),
        "geometric_jacobian6": time_call(kernels.geometric_jacobian6, frames, kinds),
        "balance_log": time_call(kernels.balance_log, A, 1e-13, 10000, repeat=400),
    }


def solver_timing(count):
    from gikin.experiments import run_benchmark

    t0 = time.perf_counter()
    run_benchmark("gp66plus1", count=count, seed=5, methods=("MX",))
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=20,
                        help="motions for the end-to-end slice")
    args = parser.parse_args()

    import gikin._kernels_py as pure
    try:
        import gikin._kernels as fast
    except ImportError:
        fast = None

    print(f"{'kernel':22s}{'python':>12s}{'compiled':>12s}{'speedup':>9s}")
    pure_times = kernel_timings(pure)
    fast_times = kernel_timings(fast) if fast else {}
    for name, tp in pure_times.items():
        if fast:
            tf = fast_times[name]
            print(f"{name:22s}{tp * 1e6:10.1f}us{tf * 1e6:10.1f}us{tp / tf:8.1f}x")
        else:
            print(f"{name:22s}{tp * 1e6:10.1f}us{'n/a':>12s}")

    import os
    import subprocess
    import sys

    print(f"\nend-to-end: gp66plus1 benchmark slice, {args.count} motions x 4 units x MX")
    for env_flag, label in ((None, "selected backend"), ("1", "forced pure python")):
        env = dict(os.environ)
        if env_flag:
            env["GIKIN_PURE_PYTHON"] = env_flag
        else:
            env.pop("GIKIN_PURE_PYTHON", None)
        code = (
            "import gikin, time; from gikin.experiments import run_benchmark; "
            f"t0=time.perf_counter(); run_benchmark('gp66plus1', count={args.count}, "
            "seed=5, methods=('MX',)); "
            "print(f'{gikin.BACKEND}: {time.perf_counter()-t0:.2f}s')"
        )
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        print(f"  {label}: {out.stdout.strip() or out.stderr.strip()}")


if __name__ == "__main__":
    main()
