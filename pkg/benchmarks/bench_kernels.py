"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel and size: best-of-N wall time for each backend and
the speedup. Results from both backends are asserted equal before timing.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from padichg import _kernels_py

try:
    from padichg import _kernels as native
except ImportError:
    native = None


def cases(rng):
    for p, n, length in [(5, 3, 260), (7, 3, 700), (13, 3, 4420), (13, 6, 4420)]:
        mod = p ** n
        f = [rng.randrange(mod) for _ in range(length)]
        g = [rng.randrange(mod) for _ in range(length)]
        f[0] = f[0] - f[0] % p + 1
        yield f"mul_trunc p={p} N={n} len={length}", "mul_trunc", (f, g, length, mod)
        yield f"inv_trunc p={p} N={n} len={length}", "inv_trunc", (f, length, mod, pow(f[0], -1, mod))
    for p, e in [(5, 8), (7, 6), (13, 4)]:
        mod = p ** 3
        m = p ** e
        yield f"harmonic_mod p={p} m=p^{e}", "harmonic_mod", (m, p, mod)


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def end_to_end(repeat):
    """Criterion-sized workload: a full log congruence check, per backend, in a subprocess."""
    code = ("import timeit;from padichg.hypergeom import HGParams;from padichg.verify import "
            "check_congruence_log as c;p=HGParams(13,__import__('fractions').Fraction(2,5),2,14,3);"
            f"print(min(timeit.repeat(lambda: c(p), number=1, repeat={repeat})))")
    out = {}
    for name, env in [("native", {}), ("python", {"PADICHG_PURE": "1"})]:
        proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                              env={**os.environ, **env}, check=True)
        out[name] = float(proc.stdout.strip())
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if native is None:
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    rng = random.Random(args.seed)
    print(f"{'kernel':42} {'native s':>10} {'python s':>10} {'speedup':>8}")
    for label, name, fargs in cases(rng):
        fn_native, fn_py = getattr(native, name), getattr(_kernels_py, name)
        assert fn_native(*fargs) == fn_py(*fargs), label
        tn, tp = best(fn_native, fargs, args.repeat), best(fn_py, fargs, args.repeat)
        print(f"{label:42} {tn:10.5f} {tp:10.5f} {tp / tn:8.1f}x")
    e2e = end_to_end(max(1, args.repeat // 2))
    print(f"{'log congruence p=13 n=3 (end to end)':42} {e2e['native']:10.5f} {e2e['python']:10.5f} "
          f"{e2e['python'] / e2e['native']:8.1f}x")


if __name__ == "__main__":
    main()
