"""Compare the numba and pure-numpy product kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the raw blade-product kernel on dense random operands for a range of
dimensions and all three product modes, then times meet and join end to end
with each backend (the end-to-end runs use a subprocess per backend because
the backend is fixed at import time).
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from gasub import _kernels
from gasub.algebra import Signature

MODES = {"geometric": _kernels.GEOMETRIC, "outer": _kernels.OUTER, "contraction": _kernels.LEFT_CONTRACTION}

END_TO_END = r"""
import json, time, numpy as np
import gasub
from gasub.sampling import random_blade_pair
rng = np.random.default_rng(1)
pairs = [random_blade_pair(gasub.Signature(5), rng, 0.0) for _ in range(200)]
gasub.meet(*pairs[0][:2]); gasub.join(*pairs[0][:2])   # warm up / compile
t0 = time.perf_counter()
for a, b, _ in pairs:
    gasub.meet(a, b); gasub.join(a, b)
print(json.dumps({"backend": gasub.BACKEND, "seconds": time.perf_counter() - t0}))
"""


def operands(n, rng):
    masks = np.arange(1 << n, dtype=np.int64)
    return masks, rng.uniform(-1, 1, masks.size)


def bench_kernel(fn, sig, mode, a, b, repeat):
    args = (a[0], a[1], b[0], b[1], np.int64(sig.neg_mask), np.int64(sig.null_mask), np.int64(mode), np.int64(sig.n))
    fn(*args)  # compile
    t = timeit.Timer(lambda: fn(*args))
    number, _ = t.autorange()
    return min(t.repeat(repeat, number)) / number


def end_to_end():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, GASUB_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        row = json.loads(res.stdout)
        out[row["backend"]] = row["seconds"]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--max-n", type=int, default=10)
    args = ap.parse_args()
    if _kernels.blade_product_numba is None:
        sys.exit("numba is disabled or unavailable; unset GASUB_DISABLE_NUMBA")
    rng = np.random.default_rng(0)
    print(f"{'n':>3} {'mode':<12} {'terms':>7} {'numpy [us]':>12} {'numba [us]':>12} {'speedup':>8}")
    for n in range(2, args.max_n + 1, 2):
        sig = Signature(n - n // 4, n // 4, 0)
        a, b = operands(n, rng), operands(n, rng)
        for name, mode in MODES.items():
            t_np = bench_kernel(_kernels.blade_product_numpy, sig, mode, a, b, args.repeat)
            t_nb = bench_kernel(_kernels.blade_product_numba, sig, mode, a, b, args.repeat)
            print(f"{n:>3} {name:<12} {a[0].size:>7} {t_np * 1e6:>12.1f} {t_nb * 1e6:>12.1f} {t_np / t_nb:>7.1f}x")
    times = end_to_end()
    print()
    print("meet + join on 200 blade pairs in R(5,0,0):")
    for backend, sec in times.items():
        print(f"  {backend:<6} {sec * 1e3:8.1f} ms")


if __name__ == "__main__":
    main()
