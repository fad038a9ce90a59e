"""Time the prime-field kernels under both backends.

Usage: python3 benchmarks/bench_kernels.py [--sizes 32 64 128] [--prime 101] [--repeat 3]

Each backend runs in its own subprocess because the choice is fixed at
import time by SKEWALG_DISABLE_NUMBA.
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from skewalg import _kernels
sizes, p, repeat = json.loads(sys.argv[1])
rng = np.random.default_rng(0)
out = {"backend": _kernels.backend(), "rows": []}
for n in sizes:
    a = rng.integers(0, p, size=(n, n), dtype=np.int64)
    b = rng.integers(0, p, size=(n, n), dtype=np.int64)
    _kernels.rref_modp(a[:4, :4], p); _kernels.matmul_modp(a[:4, :4], b[:4, :4], p)  # warm up
    best = {}
    for name, fn in (("rref", lambda: _kernels.rref_modp(a, p)),
                     ("matmul", lambda: _kernels.matmul_modp(a, b, p))):
        ts = []
        for _ in range(repeat):
            t = time.perf_counter(); fn(); ts.append(time.perf_counter() - t)
        best[name] = min(ts)
    out["rows"].append({"n": n, **best})
print(json.dumps(out))
"""


def run_backend(disable, sizes, prime, repeat):
    env = dict(os.environ, SKEWALG_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, json.dumps([sizes, prime, repeat])],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--prime", type=int, default=101)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run_backend(False, args.sizes, args.prime, args.repeat)
    slow = run_backend(True, args.sizes, args.prime, args.repeat)
    print(f"p = {args.prime}; best of {args.repeat}; seconds")
    print(f"{'n':>5} {'kernel':>7} {fast['backend']:>10} {slow['backend']:>10} {'ratio':>7}")
    for rf, rs in zip(fast["rows"], slow["rows"]):
        for k in ("rref", "matmul"):
            ratio = rs[k] / rf[k] if rf[k] else float("inf")
            print(f"{rf['n']:>5} {k:>7} {rf[k]:>10.5f} {rs[k]:>10.5f} {ratio:>7.2f}")


if __name__ == "__main__":
    main()
