"""Row reduction over GF(p): numba kernel against the numpy fallback.

    python benchmarks/bench_rref.py [--sizes 64 128 256] [--p 2] [--repeat 3] [--pipeline]

``--pipeline`` also times an end-to-end resolution in two subprocesses, one
with ``GRADEDREG_NO_NUMBA=1``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from gradedreg import _kernels

PIPELINE = """
import time
from gradedreg.suites import ring
from gradedreg.gradedcat import residue_field
from gradedreg.resolve import resolve, betti_table
from gradedreg import _kernels
A = ring(2, "xyz", ("x^3",), 14)
t = time.perf_counter()
betti_table(resolve(residue_field(A), 6, 12))
print(_kernels.backend_name(), round(time.perf_counter() - t, 3))
"""


def best_of(fn, a, p, repeat):
    out = float("inf")
    for _ in range(repeat):
        b = a.copy()
        t = time.perf_counter()
        fn(b, p)
        out = min(out, time.perf_counter() - t)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pipeline", action="store_true")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can be timed")
    print(f"{'n':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in args.sizes:
        a = rng.integers(0, args.p, size=(n, n), dtype=np.int64)
        t_np = best_of(_kernels.rref_modp_numpy, a, args.p, args.repeat)
        if _kernels.HAVE_NUMBA:
            _kernels.rref_modp_numba(a[:2, :2].copy(), args.p)
            t_nb = best_of(_kernels.rref_modp_numba, a, args.p, args.repeat)
            x, y = a.copy(), a.copy()
            assert np.array_equal(_kernels.rref_modp_numpy(x, args.p), _kernels.rref_modp_numba(y, args.p))
            assert np.array_equal(x, y)
            print(f"{n:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}")
        else:
            print(f"{n:>6} {t_np:>10.4f} {'-':>10} {'-':>8}")
    if args.pipeline:
        for flag in ("0", "1"):
            env = dict(os.environ, GRADEDREG_NO_NUMBA=flag)
            res = subprocess.run([sys.executable, "-c", PIPELINE], env=env, capture_output=True, text=True, check=True)
            print("pipeline", res.stdout.strip())


if __name__ == "__main__":
    main()
