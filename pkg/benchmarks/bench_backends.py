#!/usr/bin/env python3
"""Time the search kernels with numba and as plain Python.

Each backend runs in its own interpreter because STARGRAY_DISABLE_NUMBA is
read at import time. Numba compilation is excluded by a warm-up call.

    python3 benchmarks/bench_backends.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from stargray import _accel, ham_lab
from stargray.flip_graph import enumerate_vertices

repeat = int(sys.argv[1])

def backtrack():
    # complete search, no rotation heuristic: every L1 pair orbit of G(3,2,1)
    # and the failing pairs of G(2,1,1)
    for parts in ((3, 2, 1), (2, 1, 1)):
        for x, y in ham_lab.required_pairs(ham_lab.as_partition(parts), ham_lab.PropertyKind.L1):
            ham_lab.search_ham_path(parts, x, y, heuristic=False, reduce=False)

def rotation():
    # randomized rotation-extension on larger graphs
    for parts in ((3, 3, 1, 1), (2, 2, 2, 1, 1)):
        vs = list(enumerate_vertices(parts, cap=None))
        for i in range(5):
            ham_lab.search_ham_path(parts, vs[i], vs[-1 - 7 * i], reduce=False, cap=None)

out = {"backend": _accel.backend_name()}
for name, fn in (("backtrack", backtrack), ("rotation", rotation)):
    fn()  # warm-up and compilation
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    out[name] = best
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("STARGRAY_CACHE", None)
    if disable:
        env["STARGRAY_DISABLE_NUMBA"] = "1"
    else:
        env.pop("STARGRAY_DISABLE_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'workload':<10} {fast['backend']:>10} {slow['backend']:>10} {'speedup':>8}")
    for key in ("backtrack", "rotation"):
        print(f"{key:<10} {fast[key]:>9.3f}s {slow[key]:>9.3f}s {slow[key] / fast[key]:>7.1f}x")


if __name__ == "__main__":
    main()
