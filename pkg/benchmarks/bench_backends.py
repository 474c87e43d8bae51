"""Time the numba kernels against the uncompiled fallback.

    python benchmarks/bench_backends.py [--n 100000] [--repeat 3]

Each backend runs in its own interpreter because the backend is fixed at
import time by HYPERGREEDY_BACKEND. Compilation is excluded by a warm-up call.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from hypergreedy import BACKEND, configmodel as cm, degseq, greedy, theory

n, repeat = int(sys.argv[1]), int(sys.argv[2])
ds = degseq.regular(3, 3)
mixed = degseq.validate([0.5, 0.5], 2)
n3 = cm.nearest_valid_n(ds, n)
H = cm.realize_hypergraph(cm.build_pool(ds, n3), 1)

def best(fn):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

out = {
    "backend": BACKEND,
    "point_process": best(lambda: greedy.run_point_process(ds, n3, 0)),
    "explicit": best(lambda: greedy.run_explicit(H, 0)),
    "solve_theory": best(lambda: theory.solve_theory.__wrapped__(mixed, "quadrature")),
}
print(json.dumps(out))
"""


def measure(backend, n, repeat):
    env = dict(os.environ, HYPERGREEDY_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(n), str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rows = {b: measure(b, args.n, args.repeat) for b in ("numba", "python")}
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<16}{'numba [s]':>12}{'python [s]':>12}{'speedup':>10}")
    for key in ("point_process", "explicit", "solve_theory"):
        fast, slow = rows["numba"][key], rows["python"][key]
        print(f"{key:<16}{fast:>12.4f}{slow:>12.4f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
