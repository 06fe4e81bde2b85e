"""Compare the compiled and pure-Python column reduction on Rips filtrations.

    python benchmarks/bench_reduce.py [--repeat 3] [--prime 2]
"""

from __future__ import annotations

import argparse
import statistics
import time

from torsionscope import FieldSpec, build_filtration
from torsionscope import _kernels
from torsionscope.datasets import circle_sample, random_cloud
from torsionscope.persistence import reduce_filtration


def workloads():
    yield "circle N=24, 5-skeleton", build_filtration(
        circle_sample(24), [0.05, 0.1, 0.2, 0.3, 0.38], max_dim=5
    )
    cloud = random_cloud(60, 3, seed=0)
    yield "random 60 pts in R^3, 3-skeleton", build_filtration(
        cloud, [0.1, 0.2, 0.3, 0.45], max_dim=3
    )


def time_backend(filt, fld, backend, repeat):
    saved = _kernels.BACKEND
    _kernels.BACKEND = backend
    try:
        runs, low = [], None
        for _ in range(repeat):
            t0 = time.perf_counter()
            _, low = reduce_filtration(filt, fld, max_k=filt.complex.dim - 1)
            runs.append(time.perf_counter() - t0)
    finally:
        _kernels.BACKEND = saved
    return statistics.median(runs), low


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime", type=int, default=2)
    args = ap.parse_args()
    fld = FieldSpec.prime(args.prime)
    backends = _kernels.available_backends()
    print(f"available backends: {', '.join(backends)}; field Z{args.prime}")
    print(f"{'workload':36s} {'simplices':>9s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, filt in workloads():
        times, lows = {}, {}
        for b in backends:
            times[b], lows[b] = time_backend(filt, fld, b, args.repeat)
        if len(lows) > 1:
            assert list(lows["python"]) == list(lows["cython"]), "backends disagree"
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else "       -"
        cols = " ".join(f"{times[b]:9.3f}s" for b in backends)
        print(f"{name:36s} {len(filt.complex):9d} {cols} {speed}")


if __name__ == "__main__":
    main()
