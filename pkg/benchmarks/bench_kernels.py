"""Compare the compiled and pure-Python kernels.

Times DAG construction, single-DAG search and the two-DAG interleave on
the canonical triangulation of a generated subdivision, and checks that
both kernels return identical results.

    python3 benchmarks/bench_kernels.py --n 10000 --queries 20000
"""
import argparse
import random
import sys
import time

from adaptloc import kernels
from adaptloc.canonical import build_canonical
from adaptloc.entropy import WeightedTriangulation, build_cascade
from adaptloc.locator import build_locator
from adaptloc.trapmap import build_dag
from adaptloc.workloads import WorkloadSpec, generate_subdivision, generate_workload


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--queries", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if kernels.BACKEND != "cython":
        print("compiled kernel not available; build it with: python3 setup.py build_ext --inplace")
        return 1
    S = generate_subdivision(args.n, args.seed)
    C = build_canonical(S)
    P, tris = C.tri.points, C.tri.tris
    T = kernels.PackedTris(P, tris)
    print(f"n={S.n} triangles={len(tris)} queries={args.queries}")

    dc, tc = timed(lambda: build_dag(P, tris, seed=1, packed=T))
    dp, tp = timed(lambda: build_dag(P, tris, seed=1, packed=T, pure=True))
    same = all(list(getattr(dc, k)) == list(getattr(dp, k)) for k in ("kind", "a", "c0", "c1", "aux"))
    print(f"{'build DAG':<12} cython {tc * 1e3:9.1f} ms   python {tp * 1e3:9.1f} ms   "
          f"speedup {tp / tc:6.1f}x   identical={same}")

    loc = build_locator(P, tris, seed=1, packed_tris=T)
    Q = generate_workload(S, WorkloadSpec("HOTSPOT", args.queries, args.seed))
    Q = [q for q in Q if C.B.contains(q)]
    rng = random.Random(args.seed)
    wt = WeightedTriangulation(len(tris))
    for q in Q:
        wt.p[loc.locate(q)] += 1
        wt.W += 1
    cas = build_cascade(wt, loc, seed=rng.randrange(1 << 30))

    cases = {
        "locate": lambda b: [kernels.locate(T, loc.D, x, y, backend=b) for x, y in Q],
        "interleave": lambda b: [kernels.interleave(T, cas.D, loc.D, x, y, backend=b) for x, y in Q],
    }
    ok = same
    for name, fn in cases.items():
        rc, tc = timed(lambda: fn("cython"))
        rp, tp = timed(lambda: fn("python"))
        agree = [tuple(a) for a in rc] == [tuple(a) for a in rp]
        ok &= agree
        print(f"{name:<12} cython {tc / len(Q) * 1e6:9.2f} us/q  python {tp / len(Q) * 1e6:9.2f} us/q  "
              f"speedup {tp / tc:6.1f}x   identical={agree}")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
