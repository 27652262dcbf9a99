"""Benchmark the jit-compiled kernels against the vectorized numpy path.

Runs the three hot kernels of the enumeration pipeline (monoid completion,
residuum derivation, canonicalization) plus the law scans on the size-6
workload and prints a timing table.  Usage:

    python benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stonean_lab import _kernels
from stonean_lab.corpus import _all_lattices, _middle_perms


def _workload(n: int):
    lattices = _all_lattices(n)
    perms = _middle_perms(n)
    return lattices, perms


def bench_completion(backend: str, lattices, perms) -> tuple[float, int]:
    t0 = time.perf_counter()
    tables = 0
    for meet, join in lattices:
        leq = meet == np.arange(meet.shape[0], dtype=np.int32)[:, None]
        mults = _kernels.complete_monoids(meet, leq, backend_name=backend)
        tables += len(mults)
    return time.perf_counter() - t0, tables


def bench_pipeline(backend: str, lattices, perms) -> tuple[float, int]:
    t0 = time.perf_counter()
    kept = 0
    for meet, join in lattices:
        leq = meet == np.arange(meet.shape[0], dtype=np.int32)[:, None]
        for mult in _kernels.complete_monoids(meet, leq, backend_name=backend):
            res = _kernels.derive_residuum(leq, np.ascontiguousarray(mult), backend_name=backend)
            if res is None:
                continue
            stack = np.stack([meet, join, mult, res]).astype(np.int32)
            _kernels.canonical_tables(stack, perms, backend_name=backend)
            kept += 1
    return time.perf_counter() - t0, kept


def bench_scans(backend: str, lattices, perms) -> tuple[float, int]:
    work = []
    for meet, join in lattices:
        leq = meet == np.arange(meet.shape[0], dtype=np.int32)[:, None]
        mults = _kernels.complete_monoids(meet, leq, backend_name=backend)
        for mult in mults[:64]:
            res = _kernels.derive_residuum(leq, np.ascontiguousarray(mult), backend_name=backend)
            if res is not None:
                work.append((leq, meet, np.ascontiguousarray(mult), res))
    t0 = time.perf_counter()
    for leq, meet, mult, res in work:
        assert _kernels.nonassociative_witness(mult, backend_name=backend) is None
        assert _kernels.residuation_witness(leq, mult, res, backend_name=backend) is None
        assert _kernels.integrality_witness(leq, mult, meet, backend_name=backend) is None
    return time.perf_counter() - t0, len(work)


BENCHES = [
    ("monoid completion", bench_completion),
    ("full pipeline (complete+derive+canon)", bench_pipeline),
    ("law scans", bench_scans),
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = _kernels.available_backends()
    lattices, perms = _workload(args.size)
    print(f"workload: {len(lattices)} lattices of size {args.size}; backends: {backends}")
    if "numba" in backends:
        # warm the jit cache so compilation does not pollute the timings
        bench_pipeline("numba", lattices[:1], perms)

    results: dict[tuple[str, str], float] = {}
    for label, fn in BENCHES:
        for backend in backends:
            best = float("inf")
            meta = 0
            for _ in range(args.repeat):
                dt, meta = fn(backend, lattices, perms)
                best = min(best, dt)
            results[(label, backend)] = best
            print(f"{label:42s} {backend:6s} {best * 1e3:10.1f} ms   (n={meta})")
    if len(backends) == 2:
        print()
        for label, _ in BENCHES:
            ratio = results[(label, "numpy")] / results[(label, "numba")]
            print(f"{label:42s} numba speedup: {ratio:5.1f}x")


if __name__ == "__main__":
    main()
