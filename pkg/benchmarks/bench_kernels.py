"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--full] [--repeat N]

Both backends must return identical results; the script checks this and
prints wall-clock times.  ``--full`` adds the 1850-vertex boundary of
(Z/4)^4, which takes tens of seconds on the Python backend.
"""
import argparse
import time

import numpy as np

from submodcodes import kernels
from submodcodes.chain_ring import make_ring
from submodcodes.metric import all_classes, half_distance_table
from submodcodes.submodule import enumerate_boundary


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def distance_cases(full):
    z4 = make_ring("z", 2, 1, 2)
    cases = [
        ("classes (Z/4)^3", [c.rep for c in all_classes(z4, 3)]),
        ("classes F_2[t]/(t^3), d=2", [c.rep for c in all_classes(make_ring("poly", 2, 1, 3), 2)]),
        ("classes (Z/9)^3", [c.rep for c in all_classes(make_ring("z", 3, 1, 2), 3)]),
    ]
    if full:
        cases.append(("boundary (Z/4)^4", sorted(enumerate_boundary(z4, 4))))
    return cases


def clique_cases():
    rng = np.random.default_rng(1)
    out = []
    for n, density in [(60, 0.5), (120, 0.6), (200, 0.5)]:
        upper = np.triu(rng.random((n, n)) < density, 1)
        out.append((f"random G({n}, {density})", upper | upper.T))
    reps = [c.rep for c in all_classes(make_ring("z", 2, 1, 2), 3) if c.class_size == 1]
    D = half_distance_table(reps)
    D = D + D.T
    A = D >= 2
    np.fill_diagonal(A, False)
    out.append(("boundary graph (Z/4)^3, psi=2", A))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<14}{'case':<34}{'size':>6}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, reps in distance_cases(args.full):
        times, results = {}, []
        for name, impl in backends.items():
            repeat = 1 if (name == "python" and len(reps) > 1000) else args.repeat
            times[name], N = best_of(lambda: half_distance_table(reps, backend=impl), repeat)
            results.append(N)
        assert all(np.array_equal(results[0], N) for N in results[1:]), "backends disagree"
        _row("half-distance", label, len(reps), times)
    for label, A in clique_cases():
        times, results = {}, []
        for name, impl in backends.items():
            times[name], res = best_of(lambda: impl.max_clique(A), args.repeat)
            results.append(res)
        assert all(r == results[0] for r in results[1:]), "backends disagree"
        _row("max-clique", label, A.shape[0], times)


def _row(kernel, label, size, times):
    cells = "".join(f"{t:>11.4f}s" for t in times.values())
    speed = times["python"] / times["compiled"] if "compiled" in times and times["compiled"] > 0 else float("nan")
    print(f"{kernel:<14}{label:<34}{size:>6}{cells}{speed:>9.1f}x")


if __name__ == "__main__":
    main()
