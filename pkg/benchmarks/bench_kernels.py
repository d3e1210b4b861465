"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --repeat 3
"""

import argparse
import time

from latglue import kernels
from latglue.discform import discriminant_group
from latglue.lattice import direct_sum, make_ade, negated

CASES = [
    ("roots of E8", lambda: negated(make_ade("E8")).gram, 2),
    ("norm <= 4 in E8", lambda: negated(make_ade("E8")).gram, 4),
    ("roots of D16", lambda: negated(make_ade("D16")).gram, 2),
    ("roots of E8^3 + A2", lambda: negated(direct_sum([make_ade("E8")] * 3 + [make_ade("A2")])).gram, 2),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled backend not available; only the fallback will run")
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"{'case':<26}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, make, bound in CASES:
        plan = kernels.ShortVectorPlan(make())
        row, results = [], []
        for b in backends:
            t, res = best_of(lambda: kernels.short_vectors(plan, bound, backend=b), args.repeat)
            row.append(t)
            results.append(res)
        assert all(r == results[0] for r in results), "backends disagree"
        speed = f"{row[0] / row[-1]:>9.1f}x" if len(row) > 1 else ""
        print(f"{name:<26}" + "".join(f"{t:>11.3f}s" for t in row) + speed)
    g = discriminant_group(direct_sum([make_ade("A2")] * 7))
    row, results = [], []
    for b in backends:
        t, res = best_of(lambda: g.q_values(backend=b), args.repeat)
        row.append(t)
        results.append(res)
    assert all(r == results[0] for r in results), "backends disagree"
    speed = f"{row[0] / row[-1]:>9.1f}x" if len(row) > 1 else ""
    print(f"{'q table of A2^7':<26}" + "".join(f"{t:>11.3f}s" for t in row) + speed)


if __name__ == "__main__":
    main()
