"""Compare the pure-Python and compiled diagram kernels.

Times three workloads on identical inputs: canonical forms of random
diagrams, one-step rewrite fans, and one full bidirectional search. Run as

    python benchmarks/bench_kernel.py [--trials N]
"""

import argparse
import random
import time

from cob3 import _kernel_py
from cob3.layers import term_to_state
from cob3.rewrite import _entries
from cob3.terms import random_term

try:
    from cob3 import _kernel_cy
except ImportError:
    _kernel_cy = None


def bench_nf(kernel, states):
    kernel._NF_CACHE.clear()
    t0 = time.perf_counter()
    out = [kernel.nf(s) for s in states]
    return time.perf_counter() - t0, out


def bench_successors(kernel, states, entries):
    t0 = time.perf_counter()
    out = [kernel.successors(s, entries) for s in states]
    return time.perf_counter() - t0, out


def bench_search(select):
    """The hardest standard search: colegs derived from the 24-rule set."""
    import importlib
    import os

    os.environ["COB3_PURE_KERNEL"] = "1" if select == "pure" else "0"
    import cob3.kernel
    import cob3.rewrite

    importlib.reload(cob3.kernel)
    importlib.reload(cob3.rewrite)
    t0 = time.perf_counter()
    r = cob3.rewrite.find_path(
        "(pe(P) * id) . comul",
        "(id * pe(P)) . comul",
        rules="CF_LEGS",
        max_steps=24,
        max_extra_layers=4,
    )
    dt = time.perf_counter() - t0
    assert r.found
    return dt, (len(r.steps), r.explored)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    args = ap.parse_args()

    rng = random.Random(99)
    states = [
        term_to_state(random_term(rng, max_gens=9)) for _ in range(args.trials)
    ]
    entries, _ = _entries("G2_FULL")

    kernels = [("pure", _kernel_py)]
    if _kernel_cy is not None:
        kernels.append(("compiled", _kernel_cy))
    else:
        print("compiled kernel not built; timing the pure one only")

    results = {}
    for name, k in kernels:
        t_nf, nfs = bench_nf(k, states)
        t_succ, succ = bench_successors(k, nfs[: args.trials // 10], entries)
        results[name] = (t_nf, t_succ, nfs, succ)
        print(f"{name:>9}: nf x{args.trials} {t_nf:.3f}s   "
              f"successors x{args.trials // 10} {t_succ:.3f}s")

    if len(results) == 2:
        assert results["pure"][2] == results["compiled"][2], "nf mismatch"
        assert results["pure"][3] == results["compiled"][3], "successor mismatch"
        print("outputs: identical on every input")

    for select in [n for n, _ in kernels]:
        dt, (steps, explored) = bench_search(select)
        print(f"{select:>9}: colegs search {dt:.2f}s "
              f"({steps} steps, {explored} states)")


if __name__ == "__main__":
    main()
