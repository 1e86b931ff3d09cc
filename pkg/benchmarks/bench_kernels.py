"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs on both backends; outputs are compared before timing.
"""

import argparse
import random
import timeit

from concrete_sheaves import _pykernels, kernels
from concrete_sheaves.presheaf import enumerate_maps
from concrete_sheaves.simplicial import build_site_F, complex_to_sheaf, triangle_boundary

try:
    from concrete_sheaves import _ckernels
except ImportError:
    _ckernels = None


def chain_csp(n_vars=14, size=4, seed=0):
    # a sparse chain of functional constraints, many solutions
    rng = random.Random(seed)
    cons = []
    for v in range(1, n_vars, 2):
        cons.append((v - 1, v, [rng.randrange(size) for _ in range(size)]))
    return [size] * n_vars, cons


def partition_pairs(n=20000, k=15000, seed=2):
    rng = random.Random(seed)
    return n, [(rng.randrange(n), rng.randrange(n)) for _ in range(k)]


def with_backend(mod, fn):
    saved = kernels.solve_functional, kernels.partition
    kernels.solve_functional, kernels.partition = mod.solve_functional, mod.partition
    try:
        return fn()
    finally:
        kernels.solve_functional, kernels.partition = saved


def workloads():
    site = build_site_F(3)
    t = complex_to_sheaf(triangle_boundary(), site=site)
    chain = chain_csp()
    n, pairs = partition_pairs()
    return {
        "solve_functional/chain": lambda m: m.solve_functional(*chain),
        "partition": lambda m: m.partition(n, pairs),
        "enumerate_maps T->T on F3": lambda m: with_backend(
            m, lambda: [f.key() for f in enumerate_maps(t, t)]),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'workload':32s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for name, run in workloads().items():
        outs = {b: run(m) for b, m in backends.items()}
        if len({repr(o) for o in outs.values()}) != 1:
            raise SystemExit(f"{name}: backends disagree")
        times = {b: min(timeit.repeat(lambda: run(m), number=1, repeat=args.repeat))
                 for b, m in backends.items()}
        line = f"{name:32s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if "cython" in times:
            line += f"  {times['python'] / times['cython']:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
