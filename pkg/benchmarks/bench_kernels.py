"""Compare the numba kernels with their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N] [--sizes 8,64,512]

Both backends are imported directly, so AFA_JIT does not matter here. Each
row times partition refinement and the naive checker on the same random graph
and confirms that all four results agree.
"""

import argparse
import random
import time

import numpy as np

from afasem import gen, kernels


def best_of(fn, args, repeat):
    fn(*args)  # warm up (and compile)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sizes", default="8,32,128,256")
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()

    rng = random.Random(a.seed)
    print(f"{'nodes':>6} {'edges':>7} {'refine jit':>12} {'refine np':>12} {'naive jit':>12} {'naive np':>12}")
    for n in (int(x) for x in a.sizes.split(",")):
        g = gen.random_table(rng, n, n, density=min(1.0, 3.0 / n))
        args = (g.labels, g.indptr, g.indices)
        b1, b2 = kernels.refine_partition_jit(*args), kernels.refine_partition_numpy(*args)
        r1, r2 = kernels.naive_bisimulation_jit(*args), kernels.naive_bisimulation_numpy(*args)
        assert np.array_equal(b1, b2) and np.array_equal(r1, r2) and np.array_equal(r1, b1[:, None] == b1[None, :])
        times = [
            best_of(kernels.refine_partition_jit, args, a.repeat),
            best_of(kernels.refine_partition_numpy, args, a.repeat),
            best_of(kernels.naive_bisimulation_jit, args, a.repeat),
            best_of(kernels.naive_bisimulation_numpy, args, a.repeat),
        ]
        print(f"{n:>6} {len(g.indices):>7} " + " ".join(f"{t * 1e3:>10.3f}ms" for t in times))

    # the enumeration sweep is where the kernels earn their keep
    partner = gen.table_upto(2)
    t = time.perf_counter()
    for labels in gen.atom_configurations(4):
        set_nodes = np.flatnonzero(labels < 0).astype(np.int64)
        gen._sweep_kernel(4, labels, set_nodes, partner.labels, partner.indptr, partner.indices)
    print(f"sweep, 4-node graphs against all graphs up to 2 nodes, jit:   {time.perf_counter() - t:.2f} s")
    t = time.perf_counter()
    for labels, masks in gen.apgs(4):
        u = gen._concat(gen.GraphTable.from_masks([(labels, masks)]), partner)
        block = kernels.refine_partition_numpy(u.labels, u.indptr, u.indices)
        rel = kernels.naive_bisimulation_numpy(u.labels, u.indptr, u.indices)
        assert np.array_equal(rel, block[:, None] == block[None, :])
    print(f"sweep, 4-node graphs against all graphs up to 2 nodes, numpy: {time.perf_counter() - t:.2f} s")


if __name__ == "__main__":
    main()
