import itertools
import os
import random
import subprocess
import sys

import numpy as np
import pytest

from afasem import gen, kernels


def csr(labels, children):
    indptr = np.zeros(len(children) + 1, dtype=np.int64)
    np.cumsum([len(c) for c in children], out=indptr[1:])
    indices = np.array([c for cs in children for c in sorted(cs)], dtype=np.int64)
    return np.array(labels, dtype=np.int64), indptr, indices


# 0: x={x}  1: y={z}  2: z={y}  3: {}  4: {{}}  5: atom 0  6: {atom 0}  7: atom 1
HAND = csr([-1, -1, -1, -1, -1, 0, -1, 1], [[0], [2], [1], [], [3], [], [5], []])
HAND_CLASSES = [{0, 1, 2}, {3}, {4}, {5}, {6}, {7}]


def classes(block):
    out = {}
    for i, b in enumerate(block):
        out.setdefault(int(b), set()).add(i)
    return sorted(out.values(), key=min)


@pytest.mark.parametrize("refine", [kernels.refine_partition_numpy, kernels.refine_partition_jit])
def test_refine_hand_case(refine):
    assert classes(refine(*HAND)) == HAND_CLASSES


@pytest.mark.parametrize("naive", [kernels.naive_bisimulation_numpy, kernels.naive_bisimulation_jit])
def test_naive_hand_case(naive):
    rel = naive(*HAND)
    for cls in HAND_CLASSES:
        for i in cls:
            assert {j for j in range(8) if rel[i, j]} == cls


def test_blocks_numbered_by_first_occurrence():
    block = kernels.refine_partition(*HAND)
    assert block.tolist() == [0, 0, 0, 1, 2, 3, 4, 5]


def test_empty_graph():
    empty = csr([], [])
    assert kernels.refine_partition_jit(*empty).shape == (0,)
    assert kernels.refine_partition_numpy(*empty).shape == (0,)


def test_backends_agree_on_random_graphs():
    rng = random.Random(7)
    for _ in range(300):
        g = gen.random_table(rng, 1, 40)
        a = kernels.refine_partition_jit(g.labels, g.indptr, g.indices)
        b = kernels.refine_partition_numpy(g.labels, g.indptr, g.indices)
        assert np.array_equal(a, b)
        r1 = kernels.naive_bisimulation_jit(g.labels, g.indptr, g.indices)
        r2 = kernels.naive_bisimulation_numpy(g.labels, g.indptr, g.indices)
        assert np.array_equal(r1, r2)
        assert np.array_equal(r1, a[:, None] == a[None, :])


def test_high_degree_signatures():
    # a node with more than 32 children takes the np.sort path
    rng = random.Random(3)
    for _ in range(20):
        g = gen.random_table(rng, 60, 80, density=0.7)
        assert gen.agree(g.labels, g.indptr, g.indices) == 0


# --------------------------------------------------------------------------
# enumeration, checked against a brute-force isomorphism oracle


def canonical_key(labels, children, root):
    """Smallest relabelling with the root first; equal keys iff isomorphic."""
    n = len(labels)
    best = None
    for perm in itertools.permutations(range(n)):
        if perm[root] != 0:
            continue
        inv = sorted(range(n), key=lambda v: perm[v])
        key = (
            tuple(labels[v] for v in inv),
            tuple(tuple(sorted(perm[c] for c in children[v])) for v in inv),
        )
        best = key if best is None or key < best else best
    return best


def reachable(children, root):
    seen, stack = {root}, [root]
    while stack:
        for c in children[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def brute_apg_classes(n):
    """Isomorphism classes of n-node APGs over atoms {0, 1}, by exhaustive search."""
    seen = set()
    for labels in itertools.product([-1, 0, 1], repeat=n):
        atom_labels = [x for x in labels if x >= 0]
        if len(set(atom_labels)) != len(atom_labels):
            continue  # atoms are interned
        set_nodes = [v for v in range(n) if labels[v] < 0]
        for bits in itertools.product([0, 1], repeat=len(set_nodes) * n):
            children = [set() for _ in range(n)]
            for k, v in enumerate(set_nodes):
                children[v] = {c for c in range(n) if bits[k * n + c]}
            for root in range(n):
                if len(reachable(children, root)) == n:
                    seen.add(canonical_key(labels, children, root))
    return seen


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_covers_every_class(n):
    # BFS numbering is not unique per class, so classes may repeat; none may be missing
    keys = set()
    for labels, masks in gen.apgs(n):
        children = [{c for c in range(n) if (m >> c) & 1} for m in masks]
        assert len(reachable(children, 0)) == n
        keys.add(canonical_key(labels.tolist(), children, 0))
    assert keys == brute_apg_classes(n)


def test_enumeration_counts_are_stable():
    assert [gen.count_apgs(n) for n in (1, 2, 3, 4)] == [4, 12, 276, 23184]


def test_small_union_agrees():
    t = gen.table_upto(3)
    assert len(t.roots) == 4 + 12 + 276
    assert gen.agree(t.labels, t.indptr, t.indices) == 0


def test_sweep_small():
    r = gen.sweep(3, gen.table_upto(2))
    assert r.graphs == 276
    assert r.disagreements == 0


def acyclic(children, root):
    state = {}

    def visit(v):
        state[v] = 1
        for c in children[v]:
            if state.get(c) == 1 or (c not in state and not visit(c)):
                return False
        state[v] = 2
        return True

    return visit(root)


def dag_keys(n):
    keys = set()
    for labels, masks in gen.dag_apgs(n):
        children = [{c for c in range(n) if (m >> c) & 1} for m in masks]
        assert len(reachable(children, 0)) == n and acyclic(children, 0)
        keys.add(canonical_key(labels.tolist(), children, 0))
    return keys


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dag_enumeration_covers_every_acyclic_class(n):
    expected = set()
    for labels, children in brute_apg_classes(n):
        if acyclic([set(c) for c in children], 0):
            expected.add((labels, children))
    assert dag_keys(n) == expected


def test_dag_enumeration_matches_bfs_enumeration_at_four_nodes():
    bfs = set()
    for labels, masks in gen.apgs(4):
        children = [{c for c in range(4) if (m >> c) & 1} for m in masks]
        if acyclic(children, 0):
            bfs.add(canonical_key(labels.tolist(), children, 0))
    assert dag_keys(4) == bfs


def test_numpy_fallback_end_to_end():
    # AFA_JIT=0 must select the numpy kernels and still pass the fixture checks
    script = (
        "from afasem import kernels, mu_encoder as mu, gen;"
        "from afasem.langmodel import FIXTURES;"
        "assert kernels.BACKEND == 'numpy';"
        "assert all(mu.verify(mu.encode(f())).passed for f in FIXTURES.values());"
        "r = gen.sweep(2, gen.table_upto(1));"
        "assert r.disagreements == 0 and r.graphs == 12;"
        "print('ok')"
    )
    env = dict(os.environ, AFA_JIT="0")
    proc = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, env=env, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "ok"
