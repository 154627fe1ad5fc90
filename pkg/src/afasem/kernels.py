"""Hot loops: partition refinement and the naive greatest-fixpoint checker.

Graphs reach the kernels as three int64 arrays:

``labels``
    ``-1`` for a set node, otherwise a nonnegative atom code.
``indptr``, ``indices``
    CSR membership lists (``indices[indptr[i]:indptr[i+1]]`` are the children
    of node ``i``).

Each kernel has a numba implementation (``*_jit``) and a vectorized numpy
implementation (``*_numpy``). The public names ``refine_partition`` and
``naive_bisimulation`` are bound to one of them by ``AFA_JIT``.
"""

from __future__ import annotations

import numpy as np

from ._jit import JIT_ENABLED, njit

_MIX = np.uint64(0x9E3779B97F4A7C15)


def _canonical_numpy(ids: np.ndarray) -> np.ndarray:
    """Renumber ids so blocks are numbered by first occurrence."""
    _, first, inverse = np.unique(ids, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first), dtype=np.int64)
    return rank[inverse.reshape(-1)]


def initial_blocks(labels: np.ndarray) -> np.ndarray:
    # all set nodes share one block; atoms split by code
    return _canonical_numpy(np.asarray(labels, dtype=np.int64))


# --------------------------------------------------------------------------
# numpy path


def refine_partition_numpy(labels, indptr, indices) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    n = labels.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    block = initial_blocks(labels)
    owner = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    count = int(block.max()) + 1
    while True:
        # signature of a node: its block plus the set of its children's blocks
        keys = np.unique(owner * (count + 1) + block[indices]) if indices.size else np.zeros(0, np.int64)
        rows = keys // (count + 1)
        cols = keys % (count + 1)
        degree = np.bincount(rows, minlength=n)
        width = int(degree.max()) if degree.size else 0
        table = np.full((n, width + 1), -1, dtype=np.int64)
        table[:, 0] = block
        if keys.size:
            start = np.concatenate(([0], np.cumsum(degree)[:-1]))
            table[rows, np.arange(keys.size) - start[rows] + 1] = cols
        _, new = np.unique(table, axis=0, return_inverse=True)
        new = _canonical_numpy(new.reshape(-1))
        new_count = int(new.max()) + 1
        if new_count == count:
            return new
        block, count = new, new_count


def naive_bisimulation_numpy(labels, indptr, indices) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    n = labels.shape[0]
    adj = np.zeros((n, n), dtype=np.int64)
    owner = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    adj[owner, indices] = 1
    rel = labels[:, None] == labels[None, :]
    while True:
        r = rel.astype(np.int64)
        # covered[c, j]: child c of i is matched by some child of j
        covered = (r @ adj.T) > 0
        forth = (adj @ (~covered).astype(np.int64)) == 0
        # reached[i, d]: child d of j is matched by some child of i
        reached = (adj @ r) > 0
        back = ((~reached).astype(np.int64) @ adj.T) == 0
        new = rel & forth & back
        if np.array_equal(new, rel):
            return new
        rel = new


# --------------------------------------------------------------------------
# numba path


@njit
def _same_signature(a, b, block, sig_ptr, sig):
    if block[a] != block[b]:
        return False
    la = sig_ptr[a + 1] - sig_ptr[a]
    if la != sig_ptr[b + 1] - sig_ptr[b]:
        return False
    for k in range(la):
        if sig[sig_ptr[a] + k] != sig[sig_ptr[b] + k]:
            return False
    return True


@njit
def _sort_small(a, lo, hi):
    # insertion sort of a[lo:hi]; in place, no allocation
    for k in range(lo + 1, hi):
        x = a[k]
        j = k - 1
        while j >= lo and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


@njit
def _order_small(keys, order, n):
    for i in range(n):
        order[i] = i
    for k in range(1, n):
        x = order[k]
        j = k - 1
        while j >= 0 and keys[order[j]] > keys[x]:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = x


@njit
def refine_partition_jit(labels, indptr, indices):
    n = labels.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    # initial blocks: sets together, atoms by code
    max_code = -1
    for i in range(n):
        if labels[i] > max_code:
            max_code = labels[i]
    remap = np.full(max(max_code + 2, n), -1, dtype=np.int64)
    block = np.empty(n, dtype=np.int64)
    count = 0
    for i in range(n):
        c = labels[i] + 1
        if remap[c] < 0:
            remap[c] = count
            count += 1
        block[i] = remap[c]

    sig_ptr = np.zeros(n + 1, dtype=np.int64)
    sig = np.empty(indices.shape[0], dtype=np.int64)
    hashes = np.empty(n, dtype=np.uint64)
    order = np.empty(n, dtype=np.int64)
    new = np.empty(n, dtype=np.int64)
    reps = np.empty(n, dtype=np.int64)
    while True:
        # sorted, duplicate-free child blocks per node
        pos = 0
        for i in range(n):
            sig_ptr[i] = pos
            lo = pos
            for e in range(indptr[i], indptr[i + 1]):
                sig[pos] = block[indices[e]]
                pos += 1
            if pos - lo > 1:
                if pos - lo <= 32:
                    _sort_small(sig, lo, pos)
                else:
                    sig[lo:pos] = np.sort(sig[lo:pos])
                w = lo + 1
                for k in range(lo + 1, pos):
                    if sig[k] != sig[w - 1]:
                        sig[w] = sig[k]
                        w += 1
                pos = w
        sig_ptr[n] = pos
        for i in range(n):
            h = np.uint64(block[i] + 1) * _MIX
            for k in range(sig_ptr[i], sig_ptr[i + 1]):
                h = (h ^ np.uint64(sig[k] + 1)) * _MIX
                h ^= h >> np.uint64(29)
            hashes[i] = h
        if n <= 32:
            _order_small(hashes, order, n)
        else:
            order[:] = np.argsort(hashes, kind="mergesort")
        # exact grouping inside runs of equal hash
        n_new = 0
        start = 0
        while start < n:
            stop = start + 1
            while stop < n and hashes[order[stop]] == hashes[order[start]]:
                stop += 1
            first_rep = n_new
            for k in range(start, stop):
                i = order[k]
                found = -1
                for r in range(first_rep, n_new):
                    if _same_signature(i, reps[r], block, sig_ptr, sig):
                        found = r
                        break
                if found < 0:
                    reps[n_new] = i
                    found = n_new
                    n_new += 1
                new[i] = found
            start = stop
        if n_new == count:
            break
        count = n_new
        for i in range(n):
            block[i] = new[i]
    # number blocks by first occurrence
    remap[:] = -1
    out = np.empty(n, dtype=np.int64)
    nxt = 0
    for i in range(n):
        b = new[i]
        if remap[b] < 0:
            remap[b] = nxt
            nxt += 1
        out[i] = remap[b]
    return out


@njit
def naive_bisimulation_jit(labels, indptr, indices):
    n = labels.shape[0]
    rel = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            rel[i, j] = labels[i] == labels[j]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if not rel[i, j]:
                    continue
                ok = True
                for e in range(indptr[i], indptr[i + 1]):
                    c = indices[e]
                    hit = False
                    for f in range(indptr[j], indptr[j + 1]):
                        if rel[c, indices[f]]:
                            hit = True
                            break
                    if not hit:
                        ok = False
                        break
                if ok:
                    for f in range(indptr[j], indptr[j + 1]):
                        d = indices[f]
                        hit = False
                        for e in range(indptr[i], indptr[i + 1]):
                            if rel[indices[e], d]:
                                hit = True
                                break
                        if not hit:
                            ok = False
                            break
                if not ok:
                    rel[i, j] = False
                    changed = True
    return rel


if JIT_ENABLED:
    refine_partition = refine_partition_jit
    naive_bisimulation = naive_bisimulation_jit
else:
    refine_partition = refine_partition_numpy
    naive_bisimulation = naive_bisimulation_numpy

BACKEND = "numba" if JIT_ENABLED else "numpy"
