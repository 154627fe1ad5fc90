"""Graph and equation-system generators for oracles and benchmarks.

Exhaustive enumeration covers accessible pointed graphs (APGs) numbered in
BFS-canonical order: root 0, and a breadth-first walk that visits children in
ascending order discovers the nodes as 0, 1, ..., n-1. Every APG is
isomorphic to at least one such numbering. Atom nodes carry label code 0 or 1
and, as in an arena, each label occurs at most once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from . import kernels
from ._jit import JIT_ENABLED, njit
from .eqsolver import AtomTerm, EquationSystem, PairTerm, SetTerm, VarRef
from .hyperset import Arena, AtomLabel, HGraph

ATOMS = (AtomLabel("P"), AtomLabel("Q"))


@njit
def _bfs_canonical(masks, n):
    order = np.empty(n, dtype=np.int64)
    order[0] = 0
    visited = 1
    found = 1
    head = 0
    while head < found:
        m = masks[order[head]]
        head += 1
        for c in range(n):
            if (m >> c) & 1 and not (visited >> c) & 1:
                if c != found:
                    return False
                visited |= 1 << c
                order[found] = c
                found += 1
    return found == n


@njit
def _canonical_codes(n, set_nodes):
    # every assignment of child masks to set_nodes that is BFS-canonical
    k = set_nodes.shape[0]
    full = (1 << n) - 1
    masks = np.zeros(n, dtype=np.int64)
    out = []
    for code in range(1 << (n * k)):
        for j in range(k):
            masks[set_nodes[j]] = (code >> (j * n)) & full
        if _bfs_canonical(masks, n):
            out.append(code)
    return np.array(out, dtype=np.int64)


def atom_configurations(n: int) -> list[np.ndarray]:
    """Label vectors (-1 = set node) allowed for an n-node APG."""
    if n == 1:
        return [np.array([lab], dtype=np.int64) for lab in (-1, 0, 1)]
    configs = [np.full(n, -1, dtype=np.int64)]
    for k in (1, 2):
        for pos in combinations(range(1, n), k):
            for labs in permutations((0, 1), k):
                cfg = np.full(n, -1, dtype=np.int64)
                cfg[list(pos)] = labs
                configs.append(cfg)
    return configs


def _decode(n: int, labels: np.ndarray, code: int) -> list[int]:
    set_nodes = [v for v in range(n) if labels[v] < 0]
    masks = [0] * n
    for j, v in enumerate(set_nodes):
        masks[v] = (code >> (j * n)) & ((1 << n) - 1)
    return masks


def apgs(n: int):
    """Yield (labels, masks) for every BFS-canonical APG with n nodes."""
    for labels in atom_configurations(n):
        set_nodes = np.flatnonzero(labels < 0).astype(np.int64)
        for code in _canonical_codes(n, set_nodes):
            yield labels, _decode(n, labels, int(code))


def count_apgs(n: int) -> int:
    return sum(len(_canonical_codes(n, np.flatnonzero(cfg < 0).astype(np.int64))) for cfg in atom_configurations(n))


@njit
def _dag_codes(n, is_atom):
    # edges i -> j only for i < j, so the numbering is topological; bit k is edge k of
    # the row-major upper triangle. Node j > 0 is reachable iff some i < j points to it.
    m = n * (n - 1) // 2
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            src[k] = i
            dst[k] = j
            k += 1
    out = []
    for code in range(1 << m):
        ok = True
        has_pred = np.zeros(n, dtype=np.bool_)
        for e in range(m):
            if (code >> e) & 1:
                if is_atom[src[e]]:
                    ok = False
                    break
                has_pred[dst[e]] = True
        if not ok:
            continue
        for j in range(1, n):
            if not has_pred[j]:
                ok = False
                break
        if ok:
            out.append(code)
    return np.array(out, dtype=np.int64)


def dag_apgs(n: int):
    """Yield (labels, masks) for every topologically numbered acyclic APG with n nodes.

    Every acyclic APG has such a numbering with the root at 0, so every
    isomorphism class appears, usually more than once.
    """
    for labels in atom_configurations(n):
        for code in _dag_codes(n, labels >= 0):
            masks = [0] * n
            bit = 0
            for i in range(n):
                for j in range(i + 1, n):
                    if (int(code) >> bit) & 1:
                        masks[i] |= 1 << j
                    bit += 1
            yield labels, masks


@dataclass
class GraphTable:
    """Disjoint union of small graphs in kernel form, with the root of each."""

    labels: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    roots: np.ndarray

    @classmethod
    def from_masks(cls, graphs) -> "GraphTable":
        labels, children, roots = [], [], []
        for labs, masks in graphs:
            base = len(labels)
            roots.append(base)
            labels.extend(int(x) for x in labs)
            children.extend([base + c for c in range(len(masks)) if (m >> c) & 1] for m in masks)
        return cls._build(labels, children, roots)

    @classmethod
    def _build(cls, labels, children, roots) -> "GraphTable":
        indptr = np.zeros(len(children) + 1, dtype=np.int64)
        np.cumsum([len(c) for c in children], out=indptr[1:])
        indices = np.array([c for cs in children for c in cs], dtype=np.int64)
        return cls(np.array(labels, dtype=np.int64), indptr, indices, np.array(roots, dtype=np.int64))

    def hgraphs(self) -> list[HGraph]:
        arena = Arena(
            [None if lab < 0 else ATOMS[lab] for lab in self.labels],
            [tuple(sorted(set(self.indices[self.indptr[v] : self.indptr[v + 1]].tolist()))) for v in range(len(self.labels))],
        )
        return [HGraph(arena, int(r)) for r in self.roots]


# --------------------------------------------------------------------------
# oracle sweeps


@njit
def _agree(labels, indptr, indices):
    block = kernels.refine_partition_jit(labels, indptr, indices)
    rel = kernels.naive_bisimulation_jit(labels, indptr, indices)
    n = labels.shape[0]
    bad = 0
    for i in range(n):
        for j in range(n):
            if rel[i, j] != (block[i] == block[j]):
                bad += 1
    return bad


def agree(labels, indptr, indices) -> int:
    """Node pairs on which refinement and the naive checker disagree."""
    if JIT_ENABLED:
        return int(_agree(labels, indptr, indices))
    block = kernels.refine_partition_numpy(labels, indptr, indices)
    rel = kernels.naive_bisimulation_numpy(labels, indptr, indices)
    return int(np.count_nonzero(rel != (block[:, None] == block[None, :])))


@njit
def _sweep_kernel(n, labels, set_nodes, p_labels, p_indptr, p_indices):
    # each canonical APG with these labels, unioned with a fixed partner graph
    k = set_nodes.shape[0]
    full = (1 << n) - 1
    pn = p_labels.shape[0]
    total = n + pn
    masks = np.zeros(n, dtype=np.int64)
    u_labels = np.empty(total, dtype=np.int64)
    u_labels[:n] = labels
    u_labels[n:] = p_labels
    u_indptr = np.empty(total + 1, dtype=np.int64)
    u_indices = np.empty(n * n + p_indices.shape[0], dtype=np.int64)
    graphs = 0
    bad = 0
    for code in range(1 << (n * k)):
        for j in range(k):
            masks[set_nodes[j]] = (code >> (j * n)) & full
        if not _bfs_canonical(masks, n):
            continue
        graphs += 1
        e = 0
        for v in range(n):
            u_indptr[v] = e
            for c in range(n):
                if (masks[v] >> c) & 1:
                    u_indices[e] = c
                    e += 1
        for v in range(pn):
            u_indptr[n + v] = e + p_indptr[v]
        for q in range(p_indices.shape[0]):
            u_indices[e + q] = p_indices[q] + n
        e += p_indices.shape[0]
        u_indptr[total] = e
        bad += _agree(u_labels, u_indptr, u_indices[:e])
    return graphs, bad


@dataclass
class SweepResult:
    graphs: int  # APGs of the swept size
    partner_roots: int  # graphs each one was compared against
    node_pairs: int  # node pairs compared, over all unions
    disagreements: int


def sweep(n: int, partner: GraphTable) -> SweepResult:
    """Compare both checkers on every n-node APG unioned with partner."""
    graphs = bad = pairs = 0
    for labels in atom_configurations(n):
        set_nodes = np.flatnonzero(labels < 0).astype(np.int64)
        if JIT_ENABLED:
            g, b = _sweep_kernel(n, labels, set_nodes, partner.labels, partner.indptr, partner.indices)
        else:
            g = b = 0
            for lab, masks in ((labels, _decode(n, labels, int(c))) for c in _canonical_codes(n, set_nodes)):
                own = GraphTable.from_masks([(lab, masks)])
                u = _concat(own, partner)
                g += 1
                b += agree(u.labels, u.indptr, u.indices)
        graphs += g
        bad += b
        pairs += g * (n + len(partner.labels)) ** 2
    return SweepResult(graphs, len(partner.roots), pairs, bad)


def _concat(a: GraphTable, b: GraphTable) -> GraphTable:
    shift = len(a.labels)
    return GraphTable(
        np.concatenate([a.labels, b.labels]),
        np.concatenate([a.indptr[:-1], b.indptr + a.indptr[-1]]),
        np.concatenate([a.indices, b.indices + shift]),
        np.concatenate([a.roots, b.roots + shift]),
    )


def table_upto(n: int) -> GraphTable:
    return GraphTable.from_masks([g for k in range(1, n + 1) for g in apgs(k)])


def dag_table_upto(n: int) -> GraphTable:
    return GraphTable.from_masks([g for k in range(1, n + 1) for g in dag_apgs(k)])


# --------------------------------------------------------------------------
# random inputs


def random_table(rng: random.Random, n_min: int = 1, n_max: int = 12, density: float | None = None) -> GraphTable:
    """One random graph (not necessarily accessible) over two atom labels."""
    n = rng.randint(n_min, n_max)
    p = density if density is not None else rng.choice((0.1, 0.25, 0.4))
    labels = []
    atoms_used = set()
    for _ in range(n):
        lab = -1
        if rng.random() < 0.2:
            lab = rng.randrange(2)
            if lab in atoms_used:
                lab = -1
            else:
                atoms_used.add(lab)
        labels.append(lab)
    children = [[c for c in range(n) if rng.random() < p] if labels[v] < 0 else [] for v in range(n)]
    return GraphTable._build(labels, children, list(range(n)))


def random_system(rng: random.Random, n_vars: int | None = None, max_width: int = 3) -> EquationSystem:
    """A random closed, guarded system over variables V0.. and atoms P, Q."""
    n_vars = n_vars or rng.randint(1, 6)
    names = [f"V{k}" for k in range(n_vars)]

    def term(depth: int):
        r = rng.random()
        if depth >= 2 or r < 0.45:
            return VarRef(rng.choice(names)) if rng.random() < 0.7 else AtomTerm(rng.choice(ATOMS))
        if r < 0.75:
            return SetTerm(term(depth + 1) for _ in range(rng.randint(0, max_width)))
        return PairTerm(term(depth + 1), term(depth + 1))

    bindings = {}
    for v in names:
        r = rng.random()
        if r < 0.6:
            bindings[v] = SetTerm(term(1) for _ in range(rng.randint(0, max_width)))
        elif r < 0.85:
            bindings[v] = PairTerm(term(1), term(1))
        else:
            bindings[v] = AtomTerm(rng.choice(ATOMS))
    # occasional aliases; targets are never aliases at the time, so no alias cycles
    for v in names:
        targets = [w for w in names if w != v and not isinstance(bindings[w], VarRef)]
        if targets and rng.random() < 0.1:
            bindings[v] = VarRef(rng.choice(targets))
    return EquationSystem(bindings)
