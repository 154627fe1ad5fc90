"""Hypersets as accessible pointed graphs.

A graph lives in an immutable :class:`Arena` (a node table) and is addressed
by its root node. Several graphs may share one arena; every operation looks
only at the part reachable from the root. Equality of hypersets is
bisimilarity, never object identity.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels
from .errors import AtomHasNoMembers, CyclicGraph, EmptyLabel, InvalidAtom, ParseError

NAMESPACES = ("meaning", "tag", "marker")
DOLLAR = "$"


@dataclass(frozen=True)
class AtomLabel:
    label: str
    namespace: str = "meaning"

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise EmptyLabel(f"atom label must be a nonempty string, got {self.label!r}")
        if self.namespace not in NAMESPACES:
            raise InvalidAtom(f"unknown namespace {self.namespace!r}")
        if self.namespace == "marker" and self.label != DOLLAR:
            raise InvalidAtom(f"the marker namespace only holds {DOLLAR!r}")

    @property
    def key(self) -> tuple[str, str]:
        return (self.namespace, self.label)

    def __str__(self) -> str:
        return f"{self.namespace}:{self.label}"


DOLLAR_ATOM = AtomLabel(DOLLAR, "marker")

# A well-founded set term: an AtomLabel or a frozenset of terms.
NestedSetTerm = Union[AtomLabel, frozenset]


class Arena:
    """Immutable node table. ``atoms[i]`` is None for set nodes."""

    __slots__ = ("atoms", "children", "_arrays", "_blocks")

    def __init__(self, atoms: Sequence[AtomLabel | None], children: Sequence[tuple[int, ...]]):
        self.atoms = tuple(atoms)
        self.children = tuple(children)
        self._arrays = None
        self._blocks = None

    def __len__(self) -> int:
        return len(self.atoms)

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Kernel view: (labels, indptr, indices)."""
        if self._arrays is None:
            codes = {a: k for k, a in enumerate(sorted({a.key for a in self.atoms if a is not None}))}
            labels = np.array([-1 if a is None else codes[a.key] for a in self.atoms], dtype=np.int64)
            sizes = [len(c) for c in self.children]
            indptr = np.zeros(len(sizes) + 1, dtype=np.int64)
            np.cumsum(sizes, out=indptr[1:])
            indices = np.fromiter((c for cs in self.children for c in cs), dtype=np.int64, count=int(indptr[-1]))
            self._arrays = (labels, indptr, indices)
        return self._arrays

    def blocks(self) -> np.ndarray:
        """Coarsest bisimulation over all nodes, as block ids."""
        if self._blocks is None:
            self._blocks = kernels.refine_partition(*self.arrays())
        return self._blocks

    def reachable(self, root: int) -> list[int]:
        """Nodes reachable from root, breadth first, children in ascending order."""
        seen = {root}
        order = [root]
        queue = deque([root])
        while queue:
            for c in self.children[queue.popleft()]:
                if c not in seen:
                    seen.add(c)
                    order.append(c)
                    queue.append(c)
        return order


class ArenaBuilder:
    """Mutable staging area for an Arena. Atoms are interned by (namespace, label)."""

    def __init__(self):
        self.atoms: list[AtomLabel | None] = []
        self.children: list[tuple[int, ...]] = []
        self._interned: dict[tuple[str, str], int] = {}

    def __len__(self) -> int:
        return len(self.atoms)

    @classmethod
    def from_arena(cls, arena: Arena) -> "ArenaBuilder":
        """Start from a copy of arena; node ids are preserved."""
        builder = cls()
        builder.atoms = list(arena.atoms)
        builder.children = list(arena.children)
        for node, a in enumerate(arena.atoms):
            if a is not None:
                builder._interned.setdefault(a.key, node)
        return builder

    def atom(self, a: AtomLabel) -> int:
        node = self._interned.get(a.key)
        if node is None:
            node = self._interned[a.key] = len(self.atoms)
            self.atoms.append(a)
            self.children.append(())
        return node

    def new_set(self, members: Iterable[int] = ()) -> int:
        self.atoms.append(None)
        self.children.append(tuple(sorted(set(members))))
        return len(self.atoms) - 1

    def set_members(self, node: int, members: Iterable[int]) -> None:
        if self.atoms[node] is not None:
            raise AtomHasNoMembers(f"node {node} is an atom")
        self.children[node] = tuple(sorted(set(members)))

    def pair(self, x: int, y: int) -> int:
        return self.new_set((self.new_set((x,)), self.new_set((x, y))))

    def copy(self, arena: Arena, root: int) -> int:
        """Copy the subgraph reachable from root; returns the new root."""
        order = arena.reachable(root)
        new = {}
        for v in order:
            a = arena.atoms[v]
            new[v] = self.atom(a) if a is not None else self.new_set()
        for v in order:
            if arena.atoms[v] is None:
                self.children[new[v]] = tuple(sorted({new[c] for c in arena.children[v]}))
        return new[root]

    def freeze(self) -> Arena:
        return Arena(self.atoms, self.children)


@dataclass(frozen=True, eq=False)
class HGraph:
    """A hyperset: a root node in an arena. Compare with :func:`bisimilar`."""

    arena: Arena
    root: int

    @property
    def is_atom(self) -> bool:
        return self.arena.atoms[self.root] is not None

    @property
    def atom(self) -> AtomLabel | None:
        return self.arena.atoms[self.root]

    def nodes(self) -> list[int]:
        return self.arena.reachable(self.root)

    def __len__(self) -> int:
        return len(self.nodes())

    def __repr__(self) -> str:
        if self.is_atom:
            return f"HGraph(atom {self.atom})"
        return f"HGraph({len(self)} nodes)"


def _single(builder: ArenaBuilder, root: int) -> HGraph:
    return HGraph(builder.freeze(), root)


def joint(graphs: Sequence[HGraph]) -> tuple[Arena, list[int]]:
    """One arena holding all graphs, and their roots in it."""
    if graphs and all(g.arena is graphs[0].arena for g in graphs):
        return graphs[0].arena, [g.root for g in graphs]
    builder = ArenaBuilder()
    roots = [builder.copy(g.arena, g.root) for g in graphs]
    return builder.freeze(), roots


# --------------------------------------------------------------------------
# construction


def new_atom(a: AtomLabel) -> HGraph:
    builder = ArenaBuilder()
    return _single(builder, builder.atom(a))


def empty_set() -> HGraph:
    builder = ArenaBuilder()
    return _single(builder, builder.new_set())


def omega() -> HGraph:
    """The hyperset satisfying X = {X}."""
    builder = ArenaBuilder()
    node = builder.new_set()
    builder.set_members(node, [node])
    return _single(builder, node)


def set_of(elems: Sequence[HGraph]) -> HGraph:
    builder = ArenaBuilder()
    members = [builder.copy(e.arena, e.root) for e in elems]
    return _single(builder, builder.new_set(members))


def pair(x: HGraph, y: HGraph) -> HGraph:
    """Kuratowski pair {{x},{x,y}}."""
    builder = ArenaBuilder()
    rx = builder.copy(x.arena, x.root)
    ry = builder.copy(y.arena, y.root)
    return _single(builder, builder.pair(rx, ry))


def members(h: HGraph) -> list[HGraph]:
    if h.is_atom:
        raise AtomHasNoMembers(f"{h.atom} is an atom")
    return [HGraph(h.arena, c) for c in h.arena.children[h.root]]


# --------------------------------------------------------------------------
# equality


def bisimilar(a: HGraph, b: HGraph) -> bool:
    arena, (ra, rb) = joint([a, b])
    blocks = arena.blocks()
    return bool(blocks[ra] == blocks[rb])


def bisimilar_naive(a: HGraph, b: HGraph) -> bool:
    """Same answer as :func:`bisimilar`, by deleting pairs from the full relation."""
    arena, (ra, rb) = joint([a, b])
    return bool(kernels.naive_bisimulation(*arena.arrays())[ra, rb])


def quotient(arena: Arena, roots: Sequence[int]) -> tuple[Arena, list[int]]:
    """Collapse the part of arena reachable from roots by bisimilarity."""
    blocks = arena.blocks()
    new_of_block: dict[int, int] = {}
    reps: list[int] = []
    queue = deque()
    for r in roots:
        if int(blocks[r]) not in new_of_block:
            new_of_block[int(blocks[r])] = len(reps)
            reps.append(r)
            queue.append(r)
    while queue:
        for c in arena.children[queue.popleft()]:
            b = int(blocks[c])
            if b not in new_of_block:
                new_of_block[b] = len(reps)
                reps.append(c)
                queue.append(c)
    atoms = [arena.atoms[v] for v in reps]
    children = [tuple(sorted({new_of_block[int(blocks[c])] for c in arena.children[v]})) for v in reps]
    out = Arena(atoms, children)
    out._blocks = np.arange(len(reps), dtype=np.int64)
    return out, [new_of_block[int(blocks[r])] for r in roots]


def minimize(h: HGraph) -> HGraph:
    arena, (root,) = quotient(h.arena, [h.root])
    return HGraph(arena, root)


def is_minimal(h: HGraph) -> bool:
    nodes = h.nodes()
    blocks = h.arena.blocks()
    return len({int(blocks[v]) for v in nodes}) == len(nodes)


# --------------------------------------------------------------------------
# pairs


def pair_parts(arena: Arena, node: int) -> tuple[int, int] | None:
    """Decode node as a Kuratowski pair, up to bisimulation.

    Returns representative nodes (x, y) in the same arena, or None.
    """
    if arena.atoms[node] is not None:
        return None
    blocks = arena.blocks()
    member_blocks: dict[int, int] = {}
    for c in arena.children[node]:
        if arena.atoms[c] is not None:
            return None
        member_blocks.setdefault(int(blocks[c]), c)

    def inner(v: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in arena.children[v]:
            out.setdefault(int(blocks[c]), c)
        return out

    if len(member_blocks) == 1:
        (q,) = member_blocks.values()
        qs = inner(q)
        if len(qs) == 1:
            (x,) = qs.values()
            return x, x
        return None
    if len(member_blocks) == 2:
        q1, q2 = (inner(q) for q in member_blocks.values())
        if len(q1) == 2:
            q1, q2 = q2, q1
        if len(q1) == 1 and len(q2) == 2 and q1.keys() <= q2.keys():
            (xb,) = q1
            (yb,) = q2.keys() - {xb}
            return q1[xb], q2[yb]
    return None


def decode_pair(h: HGraph) -> tuple[HGraph, HGraph] | None:
    m = minimize(h)
    parts = pair_parts(m.arena, m.root)
    if parts is None:
        return None
    return HGraph(m.arena, parts[0]), HGraph(m.arena, parts[1])


# --------------------------------------------------------------------------
# well-foundedness


def is_wellfounded(h: HGraph) -> bool:
    arena = h.arena
    state = {h.root: 1}
    stack = [(h.root, iter(arena.children[h.root]))]
    while stack:
        v, it = stack[-1]
        for c in it:
            s = state.get(c, 0)
            if s == 1:
                return False
            if s == 0:
                state[c] = 1
                stack.append((c, iter(arena.children[c])))
                break
        else:
            state[v] = 2
            stack.pop()
    return True


def decorate(h: HGraph) -> NestedSetTerm:
    """Mostowski collapse of a well-founded graph."""
    if not is_wellfounded(h):
        raise CyclicGraph("graph has a membership cycle; no well-founded decoration exists")
    arena = h.arena
    value: dict[int, NestedSetTerm] = {}
    stack = [h.root]
    while stack:
        v = stack[-1]
        if v in value:
            stack.pop()
            continue
        pending = [c for c in arena.children[v] if c not in value]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        a = arena.atoms[v]
        value[v] = a if a is not None else frozenset(value[c] for c in arena.children[v])
    return value[h.root]


def format_term(t: NestedSetTerm) -> str:
    if isinstance(t, AtomLabel):
        return str(t)
    return "{" + ", ".join(sorted(format_term(x) for x in t)) + "}"


# --------------------------------------------------------------------------
# I/O


def graph_to_doc(h: HGraph) -> dict:
    order = h.nodes()
    ids = {v: k for k, v in enumerate(order)}
    nodes = []
    for v in order:
        a = h.arena.atoms[v]
        if a is not None:
            nodes.append({"id": ids[v], "kind": "atom", "ns": a.namespace, "label": a.label})
        else:
            nodes.append({"id": ids[v], "kind": "set", "members": sorted(ids[c] for c in h.arena.children[v])})
    return {"root": ids[h.root], "nodes": nodes}


def serialize_graph(h: HGraph) -> str:
    return json.dumps(graph_to_doc(h), ensure_ascii=False)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def graph_from_doc(doc, where: str = "graph") -> HGraph:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", where)
    if set(doc) != {"root", "nodes"}:
        raise ParseError(f"expected keys 'root' and 'nodes', got {sorted(doc)}", where)
    raw = doc["nodes"]
    if not isinstance(raw, list):
        raise ParseError("'nodes' must be a list", f"{where}.nodes")
    entries: dict[int, dict] = {}
    for k, node in enumerate(raw):
        at = f"{where}.nodes[{k}]"
        if not isinstance(node, dict) or not _is_int(node.get("id")) or node["id"] < 0:
            raise ParseError("node needs a nonnegative integer 'id'", at)
        if node["id"] in entries:
            raise ParseError(f"duplicate node id {node['id']}", at)
        kind = node.get("kind")
        if kind == "atom":
            if set(node) != {"id", "kind", "ns", "label"}:
                raise ParseError("atom nodes carry exactly id, kind, ns, label", at)
            try:
                AtomLabel(node["label"], node["ns"])
            except (EmptyLabel, InvalidAtom) as exc:
                raise ParseError(str(exc), at) from None
        elif kind == "set":
            if set(node) != {"id", "kind", "members"}:
                raise ParseError("set nodes carry exactly id, kind, members", at)
            if not isinstance(node["members"], list) or not all(_is_int(m) for m in node["members"]):
                raise ParseError("'members' must be a list of node ids", at)
        else:
            raise ParseError(f"unknown node kind {kind!r}", at)
        entries[node["id"]] = node
    root = doc["root"]
    if not _is_int(root) or root not in entries:
        raise ParseError(f"root {root!r} is not a node id", f"{where}.root")
    builder = ArenaBuilder()
    local: dict[int, int] = {}
    for nid, node in entries.items():
        if node["kind"] == "atom":
            local[nid] = builder.atom(AtomLabel(node["label"], node["ns"]))
        else:
            local[nid] = builder.new_set()
    for k, node in enumerate(raw):
        if node["kind"] == "set":
            missing = [m for m in node["members"] if m not in entries]
            if missing:
                raise ParseError(f"unknown member id {missing[0]}", f"{where}.nodes[{k}].members")
            builder.set_members(local[node["id"]], (local[m] for m in node["members"]))
    return HGraph(builder.freeze(), local[root])


def parse_graph(text: str) -> HGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return graph_from_doc(doc)


def to_dot(h: HGraph) -> str:
    order = h.nodes()
    ids = {v: k for k, v in enumerate(order)}
    lines = ["digraph hyperset {"]
    for v in order:
        a = h.arena.atoms[v]
        if a is None:
            lines.append(f'  n{ids[v]} [shape=circle, label=""];')
        else:
            label = json.dumps(str(a), ensure_ascii=False)
            lines.append(f"  n{ids[v]} [shape=box, label={label}];")
    for v in order:
        for c in sorted(h.arena.children[v], key=ids.__getitem__):
            lines.append(f"  n{ids[v]} -> n{ids[c]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
