"""Finite systems of set equations and their unique hyperset solutions.

A right-hand side is a nested :data:`Term`. Solving allocates one node per
variable and compiles every right-hand side straight into the arena, so the
solution is exact and needs no iteration.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Union

from .errors import EmptyLabel, InvalidAtom, NotBijective, NotClosed, ParseError, UnboundVariable, UnguardedSystem
from .hyperset import AtomLabel, ArenaBuilder, HGraph, joint


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class AtomTerm:
    atom: AtomLabel


@dataclass(frozen=True)
class SetTerm:
    members: tuple = ()

    def __init__(self, members=()):
        object.__setattr__(self, "members", tuple(members))


@dataclass(frozen=True)
class PairTerm:
    first: "Term"
    second: "Term"


Term = Union[VarRef, AtomTerm, SetTerm, PairTerm]


def term_vars(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, VarRef):
            out.add(t.name)
        elif isinstance(t, SetTerm):
            stack.extend(t.members)
        elif isinstance(t, PairTerm):
            stack.extend((t.first, t.second))
    return out


@dataclass(frozen=True)
class EquationSystem:
    bindings: Mapping[str, Term]

    def __init__(self, bindings: Mapping[str, Term]):
        object.__setattr__(self, "bindings", dict(bindings))

    @property
    def variables(self) -> list[str]:
        return list(self.bindings)

    def free_vars(self) -> set[str]:
        used = set()
        for t in self.bindings.values():
            used |= term_vars(t)
        return used - set(self.bindings)

    def check_closed(self) -> None:
        free = self.free_vars()
        if free:
            raise NotClosed(f"unbound variables: {', '.join(sorted(free))}")


@dataclass(frozen=True)
class Solution:
    assignment: Mapping[str, HGraph]

    def __getitem__(self, var: str) -> HGraph:
        return self.assignment[var]

    def __iter__(self):
        return iter(self.assignment)

    def __len__(self) -> int:
        return len(self.assignment)


def eval_term(t: Term, env: Mapping[str, int], arena: ArenaBuilder) -> int:
    """Compile t into arena; VarRefs resolve through env to existing nodes."""
    if isinstance(t, VarRef):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} is not bound") from None
    if isinstance(t, AtomTerm):
        return arena.atom(t.atom)
    if isinstance(t, SetTerm):
        return arena.new_set([eval_term(m, env, arena) for m in t.members])
    if isinstance(t, PairTerm):
        return arena.pair(eval_term(t.first, env, arena), eval_term(t.second, env, arena))
    raise TypeError(f"not a term: {t!r}")


def _fill(node: int, t: Term, env: Mapping[str, int], arena: ArenaBuilder) -> None:
    # compile a set-valued right-hand side into an already allocated node
    if isinstance(t, SetTerm):
        arena.set_members(node, [eval_term(m, env, arena) for m in t.members])
    else:
        x = eval_term(t.first, env, arena)
        y = eval_term(t.second, env, arena)
        arena.set_members(node, [arena.new_set((x,)), arena.new_set((x, y))])


def solve(sys: EquationSystem) -> Solution:
    sys.check_closed()
    arena = ArenaBuilder()
    env: dict[str, int] = {}
    for var, t in sys.bindings.items():
        if isinstance(t, (SetTerm, PairTerm)):
            env[var] = arena.new_set()
        elif isinstance(t, AtomTerm):
            env[var] = arena.atom(t.atom)
    # a bare VarRef aliases the node of whatever it eventually names
    for var, t in sys.bindings.items():
        seen = [var]
        while isinstance(t, VarRef):
            if t.name in seen:
                raise UnguardedSystem(f"variables {' = '.join(seen + [t.name])} only name each other")
            seen.append(t.name)
            t = sys.bindings[t.name]
        env[var] = env[seen[-1]]
    for var, t in sys.bindings.items():
        if isinstance(t, (SetTerm, PairTerm)):
            _fill(env[var], t, env, arena)
    frozen = arena.freeze()
    return Solution({var: HGraph(frozen, env[var]) for var in sys.bindings})


def check_solution(sys: EquationSystem, sol: Solution) -> bool:
    """True iff every equation X = T holds up to bisimulation under sol."""
    missing = set(sys.bindings) - set(sol.assignment)
    if missing:
        raise UnboundVariable(f"solution does not assign {', '.join(sorted(missing))}")
    base, roots = joint([sol[v] for v in sys.bindings])
    arena = ArenaBuilder.from_arena(base)
    env = dict(zip(sys.bindings, roots))
    compiled = {v: eval_term(t, env, arena) for v, t in sys.bindings.items()}
    blocks = arena.freeze().blocks()
    return all(blocks[compiled[v]] == blocks[env[v]] for v in sys.bindings)


def rename_vars(sys: EquationSystem, rho: Mapping[str, str]) -> EquationSystem:
    """Apply a bijective renaming; variables absent from rho keep their names."""
    unknown = set(rho) - set(sys.bindings)
    if unknown:
        raise NotBijective(f"renaming mentions unknown variables: {', '.join(sorted(unknown))}")
    full = {v: rho.get(v, v) for v in sys.bindings}
    if len(set(full.values())) != len(full):
        raise NotBijective("renaming maps two variables to the same name")

    def sub(t: Term) -> Term:
        if isinstance(t, VarRef):
            return VarRef(full.get(t.name, t.name))
        if isinstance(t, SetTerm):
            return SetTerm(sub(m) for m in t.members)
        if isinstance(t, PairTerm):
            return PairTerm(sub(t.first), sub(t.second))
        return t

    return EquationSystem({full[v]: sub(t) for v, t in sys.bindings.items()})


# --------------------------------------------------------------------------
# JSON


def term_to_doc(t: Term):
    if isinstance(t, VarRef):
        return {"var": t.name}
    if isinstance(t, AtomTerm):
        return {"atom": {"ns": t.atom.namespace, "label": t.atom.label}}
    if isinstance(t, SetTerm):
        return {"set": [term_to_doc(m) for m in t.members]}
    return {"pair": [term_to_doc(t.first), term_to_doc(t.second)]}


def term_from_doc(doc, where: str) -> Term:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ParseError("a term is an object with exactly one of var, atom, set, pair", where)
    ((kind, body),) = doc.items()
    if kind == "var":
        if not isinstance(body, str) or not body:
            raise ParseError("variable name must be a nonempty string", where)
        return VarRef(body)
    if kind == "atom":
        if not isinstance(body, dict) or set(body) != {"ns", "label"}:
            raise ParseError("atom needs exactly ns and label", where)
        try:
            return AtomTerm(AtomLabel(body["label"], body["ns"]))
        except (EmptyLabel, InvalidAtom) as exc:
            raise ParseError(str(exc), where) from None
    if kind == "set":
        if not isinstance(body, list):
            raise ParseError("set body must be a list", where)
        return SetTerm(term_from_doc(m, f"{where}.set[{k}]") for k, m in enumerate(body))
    if kind == "pair":
        if not isinstance(body, list) or len(body) != 2:
            raise ParseError("pair body must be a two-element list", where)
        return PairTerm(term_from_doc(body[0], f"{where}.pair[0]"), term_from_doc(body[1], f"{where}.pair[1]"))
    raise ParseError(f"unknown term kind {kind!r}", where)


def parse_equations(text: str) -> EquationSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict) or set(doc) != {"equations"} or not isinstance(doc["equations"], dict):
        raise ParseError('expected {"equations": {...}}', "document")
    return EquationSystem({v: term_from_doc(t, f"equations[{v!r}]") for v, t in doc["equations"].items()})


def dump_equations(sys: EquationSystem) -> str:
    return json.dumps({"equations": {v: term_to_doc(t) for v, t in sys.bindings.items()}}, ensure_ascii=False)
