"""Relational semantics for quantified clauses, via quantifier storage.

A clause's semantic value is the set of its scope readings: each argument's
quantifier goes into a store, and every retrieval order discharges the store
outermost-first into one fully scoped reading.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import permutations
from typing import Union

from .errors import EmptyArguments, IndexOutOfRange, ParseError


@dataclass(frozen=True)
class QuantNP:
    quantifier: str
    noun: str

    def __post_init__(self):
        if not self.quantifier or not self.noun:
            raise ValueError("quantifier and noun must be nonempty")


@dataclass(frozen=True)
class Clause:
    predicate: str
    arguments: tuple[QuantNP, ...]

    def __post_init__(self):
        object.__setattr__(self, "arguments", tuple(self.arguments))
        if not self.arguments:
            raise EmptyArguments(f"clause {self.predicate!r} has no arguments")

    @property
    def arity(self) -> int:
        return len(self.arguments)


@dataclass(frozen=True)
class Pred:
    predicate: str
    variables: tuple[str, ...]


@dataclass(frozen=True)
class Quant:
    quantifier: str
    variable: str
    noun: str
    body: "Reading"


Reading = Union[Quant, Pred]


@dataclass(frozen=True)
class SemValue:
    readings: frozenset

    def rendered(self) -> list[str]:
        return sorted(render(r) for r in self.readings)

    def __len__(self) -> int:
        return len(self.readings)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemValue):
            return NotImplemented
        return set(self.rendered()) == set(other.rendered())

    def __hash__(self) -> int:
        return hash(frozenset(self.rendered()))


def parse_clause(text: str) -> Clause:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return clause_from_doc(doc)


def clause_from_doc(doc) -> Clause:
    if not isinstance(doc, dict) or set(doc) != {"pred", "args"}:
        raise ParseError("expected keys pred and args", "clause")
    if not isinstance(doc["pred"], str) or not doc["pred"]:
        raise ParseError("pred must be a nonempty string", "clause.pred")
    if not isinstance(doc["args"], list):
        raise ParseError("args must be a list", "clause.args")
    args = []
    for k, a in enumerate(doc["args"]):
        at = f"clause.args[{k}]"
        if not isinstance(a, dict) or set(a) != {"quant", "noun"}:
            raise ParseError("expected keys quant and noun", at)
        if not all(isinstance(a[f], str) and a[f] for f in ("quant", "noun")):
            raise ParseError("quant and noun must be nonempty strings", at)
        args.append(QuantNP(a["quant"], a["noun"]))
    return Clause(doc["pred"], tuple(args))


def retrieve(clause: Clause, order: tuple[int, ...]) -> Reading:
    """Discharge the store in the given order; order[0] takes widest scope."""
    var = {arg: f"x{depth + 1}" for depth, arg in enumerate(order)}
    reading: Reading = Pred(clause.predicate, tuple(var[i] for i in range(clause.arity)))
    for arg in reversed(order):
        np_ = clause.arguments[arg]
        reading = Quant(np_.quantifier, var[arg], np_.noun, reading)
    return reading


def sv(clause: Clause) -> SemValue:
    return SemValue(frozenset(retrieve(clause, order) for order in permutations(range(clause.arity))))


def render(r: Reading) -> str:
    if isinstance(r, Pred):
        return "(" + " ".join((r.predicate, *r.variables)) + ")"
    return f"({r.quantifier} {r.variable} {r.noun} {render(r.body)})"


def reading_ok(r: Reading, clause: Clause) -> bool:
    """Each argument quantified once, distinct binders, every predicate variable bound."""
    bound, quants = [], []
    while isinstance(r, Quant):
        bound.append(r.variable)
        quants.append(QuantNP(r.quantifier, r.noun))
        r = r.body
    if not isinstance(r, Pred) or r.predicate != clause.predicate:
        return False
    if len(set(bound)) != len(bound) or set(r.variables) != set(bound) or len(r.variables) != clause.arity:
        return False
    # argument i must be bound by a quantifier carrying argument i's content
    binder = dict(zip(bound, quants))
    return all(binder[v] == clause.arguments[i] for i, v in enumerate(r.variables))


def systematicity_check(clause: Clause, position: int, replacement: QuantNP) -> bool:
    """Does the semantic value change exactly when the constituent's content does?"""
    if not 0 <= position < clause.arity:
        raise IndexOutOfRange(f"position {position} is outside 0..{clause.arity - 1}")
    args = list(clause.arguments)
    args[position] = replacement
    other = replace(clause, arguments=tuple(args))
    same_content = clause.arguments[position] == replacement
    return same_content == (sv(clause) == sv(other))
