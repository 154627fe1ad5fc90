"""The compositional encoding mu of a finite language, and its verifier.

Every string s gets an indeterminate X_s bound to a set of pairs:

* ``<X_$, m(s)>`` so that applying mu(s) to mu($) gives back m(s);
* ``<X_t, X_st>`` for every t with s·t in the language (compositionality);
* ``<ctx(x, y), m(x·s·y)>`` for every occurrence of s inside a string
  x·s·y of the language.

The context pairs make two strings bisimilar exactly when they are
substitutable everywhere with no change of meaning, which is what keeps every
mu(s) a function. The tags name the surrounding strings x and y, never s.
X_$ = {<X_$, X_$>} and the auxiliary X_s$ = m(s) complete the system.
"""

from __future__ import annotations

import json
import re
from collections.abc import Sequence
from dataclasses import dataclass

from . import hyperset as hs
from .eqsolver import AtomTerm, EquationSystem, PairTerm, SetTerm, Solution, Term, VarRef, check_solution, solve
from .errors import (
    AfaError,
    Ambiguous,
    BrokenEncoding,
    NoMatch,
    NotAFunction,
    NotInImage,
    NotInLanguage,
    NotSymbols,
    NotSynonyms,
    ParseError,
)
from .hyperset import AtomLabel, HGraph, bisimilar
from .langmodel import (
    SEPARATOR,
    LanguageSpec,
    Str,
    contexts,
    decompositions,
    fmt,
    right_extensions,
    spec_from_doc,
    spec_to_doc,
    synonym_pairs,
    synonyms,
)
from .report import Check, Report, tally

VAR_DOLLAR = "X$"
_VAR_RE = re.compile(r"^(X\$?)(\[.*\])$")


def var_of(s: Sequence[str]) -> str:
    return "X" + json.dumps(list(s), ensure_ascii=False)


def var_meaning_of(s: Sequence[str]) -> str:
    return "X$" + json.dumps(list(s), ensure_ascii=False)


def context_tag(x: Sequence[str], y: Sequence[str]) -> AtomLabel:
    return AtomLabel(json.dumps([list(x), list(y)], ensure_ascii=False), "tag")


def meaning_atom(label: str) -> AtomLabel:
    return AtomLabel(label, "meaning")


def build_equations(spec: LanguageSpec) -> EquationSystem:
    bindings: dict[str, Term] = {}
    for s in spec.language:
        pairs: list[Term] = [PairTerm(VarRef(VAR_DOLLAR), AtomTerm(meaning_atom(spec.m(s))))]
        pairs += [PairTerm(VarRef(var_of(t)), VarRef(var_of(s + t))) for t in right_extensions(spec, s)]
        pairs += [
            PairTerm(AtomTerm(context_tag(x, y)), AtomTerm(meaning_atom(spec.m(x + s + y))))
            for x, y in contexts(spec, s)
        ]
        bindings[var_of(s)] = SetTerm(pairs)
    bindings[VAR_DOLLAR] = SetTerm([PairTerm(VarRef(VAR_DOLLAR), VarRef(VAR_DOLLAR))])
    for s in spec.language:
        bindings[var_meaning_of(s)] = AtomTerm(meaning_atom(spec.m(s)))
    return EquationSystem(bindings)


@dataclass(frozen=True, eq=False)
class MuEncoding:
    spec: LanguageSpec
    system: EquationSystem
    mu_of: dict[Str, HGraph]
    mu_dollar: HGraph
    image: tuple[HGraph, ...]
    solution: Solution

    def mu(self, s: Sequence[str]) -> HGraph:
        try:
            return self.mu_of[tuple(s)]
        except KeyError:
            raise NotInLanguage(f"{fmt(s)} is not in the language") from None


def _distinct(graphs: Sequence[HGraph]) -> tuple[HGraph, ...]:
    arena, roots = hs.joint(list(graphs))
    blocks = arena.blocks()
    seen, out = set(), []
    for g, r in zip(graphs, roots):
        if int(blocks[r]) not in seen:
            seen.add(int(blocks[r]))
            out.append(g)
    return tuple(out)


def _assemble(spec: LanguageSpec, system: EquationSystem, solution: Solution, mu_of, mu_dollar) -> MuEncoding:
    image = _distinct([mu_of[s] for s in spec.language]) if spec.language else ()
    return MuEncoding(spec, system, mu_of, mu_dollar, image, solution)


def encode(spec: LanguageSpec) -> MuEncoding:
    system = build_equations(spec)
    solution = solve(system)
    names = [var_of(s) for s in spec.language] + [VAR_DOLLAR]
    arena, roots = hs.quotient(solution[VAR_DOLLAR].arena, [solution[v].root for v in names])
    graphs = [HGraph(arena, r) for r in roots]
    mu_of = dict(zip(spec.language, graphs))
    return _assemble(spec, system, solution, mu_of, graphs[-1])


# --------------------------------------------------------------------------
# application


def _decoded_members(arena: hs.Arena, node: int) -> list[tuple[int, int]]:
    if arena.atoms[node] is not None:
        return []
    return [p for p in (hs.pair_parts(arena, c) for c in arena.children[node]) if p is not None]


def _apply_node(arena: hs.Arena, f: int, x: int) -> int:
    decoded = _decoded_members(arena, f)
    if not decoded:
        raise NotAFunction("no member of the function graph decodes as an ordered pair")
    blocks = arena.blocks()
    values = [v for k, v in decoded if blocks[k] == blocks[x]]
    if not values:
        raise NoMatch("no pair in the function graph has a first component bisimilar to the argument")
    if len({int(blocks[v]) for v in values}) > 1:
        raise Ambiguous("bisimilar arguments are paired with non-bisimilar values")
    return values[0]


def apply(f: HGraph, x: HGraph) -> HGraph:
    """Set-theoretic application: the value paired with x in f."""
    arena, (rf, rx) = hs.joint([f, x])
    return hs.minimize(HGraph(arena, _apply_node(arena, rf, rx)))


def _meaning_label(g: HGraph) -> str:
    a = g.atom
    if a is None or a.namespace != "meaning":
        raise BrokenEncoding(f"expected a meaning atom, got {g!r}")
    return a.label


def recover(enc: MuEncoding, s: Sequence[str]) -> str:
    g = enc.mu(s)
    try:
        return _meaning_label(apply(g, enc.mu_dollar))
    except (NotAFunction, NoMatch, Ambiguous) as exc:
        raise BrokenEncoding(f"cannot recover the meaning of {fmt(s)}: {exc}") from exc


def mu_of_meaning(enc: MuEncoding, h: HGraph) -> str:
    """The meaning carried by an element of the image of mu."""
    if not any(bisimilar(h, g) for g in enc.image):
        raise NotInImage("graph is not bisimilar to any mu(s)")
    return _meaning_label(apply(h, enc.mu_dollar))


# --------------------------------------------------------------------------
# verification


def _functional(arena: hs.Arena, node: int) -> bool:
    blocks = arena.blocks()
    value_of: dict[int, int] = {}
    for k, v in _decoded_members(arena, node):
        if value_of.setdefault(int(blocks[k]), int(blocks[v])) != int(blocks[v]):
            return False
    return True


def verify(enc: MuEncoding) -> Report:
    spec = enc.spec
    report = Report()

    failures, instances = [], []
    for w in spec.language:
        for s, t in decompositions(spec, w):
            instances.append((s, t))
            where = f"s={fmt(s)} t={fmt(t)}"
            try:
                if not bisimilar(apply(enc.mu(s), enc.mu(t)), enc.mu(w)):
                    failures.append(f"{where}: mu(s)(mu(t)) differs from mu(s·t)")
            except AfaError as exc:
                failures.append(f"{where}: {type(exc).__name__}: {exc}")
    report.add(tally("V1", "compositionality", failures, len(instances), instances))

    failures = []
    for s in spec.language:
        try:
            got = recover(enc, s)
        except AfaError as exc:
            failures.append(f"{fmt(s)}: {exc}")
            continue
        if got != spec.m(s):
            failures.append(f"{fmt(s)}: recovered {got}, table says {spec.m(s)}")
    report.add(tally("V2", "recoverability", failures, len(spec.language)))

    pairs = synonym_pairs(spec)
    failures = [f"{fmt(a)} ~ {fmt(b)}" for a, b in pairs if not bisimilar(enc.mu(a), enc.mu(b))]
    report.add(tally("V3", "synonymy", failures, len(pairs), pairs))

    failures = []
    for key, g in [*((fmt(s), enc.mu(s)) for s in spec.language), ("$", enc.mu_dollar)]:
        if not _functional(g.arena, g.root):
            failures.append(f"mu({key}) pairs one argument with two values")
    report.add(tally("V4", "functionality", failures, len(spec.language) + 1))

    ok = bisimilar(enc.mu_dollar, hs.omega())
    report.add(tally("V5", "dollar-is-omega", [] if ok else ["mu($) is not bisimilar to Omega"], 1))

    ok = check_solution(enc.system, enc.solution)
    report.add(tally("V6", "solution-fixpoint", [] if ok else ["some equation is violated"], len(enc.system.bindings)))

    failures, checked = [], 0
    L = spec.language
    for i in range(len(L)):
        for j in range(i + 1, len(L)):
            if spec.m(L[i]) != spec.m(L[j]):
                checked += 1
                if bisimilar(enc.mu(L[i]), enc.mu(L[j])):
                    failures.append(f"{fmt(L[i])} and {fmt(L[j])} differ in meaning but share mu")
    report.add(tally("V7", "separation", failures, checked))

    collapsed = [
        (L[i], L[j])
        for i in range(len(L))
        for j in range(i + 1, len(L))
        if bisimilar(enc.mu(L[i]), enc.mu(L[j])) and not synonyms(spec, L[i], L[j])
    ]
    note = ", ".join(f"{fmt(a)}~{fmt(b)}" for a, b in collapsed) or "none"
    report.add(Check("D1", "nonsynonym-collapse", None, len(collapsed), note, collapsed))
    return report


# --------------------------------------------------------------------------
# the swap argument


def _swap_str(s: Sequence[str], a: str, b: str) -> list[str]:
    return [b if x == a else a if x == b else x for x in s]


def _swap_var(name: str, a: str, b: str) -> str:
    m = _VAR_RE.match(name)
    if m is None:
        return name
    return m.group(1) + json.dumps(_swap_str(json.loads(m.group(2)), a, b), ensure_ascii=False)


def _swap_term(t: Term, a: str, b: str) -> Term:
    if isinstance(t, VarRef):
        return VarRef(_swap_var(t.name, a, b))
    if isinstance(t, AtomTerm):
        if t.atom.namespace != "tag":
            return t
        x, y = json.loads(t.atom.label)
        return AtomTerm(context_tag(_swap_str(x, a, b), _swap_str(y, a, b)))
    if isinstance(t, SetTerm):
        return SetTerm(_swap_term(m, a, b) for m in t.members)
    return PairTerm(_swap_term(t.first, a, b), _swap_term(t.second, a, b))


def _normal(t: Term):
    if isinstance(t, VarRef):
        return ("var", t.name)
    if isinstance(t, AtomTerm):
        return ("atom", t.atom.namespace, t.atom.label)
    if isinstance(t, SetTerm):
        return ("set", tuple(sorted({_normal(m) for m in t.members})))
    return ("pair", _normal(t.first), _normal(t.second))


def normalize_system(sys: EquationSystem) -> tuple:
    return tuple(sorted((v, _normal(t)) for v, t in sys.bindings.items()))


def swap_invariance_check(spec: LanguageSpec, a: str, b: str) -> bool:
    """Is the equation system unchanged when the symbols a and b trade places?

    If so, swapping X_a and X_b carries the unique solution to itself, which
    forces mu(a) = mu(b).
    """
    for sym in (a, b):
        if not isinstance(sym, str) or sym not in spec.alphabet:
            raise NotSymbols(f"{sym!r} is not a symbol of the alphabet")
    for sym in (a, b):
        if (sym,) not in spec:
            raise NotSynonyms(f"{sym} is not a string of the language")
    if not synonyms(spec, (a,), (b,)):
        raise NotSynonyms(f"{a} and {b} are not synonyms")
    sys = build_equations(spec)
    swapped = EquationSystem({_swap_var(v, a, b): _swap_term(t, a, b) for v, t in sys.bindings.items()})
    return normalize_system(swapped) == normalize_system(sys)


# --------------------------------------------------------------------------
# bundles


def bundle_key(s: Sequence[str]) -> str:
    return SEPARATOR.join(s)


def bundle_to_doc(enc: MuEncoding) -> dict:
    graphs = {"$": hs.graph_to_doc(enc.mu_dollar)}
    for s in enc.spec.language:
        graphs[bundle_key(s)] = hs.graph_to_doc(enc.mu(s))
    return {"spec": spec_to_doc(enc.spec), "graphs": graphs}


def dump_bundle(enc: MuEncoding) -> str:
    return json.dumps(bundle_to_doc(enc), ensure_ascii=False)


def bundle_from_doc(doc) -> MuEncoding:
    if not isinstance(doc, dict) or set(doc) != {"spec", "graphs"} or not isinstance(doc["graphs"], dict):
        raise ParseError('expected {"spec": ..., "graphs": {...}}', "bundle")
    spec = spec_from_doc(doc["spec"])
    expected = {"$"} | {bundle_key(s) for s in spec.language}
    if set(doc["graphs"]) != expected:
        extra = sorted(set(doc["graphs"]) ^ expected)
        raise ParseError(f"graph keys do not match the language: {extra}", "bundle.graphs")
    loaded = {k: hs.graph_from_doc(g, f"graphs[{k!r}]") for k, g in doc["graphs"].items()}
    builder = hs.ArenaBuilder()
    roots = {k: builder.copy(g.arena, g.root) for k, g in loaded.items()}
    meaning_nodes = {s: builder.atom(meaning_atom(spec.m(s))) for s in spec.language}
    arena = builder.freeze()
    mu_of = {s: HGraph(arena, roots[bundle_key(s)]) for s in spec.language}
    mu_dollar = HGraph(arena, roots["$"])
    assignment = {var_of(s): mu_of[s] for s in spec.language}
    assignment[VAR_DOLLAR] = mu_dollar
    assignment.update({var_meaning_of(s): HGraph(arena, meaning_nodes[s]) for s in spec.language})
    return _assemble(spec, build_equations(spec), Solution(assignment), mu_of, mu_dollar)


def load_bundle(text: str) -> MuEncoding:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return bundle_from_doc(doc)
