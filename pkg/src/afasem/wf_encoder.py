"""Well-founded counterpart encoding and its table-driven pseudo-application.

``mbar(s) = {<<s,0>, m(s)>} ∪ {<<t,1>, m(s·t)> : s·t in L}``. Every value is a
well-founded set. ``app_star`` needs the language table as an argument: it
reads the string tags out of its inputs and looks the result up.
"""

from __future__ import annotations

import json
from collections.abc import Sequence

from . import hyperset as hs
from .errors import AfaError, NotAnEncoding, NotComposable
from .hyperset import AtomLabel, HGraph
from .langmodel import LanguageSpec, Str, decompositions, fmt, right_extensions
from .report import Check, Report, tally

ZERO = AtomLabel("0", "tag")
ONE = AtomLabel("1", "tag")


def string_tag(s: Sequence[str]) -> AtomLabel:
    return AtomLabel(json.dumps(list(s), ensure_ascii=False), "tag")


def mbar(spec: LanguageSpec, s: Sequence[str]) -> HGraph:
    s = spec.require(s)
    b = hs.ArenaBuilder()

    def entry(tag: AtomLabel, flag: AtomLabel, meaning: str) -> int:
        key = b.pair(b.atom(tag), b.atom(flag))
        return b.pair(key, b.atom(AtomLabel(meaning, "meaning")))

    items = [entry(string_tag(s), ZERO, spec.m(s))]
    items += [entry(string_tag(t), ONE, spec.m(s + t)) for t in right_extensions(spec, s)]
    root = b.new_set(items)
    return HGraph(b.freeze(), root)


def _zero_entry(X: HGraph) -> tuple[Str, HGraph]:
    # (string tag, value) of the unique pair whose key is <tag, 0>
    m = hs.minimize(X)
    arena = m.arena
    if arena.atoms[m.root] is not None:
        raise NotAnEncoding("an encoding is a set of pairs, not an atom")
    found = []
    for c in arena.children[m.root]:
        parts = hs.pair_parts(arena, c)
        if parts is None:
            continue
        key = hs.pair_parts(arena, parts[0])
        if key is None:
            continue
        tag, flag = (arena.atoms[k] for k in key)
        if flag == ZERO and tag is not None and tag.namespace == "tag":
            found.append((tag, parts[1]))
    if len(found) != 1:
        raise NotAnEncoding(f"expected exactly one 0-tagged pair, found {len(found)}")
    tag, value = found[0]
    try:
        s = json.loads(tag.label)
    except json.JSONDecodeError:
        raise NotAnEncoding(f"malformed string tag {tag.label!r}") from None
    if not isinstance(s, list) or not all(isinstance(x, str) for x in s):
        raise NotAnEncoding(f"malformed string tag {tag.label!r}")
    return tuple(s), HGraph(arena, value)


def wf_recover(spec: LanguageSpec, X: HGraph) -> str:
    _, value = _zero_entry(X)
    a = value.atom
    if a is None or a.namespace != "meaning":
        raise NotAnEncoding("the 0-tagged pair does not carry a meaning atom")
    return a.label


def app_star(spec: LanguageSpec, X: HGraph, Y: HGraph) -> HGraph:
    u, _ = _zero_entry(X)
    v, _ = _zero_entry(Y)
    if u + v not in spec:
        raise NotComposable(f"{fmt(u + v)} is not in the language")
    return mbar(spec, u + v)


def verify_wf(spec: LanguageSpec) -> Report:
    report = Report()
    encodings = {s: mbar(spec, s) for s in spec.language}

    failures = []
    for s, X in encodings.items():
        try:
            got = wf_recover(spec, X)
        except AfaError as exc:
            failures.append(f"{fmt(s)}: {exc}")
            continue
        if got != spec.m(s):
            failures.append(f"{fmt(s)}: recovered {got}, table says {spec.m(s)}")
    report.add(tally("W1", "wf-recoverability", failures, len(encodings)))

    failures, instances = [], []
    for w in spec.language:
        for s, t in decompositions(spec, w):
            instances.append((s, t))
            try:
                if not hs.bisimilar(app_star(spec, encodings[s], encodings[t]), encodings[w]):
                    failures.append(f"s={fmt(s)} t={fmt(t)}: APP* result differs from mbar(s·t)")
            except AfaError as exc:
                failures.append(f"s={fmt(s)} t={fmt(t)}: {type(exc).__name__}: {exc}")
    report.add(tally("W2", "app-star-agreement", failures, len(instances), instances))

    failures = [fmt(s) for s, X in encodings.items() if not hs.is_wellfounded(X)]
    report.add(tally("W3", "well-founded", failures, len(encodings)))

    report.add(
        Check(
            "W4",
            "table-dependence",
            None,
            witness="app_star(spec, X, Y) consults the meaning table; apply(f, x) reads only its two graphs",
        )
    )
    return report
