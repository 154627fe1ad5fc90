"""Finite languages with a meaning table, and substitutional synonymy.

Strings are tuples of symbols, never joined text, so multi-character symbols
cannot run together. A Python ``str`` passed where a string is expected is read
as a sequence of one-character symbols.
"""

from __future__ import annotations

import json
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from itertools import product

from .errors import MissingMeaning, NotInLanguage, ParseError, ReservedDollar, UnknownSymbol
from .hyperset import DOLLAR

Str = tuple[str, ...]
Context = tuple[Str, Str]
SEPARATOR = "␟"


def fmt(s: Sequence[str]) -> str:
    """Comma-joined symbols; the empty string prints as ε."""
    return ",".join(s) if s else "ε"


@dataclass(frozen=True)
class LanguageSpec:
    alphabet: tuple[str, ...]
    language: tuple[Str, ...]
    meanings: Mapping[Str, str]

    def __init__(self, alphabet: Sequence[str], language: Sequence[Sequence[str]], meanings: Mapping):
        object.__setattr__(self, "alphabet", tuple(alphabet))
        object.__setattr__(self, "language", tuple(tuple(s) for s in language))
        object.__setattr__(self, "meanings", {tuple(k): v for k, v in meanings.items()})
        object.__setattr__(self, "_members", frozenset(self.language))
        self._validate()

    def _validate(self) -> None:
        seen = set()
        for sym in self.alphabet:
            if not isinstance(sym, str) or not sym:
                raise ParseError(f"symbols must be nonempty strings, got {sym!r}", "alphabet")
            if sym == DOLLAR:
                raise ReservedDollar(f"{DOLLAR!r} is reserved and cannot be a symbol")
            if SEPARATOR in sym:
                raise ParseError(f"symbol {sym!r} contains the reserved separator U+241F", "alphabet")
            if sym in seen:
                raise ParseError(f"duplicate symbol {sym!r}", "alphabet")
            seen.add(sym)
        if len(self._members) != len(self.language):
            raise ParseError("duplicate string in language", "language")
        for s in self.language:
            if not s:
                raise ParseError("language strings must be nonempty", "language")
            for sym in s:
                if sym == DOLLAR:
                    raise ReservedDollar(f"string {fmt(s)} uses the reserved symbol {DOLLAR!r}")
                if sym not in seen:
                    raise UnknownSymbol(f"string {fmt(s)} uses symbol {sym!r} outside the alphabet")
        for s in self.language:
            if s not in self.meanings:
                raise MissingMeaning(f"string {fmt(s)} has no meaning")
        for s, v in self.meanings.items():
            if s not in self._members:
                raise ParseError(f"meaning given for {fmt(s)}, which is not in the language", "meanings")
            if not isinstance(v, str) or not v:
                raise ParseError(f"meaning of {fmt(s)} must be a nonempty string", "meanings")
            if v == DOLLAR:
                raise ReservedDollar(f"meaning of {fmt(s)} is the reserved marker {DOLLAR!r}")

    def __contains__(self, s) -> bool:
        return tuple(s) in self._members

    def m(self, s: Sequence[str]) -> str:
        return self.meanings[self.require(s)]

    def require(self, s: Sequence[str]) -> Str:
        s = tuple(s)
        if s not in self._members:
            raise NotInLanguage(f"{fmt(s)} is not in the language")
        return s


# --------------------------------------------------------------------------
# documents


def spec_from_doc(doc) -> LanguageSpec:
    if not isinstance(doc, dict) or set(doc) != {"alphabet", "language", "meanings"}:
        raise ParseError("expected keys alphabet, language, meanings", "document")
    alphabet, language, meanings = doc["alphabet"], doc["language"], doc["meanings"]
    if not isinstance(alphabet, list):
        raise ParseError("must be a list", "alphabet")
    if not isinstance(language, list) or not all(
        isinstance(s, list) and all(isinstance(x, str) for x in s) for s in language
    ):
        raise ParseError("must be a list of symbol lists", "language")
    if not isinstance(meanings, list):
        raise ParseError("must be a list", "meanings")
    table: dict[Str, str] = {}
    for k, entry in enumerate(meanings):
        at = f"meanings[{k}]"
        if not isinstance(entry, dict) or set(entry) != {"string", "value"}:
            raise ParseError("expected keys string and value", at)
        s = entry["string"]
        if not isinstance(s, list) or not all(isinstance(x, str) for x in s):
            raise ParseError("string must be a list of symbols", at)
        if tuple(s) in table:
            raise ParseError(f"second meaning for {fmt(s)}", at)
        table[tuple(s)] = entry["value"]
    return LanguageSpec(alphabet, language, table)


def parse_spec(text: str) -> LanguageSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return spec_from_doc(doc)


def spec_to_doc(spec: LanguageSpec) -> dict:
    return {
        "alphabet": list(spec.alphabet),
        "language": [list(s) for s in spec.language],
        "meanings": [{"string": list(s), "value": spec.meanings[s]} for s in spec.language],
    }


def dump_spec(spec: LanguageSpec) -> str:
    return json.dumps(spec_to_doc(spec), ensure_ascii=False)


# --------------------------------------------------------------------------
# structure of the language


def decompositions(spec: LanguageSpec, x: Sequence[str]) -> list[tuple[Str, Str]]:
    x = spec.require(x)
    return [(x[:k], x[k:]) for k in range(1, len(x)) if x[:k] in spec and x[k:] in spec]


def right_extensions(spec: LanguageSpec, s: Sequence[str]) -> list[Str]:
    s = spec.require(s)
    return [t for t in spec.language if s + t in spec]


def contexts(spec: LanguageSpec, a: Sequence[str]) -> list[Context]:
    """Every (x, y) with x·a·y in the language, one entry per occurrence of a."""
    a = spec.require(a)
    n = len(a)
    out = []
    for w in spec.language:
        for i in range(len(w) - n + 1):
            if w[i : i + n] == a:
                out.append((w[:i], w[i + n :]))
    return out


def _substitutes(spec: LanguageSpec, a: Str, b: Str) -> bool:
    for x, y in contexts(spec, a):
        if x + b + y not in spec or spec.m(x + a + y) != spec.m(x + b + y):
            return False
    return True


def synonyms(spec: LanguageSpec, a: Sequence[str], b: Sequence[str]) -> bool:
    a, b = spec.require(a), spec.require(b)
    if spec.m(a) != spec.m(b):
        return False
    return _substitutes(spec, a, b) and _substitutes(spec, b, a)


def synonym_pairs(spec: LanguageSpec) -> list[tuple[Str, Str]]:
    L = spec.language
    return [(L[i], L[j]) for i in range(len(L)) for j in range(i + 1, len(L)) if synonyms(spec, L[i], L[j])]


# --------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class Bounds:
    max_alphabet: int = 4
    max_strings: int = 16
    max_meanings: int = 4
    max_len: int = 3

    def __post_init__(self):
        if min(self.max_alphabet, self.max_strings, self.max_meanings, self.max_len) < 1:
            raise ValueError("bounds must be positive")


def random_spec(seed: int, bounds: Bounds = Bounds()) -> LanguageSpec:
    rng = random.Random(seed)
    alphabet = [chr(ord("a") + k) if k < 26 else f"s{k}" for k in range(rng.randint(1, bounds.max_alphabet))]
    n_strings = rng.randint(1, bounds.max_strings)
    n_meanings = rng.randint(1, bounds.max_meanings)
    # short strings first so that compound strings usually have parts in L
    singles = [(a,) for a in alphabet if rng.random() < 0.85]
    longer = [s for n in range(2, bounds.max_len + 1) for s in product(alphabet, repeat=n)]
    rng.shuffle(longer)
    pool = singles + longer
    language = pool[:n_strings] or [(alphabet[0],)]
    labels = [f"M{k}" for k in range(n_meanings)]
    meanings = {s: rng.choice(labels) for s in language}
    return LanguageSpec(alphabet, language, meanings)


def _spec(alphabet, table) -> LanguageSpec:
    return LanguageSpec(alphabet, [tuple(s) for s in table], {tuple(s): v for s, v in table.items()})


def fixture_e1() -> LanguageSpec:
    """a and b are substitutable everywhere."""
    return _spec("abc", {"a": "P", "b": "P", "c": "Q", "ca": "R", "cb": "R"})


def fixture_e2() -> LanguageSpec:
    """m(a) = m(b) but the context c_ separates them."""
    return _spec("abc", {"a": "P", "b": "P", "c": "Q", "ca": "R", "cb": "T"})


def fixture_e3() -> LanguageSpec:
    """Self-application: aa is in the language."""
    return _spec("a", {"a": "P", "aa": "Q"})


FIXTURES = {"E1": fixture_e1, "E2": fixture_e2, "E3": fixture_e3}
