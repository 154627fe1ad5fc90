"""Hypersets as accessible pointed graphs, and the compositional encodings built on them."""

from .errors import AfaError, CyclicGraph, ParseError
from .hyperset import (
    AtomLabel,
    HGraph,
    bisimilar,
    decode_pair,
    decorate,
    empty_set,
    members,
    minimize,
    new_atom,
    omega,
    pair,
    parse_graph,
    serialize_graph,
    set_of,
    to_dot,
)
from .eqsolver import AtomTerm, EquationSystem, PairTerm, SetTerm, VarRef, solve
from .langmodel import LanguageSpec, parse_spec, random_spec, synonyms
from .mu_encoder import apply, encode, recover, swap_invariance_check, verify
from .wf_encoder import app_star, mbar, verify_wf, wf_recover
from .relsem import Clause, QuantNP, render, sv

__version__ = "0.1.0"

__all__ = [
    "AfaError",
    "CyclicGraph",
    "ParseError",
    "AtomLabel",
    "HGraph",
    "bisimilar",
    "decode_pair",
    "decorate",
    "empty_set",
    "members",
    "minimize",
    "new_atom",
    "omega",
    "pair",
    "parse_graph",
    "serialize_graph",
    "set_of",
    "to_dot",
    "AtomTerm",
    "EquationSystem",
    "PairTerm",
    "SetTerm",
    "VarRef",
    "solve",
    "LanguageSpec",
    "parse_spec",
    "random_spec",
    "synonyms",
    "apply",
    "encode",
    "recover",
    "swap_invariance_check",
    "verify",
    "app_star",
    "mbar",
    "verify_wf",
    "wf_recover",
    "Clause",
    "QuantNP",
    "render",
    "sv",
]
