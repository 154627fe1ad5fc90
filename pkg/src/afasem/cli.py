"""Command-line surface: ``afasem <subcommand> ...``.

Exit status is 0 on success, 1 when a verification check fails and 2 on any
input or format error (with one diagnostic line on stderr). Results go to
stdout; AFA_LOG=quiet|info|debug controls logging on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from urllib.parse import quote

from . import hyperset as hs
from . import mu_encoder as mu
from .eqsolver import parse_equations, solve
from .errors import AfaError, ParseError
from .langmodel import LanguageSpec, fmt, parse_spec, spec_from_doc, synonym_pairs
from .relsem import parse_clause, sv
from .report import Report
from .wf_encoder import verify_wf

log = logging.getLogger("afasem")

OK, CHECK_FAILED, BAD_INPUT = 0, 1, 2


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; route usage errors through the normal contract
    def error(self, message):
        raise _Usage(message)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _tokens(arg: str) -> tuple[str, ...]:
    """"c,a" -> ("c", "a"); the empty argument is the empty string."""
    return tuple(arg.split(",")) if arg else ()


def _graph_arg(enc: mu.MuEncoding, arg: str) -> hs.HGraph:
    return enc.mu_dollar if arg == "$" else enc.mu(_tokens(arg))


def _load_bundle(path: str) -> mu.MuEncoding:
    return mu.load_bundle(_read(path))


def _load_spec_or_bundle(path: str) -> tuple[LanguageSpec, mu.MuEncoding]:
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if isinstance(doc, dict) and "graphs" in doc:
        log.info("verifying bundle %s", path)
        enc = mu.bundle_from_doc(doc)
        return enc.spec, enc
    log.info("encoding spec %s", path)
    spec = spec_from_doc(doc)
    return spec, mu.encode(spec)


def _emit_report(report: Report) -> int:
    sys.stdout.write(report.render())
    return OK if report.passed else CHECK_FAILED


# --------------------------------------------------------------------------
# subcommands


def cmd_encode(a) -> int:
    enc = mu.encode(parse_spec(_read(a.spec)))
    text = mu.dump_bundle(enc) + "\n"
    if a.output:
        _write(a.output, text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_verify(a) -> int:
    spec, enc = _load_spec_or_bundle(a.file)
    report = mu.verify(enc)
    for check in verify_wf(spec):
        report.add(check)
    return _emit_report(report)


def cmd_apply(a) -> int:
    enc = _load_bundle(a.bundle)
    f, x = _graph_arg(enc, a.s), _graph_arg(enc, a.t)
    result = mu.apply(f, x)
    sys.stdout.write(hs.serialize_graph(result) + "\n")
    if a.s == "$" or a.t == "$":
        return OK
    st = _tokens(a.s) + _tokens(a.t)
    if st not in enc.spec:
        sys.stdout.write(f"verdict: {fmt(st)} not in language\n")
        return OK
    ok = hs.bisimilar(result, enc.mu(st))
    sys.stdout.write(f"verdict: {'PASS' if ok else 'FAIL'} bisimilar to mu({fmt(st)})\n")
    return OK if ok else CHECK_FAILED


def cmd_recover(a) -> int:
    enc = _load_bundle(a.bundle)
    sys.stdout.write(mu.recover(enc, _tokens(a.s)) + "\n")
    return OK


def cmd_synonyms(a) -> int:
    spec = parse_spec(_read(a.spec))
    for x, y in synonym_pairs(spec):
        sys.stdout.write(f"{fmt(x)} {fmt(y)}\n")
    return OK


def cmd_westerstahl(a) -> int:
    return _emit_report(verify_wf(parse_spec(_read(a.spec))))


def cmd_solve(a) -> int:
    system = parse_equations(_read(a.eqfile))
    system.check_closed()
    solution = solve(system)
    out = Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for var in sorted(system.variables):
        name = quote(var, safe="") + ".json"
        _write(str(out / name), hs.serialize_graph(hs.minimize(solution[var])) + "\n")
        sys.stdout.write(f"{var} {name}\n")
    return OK


def cmd_scopes(a) -> int:
    for line in sv(parse_clause(_read(a.clausefile))).rendered():
        sys.stdout.write(line + "\n")
    return OK


def cmd_dot(a) -> int:
    enc = _load_bundle(a.bundle)
    sys.stdout.write(hs.to_dot(_graph_arg(enc, a.s)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="afasem", description="Hyperset encodings of compositional meaning.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("encode", help="encode a language spec into a bundle")
    s.add_argument("spec")
    s.add_argument("-o", "--output", help="bundle path (default: stdout)")
    s.set_defaults(run=cmd_encode)

    s = sub.add_parser("verify", help="run V1-V7 and W1-W4 on a spec or bundle")
    s.add_argument("file")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("apply", help="apply mu(s) to mu(t)")
    s.add_argument("bundle")
    s.add_argument("s", help='comma-joined symbols, or "$"')
    s.add_argument("t", help='comma-joined symbols, or "$"')
    s.set_defaults(run=cmd_apply)

    s = sub.add_parser("recover", help="meaning label of s read back from its graph")
    s.add_argument("bundle")
    s.add_argument("s")
    s.set_defaults(run=cmd_recover)

    s = sub.add_parser("synonyms", help="list synonym pairs")
    s.add_argument("spec")
    s.set_defaults(run=cmd_synonyms)

    s = sub.add_parser("westerstahl", help="run the well-founded encoding checks")
    s.add_argument("spec")
    s.set_defaults(run=cmd_westerstahl)

    s = sub.add_parser("solve", help="solve an equation file, one graph file per variable")
    s.add_argument("eqfile")
    s.add_argument("-d", "--outdir", default=".")
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("scopes", help="list the scope readings of a clause")
    s.add_argument("clausefile")
    s.set_defaults(run=cmd_scopes)

    s = sub.add_parser("dot", help="Graphviz rendering of mu(s)")
    s.add_argument("bundle")
    s.add_argument("s")
    s.set_defaults(run=cmd_dot)
    return p


def _configure_logging() -> None:
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("AFA_LOG", "quiet").lower(), logging.ERROR
    )
    logging.basicConfig(level=level, stream=sys.stderr, format="afasem: %(levelname)s: %(message)s")


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except _Usage as exc:
        sys.stderr.write(f"afasem: usage error: {_one_line(exc)}\n")
    except AfaError as exc:
        sys.stderr.write(f"afasem: {type(exc).__name__}: {_one_line(exc)}\n")
    except OSError as exc:
        sys.stderr.write(f"afasem: {exc.strerror or 'I/O error'}: {exc.filename}\n")
    except UnicodeDecodeError as exc:
        sys.stderr.write(f"afasem: input is not UTF-8: byte {exc.start}\n")
    return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
