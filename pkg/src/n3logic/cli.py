"""``n3r``: load N3 documents, reason over them, print the result.

Exit status: 0 success, 1 usage error, 2 parse error, 3 closure limit
reached (the partial result is still printed), 4 document fetch error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from . import __version__, kernels
from .builtins import EvalContext, catalog_entries
from .engine import EngineLimits, conclusion, filter as filter_rules
from .errors import ClosureLimitError, ParseError, WebAccessError
from .model import LOG_IMPLIES, Formula, conjoin
from .parser import parse_with_state
from .serializer import SerializerConfig, canonical_text, serialize, serialize_flat
from .web import AXIOM_FILES, AXIOMS_BASE, Resolver, ResolverConfig, load_fixture_map

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_LIMIT, EXIT_FETCH = 0, 1, 2, 3, 4
STDIN_BASE = "file:///dev/stdin"

_CATALOG_PREFIXES = {
    "log": "http://www.w3.org/2000/10/swap/log#",
    "math": "http://www.w3.org/2000/10/swap/math#",
    "string": "http://www.w3.org/2000/10/swap/string#",
    "list": "http://www.w3.org/2000/10/swap/list#",
    "time": "http://www.w3.org/2000/10/swap/time#",
    "os": "http://www.w3.org/2000/10/swap/os#",
    "crypto": "http://www.w3.org/2000/10/swap/crypto#",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="n3r", description="Notation3 reasoner")
    p.add_argument("inputs", nargs="*", help="N3 files or IRIs; '-' reads standard input")
    p.add_argument("--think", action="store_true", help="replace the input with its deductive closure")
    p.add_argument("--filter", metavar="RULEDOC", help="print only what the rules in RULEDOC conclude")
    p.add_argument("--data", action="store_true", help="drop rules and variable declarations from the output")
    p.add_argument("--flat", action="store_true", help="one triple per line, no abbreviations")
    p.add_argument("--canonical", action="store_true", help="canonical, byte-stable output")
    p.add_argument("--prefixes", metavar="FILE", help="N3 file whose @prefix lines define output prefixes")
    p.add_argument("--base", metavar="IRI", help="base IRI for standard input")
    p.add_argument("--no-network", action="store_true", help="resolve IRIs from fixtures and cache only")
    p.add_argument("--fixtures", metavar="FILE", help="map of IRI prefixes to local files (TAB separated)")
    p.add_argument("--cache-dir", metavar="DIR", help="directory for cached documents")
    p.add_argument("--max-steps", type=int, metavar="N", help="maximum closure iterations")
    p.add_argument("--max-triples", type=int, metavar="N", help="maximum derived triples")
    p.add_argument("--with-rdfs", action="store_true", help="add the bundled RDFS rules")
    p.add_argument("--with-lists", action="store_true", help="add the bundled list axioms")
    p.add_argument("--with-sameas", action="store_true", help="add the bundled owl:sameAs rules")
    p.add_argument("--version", action="store_true", help="print version information")
    p.add_argument("--catalog", action="store_true", help="list builtins and bundled axiom files")
    return p


def catalog() -> str:
    lines = []
    for iri, modes, shape, pure in catalog_entries():
        name = iri
        for prefix, ns in _CATALOG_PREFIXES.items():
            if iri.startswith(ns):
                name = f"{prefix}:{iri[len(ns):]}"
        lines.append("\t".join(["builtin", name, iri, ",".join(modes), shape, "pure" if pure else "impure"]))
    for name in AXIOM_FILES:
        lines.append(f"axioms\t{name}\t{AXIOMS_BASE}{name}")
    return "\n".join(lines) + "\n"


def _is_iri(ref: str) -> bool:
    head = ref.split(":", 1)[0].lower()
    return ":" in ref and head in ("http", "https", "file")


def _load(ref: str, resolver: Resolver, stdin: TextIO, base: Optional[str]) -> Tuple[Formula, Dict[str, str], str]:
    if ref == "-":
        doc_base = base or STDIN_BASE
        text, source = stdin.read(), "<stdin>"
    elif _is_iri(ref):
        doc = resolver.dereference(ref)
        doc_base, text, source = ref.split("#", 1)[0], doc.body, ref
    else:
        path = Path(ref)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise WebAccessError(f"cannot read {ref}: {exc.strerror or exc}", path.resolve().as_uri()) from None
        doc_base, source = path.resolve().as_uri(), ref
    f, state = parse_with_state(text, base=doc_base, source=source)
    return f, dict(state.prefixes), doc_base


def _strip_rules(f: Formula) -> Formula:
    return Formula(t for t in f.triples if t[1] != LOG_IMPLIES)


def run(argv: Sequence[str], stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr, stdin: TextIO = sys.stdin) -> int:
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        print(f"n3r: {exc}", file=stderr)
        return EXIT_USAGE
    if args.version:
        print(f"n3r {__version__} kernel={kernels.BACKEND}", file=stdout)
        return EXIT_OK
    if args.catalog:
        stdout.write(catalog())
        return EXIT_OK
    if not args.inputs:
        print("n3r: no inputs (use '-' to read standard input)", file=stderr)
        return EXIT_USAGE
    for flag in ("max_steps", "max_triples"):
        value = getattr(args, flag)
        if value is not None and value <= 0:
            print(f"n3r: --{flag.replace('_', '-')} must be positive", file=stderr)
            return EXIT_USAGE

    try:
        fixtures = load_fixture_map(args.fixtures) if args.fixtures else {}
    except (OSError, ValueError) as exc:
        print(f"n3r: bad fixture map: {exc}", file=stderr)
        return EXIT_USAGE
    limits = EngineLimits(
        max_iterations=args.max_steps or EngineLimits.max_iterations,
        max_triples=args.max_triples or EngineLimits.max_triples,
        allow_network=not args.no_network,
    )
    resolver = Resolver(ResolverConfig(
        allow_network=not args.no_network,
        fixtures=fixtures,
        cache_dir=args.cache_dir,
        timeout=limits.builtin_timeout,
    ))

    try:
        formulas: List[Formula] = []
        prefixes: Dict[str, str] = {}
        first_base = None
        for ref in args.inputs:
            f, pre, doc_base = _load(ref, resolver, stdin, args.base)
            formulas.append(f)
            first_base = first_base or doc_base
            for k, v in pre.items():
                prefixes.setdefault(k, v)
        for flag, name in (("with_rdfs", "rdfs.n3"), ("with_lists", "lists.n3"), ("with_sameas", "sameas.n3")):
            if getattr(args, flag):
                formulas.append(resolver.semantics(AXIOMS_BASE + name))
        rules = None
        if args.filter:
            rules, pre, _ = _load(args.filter, resolver, stdin, args.base)
            for k, v in pre.items():
                prefixes.setdefault(k, v)
        if args.prefixes:
            _, prefixes, _ = _load(args.prefixes, resolver, stdin, args.base)
    except ParseError as exc:
        print(exc.diagnostic(), file=stderr)
        return EXIT_PARSE
    except WebAccessError as exc:
        print(f"n3r: {exc}", file=stderr)
        return EXIT_FETCH

    ctx = EvalContext(
        resolver=resolver,
        limits=limits,
        base=first_base,
        prefixes=prefixes,
        argv=list(args.inputs),
    )
    kb = conjoin(formulas)
    status = EXIT_OK
    try:
        if args.think:
            kb = conclusion(kb, limits, ctx)
        if rules is not None:
            kb = filter_rules(kb, rules, limits, ctx)
    except ClosureLimitError as exc:
        print(f"n3r: closure limit reached: {exc}; printing the partial result", file=stderr)
        kb = exc.partial
        status = EXIT_LIMIT
    for note in ctx.diagnostics:
        print(f"n3r: {note}", file=stderr)

    if args.data:
        kb = _strip_rules(kb)
    if args.canonical:
        stdout.write(canonical_text(kb, prefixes))
    elif args.flat:
        stdout.write(serialize_flat(kb))
    else:
        stdout.write(serialize(kb, SerializerConfig(prefixes=prefixes)))
    return status


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
