"""os: process environment, command-line arguments and base IRIs."""

from __future__ import annotations

import posixpath
from pathlib import Path
from urllib.parse import urljoin, urlsplit

from ..model import OS, Literal
from . import CHECK, COMPUTE_OBJECT, Call, Defer, Unsatisfied, builtin
from .strings import text_of


def _subject_text(call: Call) -> str:
    if not call.ground(call.subject):
        raise Defer("subject must be bound")
    return text_of(call.subject)


@builtin(OS.environ, [COMPUTE_OBJECT, CHECK], pure=False)
def _environ(call: Call):
    name = _subject_text(call)
    value = call.ctx.env().get(name)
    if value is None:
        return Unsatisfied(f"environment variable {name} is not set")
    return call.bind(call.object, Literal(value))


@builtin(OS.argv, [COMPUTE_OBJECT, CHECK], pure=False)
def _argv(call: Call):
    raw = _subject_text(call).strip()
    if not raw.isdigit():
        raise Defer("argv index must be a positive integer")
    i = int(raw)
    args = call.ctx.argv
    if i < 1 or i > len(args):
        return Unsatisfied(f"no argument {i}")
    return call.bind(call.object, Literal(args[i - 1]))


def _base(call: Call) -> str:
    if call.ctx.base:
        return call.ctx.base
    return Path.cwd().as_uri() + "/"


def relativize(iri: str, base: str) -> str:
    """A relative reference that resolves against ``base`` back to ``iri``."""
    a, b = urlsplit(iri), urlsplit(base)
    if (a.scheme, a.netloc) != (b.scheme, b.netloc):
        return iri
    base_dir = b.path.rsplit("/", 1)[0] or "/"
    rel = posixpath.relpath(a.path or "/", base_dir)
    if a.path.endswith("/") and not rel.endswith("/"):
        rel += "/"
    if rel == ".":
        rel = "./"
    if a.query:
        rel += "?" + a.query
    if a.fragment:
        rel += "#" + a.fragment
    return rel if urljoin(base, rel) == iri else iri


@builtin(OS.baseAbsolute, [COMPUTE_OBJECT, CHECK], pure=False)
def _base_absolute(call: Call):
    return call.bind(call.object, Literal(urljoin(_base(call), _subject_text(call))))


@builtin(OS.baseRelative, [COMPUTE_OBJECT, CHECK], pure=False)
def _base_relative(call: Call):
    return call.bind(call.object, Literal(relativize(_subject_text(call), _base(call))))
