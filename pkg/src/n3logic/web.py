"""Dereferencing IRIs into documents and formulas.

Lookup order: fixture map, then the on-disk cache, then the network (when
allowed). ``file:`` IRIs are read directly. The bundled axiom files are
always reachable under ``http://n3logic.invalid/axioms/``.
"""

from __future__ import annotations

import hashlib
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple
from urllib.parse import unquote, urlsplit

from .errors import FetchError, FetchTimeout, OfflineError, ParseError, SemanticsError
from .model import Formula

AXIOMS_BASE = "http://n3logic.invalid/axioms/"
AXIOMS_DIR = Path(__file__).parent / "axioms"
AXIOM_FILES = ("rdfs.n3", "lists.n3", "sameas.n3")

N3_TYPES = ("text/n3", "text/turtle", "application/n-triples")
_EXTENSION_TYPES = {
    ".n3": "text/n3",
    ".ttl": "text/turtle",
    ".nt": "application/n-triples",
    ".rdf": "application/rdf+xml",
    ".owl": "application/rdf+xml",
    ".xml": "application/xml",
    ".txt": "text/plain",
    ".html": "text/html",
}
MAX_REDIRECTS = 5


@dataclass(frozen=True)
class Document:
    iri: str
    media_type: str
    body: str
    retrieved: float
    final_iri: Optional[str] = None


@dataclass
class ResolverConfig:
    allow_network: bool = True
    fixtures: Dict[str, str] = field(default_factory=dict)
    cache_dir: Optional[str] = None
    timeout: float = 30.0
    accept: Tuple[str, ...] = N3_TYPES + ("*/*;q=0.1",)


def strip_fragment(iri: str) -> str:
    return iri.split("#", 1)[0]


def media_type_for(path: str) -> str:
    """Media type guessed from a path's extension; N3 when unknown."""
    suffix = Path(urlsplit(path).path if "://" in path else path).suffix.lower()
    return _EXTENSION_TYPES.get(suffix, "text/n3")


def load_fixture_map(path: str) -> Dict[str, str]:
    """Read ``iri-prefix TAB local-path`` lines; paths are relative to the map."""
    root = Path(path).resolve().parent
    out: Dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'iri-prefix<TAB>local-path'")
        prefix, local = line.split("\t", 1)
        out[prefix.strip()] = str((root / local.strip()).resolve())
    return out


def _file_path(iri: str) -> Path:
    parts = urlsplit(iri)
    return Path(unquote(parts.path))


class Resolver:
    """Maps IRIs to documents; shareable across closures."""

    def __init__(self, config: Optional[ResolverConfig] = None):
        self.config = config or ResolverConfig()
        self.fixtures: Dict[str, str] = {
            AXIOMS_BASE + name: str(AXIOMS_DIR / name) for name in AXIOM_FILES
        }
        self.fixtures.update(self.config.fixtures)
        self._locks: Dict[str, threading.Lock] = {}
        self._guard = threading.Lock()
        self.requests: List[str] = []

    def _lock(self, iri: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(iri, threading.Lock())

    def fixture_path(self, iri: str) -> Optional[str]:
        best = None
        for prefix, local in self.fixtures.items():
            if iri.startswith(prefix) and (best is None or len(prefix) > len(best[0])):
                best = (prefix, local)
        if best is None:
            return None
        prefix, local = best
        rest = iri[len(prefix):]
        if not rest:
            return local
        return str(Path(local) / unquote(rest.lstrip("/")))

    def dereference(self, iri: str) -> Document:
        iri = strip_fragment(iri)
        with self._lock(iri):
            return self._dereference(iri)

    def _dereference(self, iri: str) -> Document:
        local = self.fixture_path(iri)
        if local is not None:
            return self._read_file(iri, Path(local))
        scheme = urlsplit(iri).scheme.lower()
        if scheme == "file":
            return self._read_file(iri, _file_path(iri))
        if scheme not in ("http", "https"):
            raise FetchError(f"unsupported IRI scheme {scheme!r}", iri)
        cached = self._cache_get(iri)
        if cached is not None:
            return cached
        if not self.config.allow_network:
            raise OfflineError("network access disabled and no fixture or cache entry", iri)
        doc = self._fetch(iri)
        self._cache_put(doc)
        return doc

    def _read_file(self, iri: str, path: Path) -> Document:
        try:
            body = path.read_bytes().decode("utf-8")
        except FileNotFoundError:
            raise FetchError(f"no such file: {path}", iri, 404) from None
        except (OSError, UnicodeDecodeError) as exc:
            raise FetchError(f"cannot read {path}: {exc}", iri) from None
        return Document(iri, media_type_for(str(path)), body, time.time())

    def _fetch(self, iri: str) -> Document:
        self.requests.append(iri)
        opener = urllib.request.build_opener(_LimitedRedirects())
        req = urllib.request.Request(iri, headers={"Accept": ", ".join(self.config.accept)})
        try:
            with opener.open(req, timeout=self.config.timeout) as resp:
                raw = resp.read()
                ctype = resp.headers.get_content_type() or media_type_for(iri)
                charset = resp.headers.get_content_charset() or "utf-8"
                final = resp.geturl()
        except urllib.error.HTTPError as exc:
            raise FetchError(f"HTTP {exc.code}", iri, exc.code) from None
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, TimeoutError):
                raise FetchTimeout(f"timed out after {self.config.timeout}s", iri) from None
            raise FetchError(f"cannot fetch: {exc.reason}", iri) from None
        except TimeoutError:
            raise FetchTimeout(f"timed out after {self.config.timeout}s", iri) from None
        try:
            body = raw.decode(charset)
        except (UnicodeDecodeError, LookupError):
            raise FetchError("body is not valid text", iri) from None
        if ctype in ("text/plain", "application/octet-stream"):
            ctype = media_type_for(iri)
        return Document(iri, ctype, body, time.time(), final)

    # -- cache ---------------------------------------------------------------------

    def _cache_paths(self, iri: str) -> Optional[Tuple[Path, Path]]:
        if not self.config.cache_dir:
            return None
        root = Path(self.config.cache_dir)
        key = hashlib.sha256(iri.encode("utf-8")).hexdigest()
        return root / f"{key}.body", root / f"{key}.meta"

    def _cache_get(self, iri: str) -> Optional[Document]:
        paths = self._cache_paths(iri)
        if paths is None or not paths[0].exists() or not paths[1].exists():
            return None
        meta = paths[1].read_text(encoding="utf-8").splitlines()
        if len(meta) < 3 or meta[0] != iri:
            return None
        return Document(iri, meta[1], paths[0].read_bytes().decode("utf-8"), float(meta[2]))

    def _cache_put(self, doc: Document) -> None:
        paths = self._cache_paths(doc.iri)
        if paths is None:
            return
        body_path, meta_path = paths
        body_path.parent.mkdir(parents=True, exist_ok=True)
        # Write then rename so readers never see a half-written entry.
        for path, data in (
            (body_path, doc.body.encode("utf-8")),
            (meta_path, f"{doc.iri}\n{doc.media_type}\n{doc.retrieved}\n".encode("utf-8")),
        ):
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_bytes(data)
            tmp.replace(path)

    # -- semantics --------------------------------------------------------------------

    def semantics(self, iri: str) -> Formula:
        from .parser import parse_document

        iri = strip_fragment(iri)
        doc = self.dereference(iri)
        if doc.media_type not in N3_TYPES:
            raise SemanticsError(f"cannot compute the semantics of {doc.media_type}", iri)
        try:
            return parse_document(doc.body, base=iri, source=iri)
        except ParseError as exc:
            raise SemanticsError(exc.diagnostic(), iri, exc.span) from None


class _LimitedRedirects(urllib.request.HTTPRedirectHandler):
    max_redirections = MAX_REDIRECTS


def dereference(iri: str, config: Optional[ResolverConfig] = None) -> Document:
    return Resolver(config).dereference(iri)


def semantics(iri: str, config: Optional[ResolverConfig] = None) -> Formula:
    return Resolver(config).semantics(iri)
