import http.server
import threading
import time

import pytest

from n3logic.errors import FetchError, FetchTimeout, OfflineError, SemanticsError
from n3logic.web import (
    AXIOM_FILES,
    AXIOMS_BASE,
    Resolver,
    ResolverConfig,
    load_fixture_map,
    media_type_for,
    strip_fragment,
)

from conftest import FIXTURE_MAP

DOC = b"@prefix : <http://e/#> . :a :b :c ."


class Handler(http.server.BaseHTTPRequestHandler):
    def do_GET(self):
        if self.path == "/doc.n3":
            self.send_response(200)
            self.send_header("Content-Type", "text/n3; charset=utf-8")
            self.end_headers()
            self.wfile.write(DOC)
        elif self.path == "/page":
            self.send_response(200)
            self.send_header("Content-Type", "text/html")
            self.end_headers()
            self.wfile.write(b"<html></html>")
        elif self.path == "/moved":
            self.send_response(302)
            self.send_header("Location", "/doc.n3")
            self.end_headers()
        elif self.path.startswith("/loop"):
            self.send_response(302)
            self.send_header("Location", f"/loop{len(self.path)}")
            self.end_headers()
        elif self.path == "/slow":
            time.sleep(1.0)
            self.send_response(200)
            self.end_headers()
        elif self.path == "/accept":
            self.send_response(200)
            self.send_header("Content-Type", "text/plain")
            self.end_headers()
            self.wfile.write(self.headers.get("Accept", "").encode())
        else:
            self.send_response(404)
            self.end_headers()

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def server():
    httpd = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()


def test_strip_fragment_and_media_types():
    assert strip_fragment("http://a/b#c") == "http://a/b"
    assert media_type_for("x.ttl") == "text/turtle"
    assert media_type_for("http://a/b.rdf") == "application/rdf+xml"
    assert media_type_for("noextension") == "text/n3"


def test_axioms_always_resolvable_offline():
    r = Resolver(ResolverConfig(allow_network=False))
    for name in AXIOM_FILES:
        assert len(r.semantics(AXIOMS_BASE + name)) >= 3


def test_fixture_map_longest_prefix_wins():
    fixtures = load_fixture_map(FIXTURE_MAP)
    r = Resolver(ResolverConfig(allow_network=False, fixtures=fixtures))
    assert r.fixture_path("http://example.org/policy/admin.rdf").endswith("admin.n3")
    assert r.fixture_path("http://example.org/policy/rule.n3").endswith("policy/rule.n3")
    assert r.semantics("http://example.org/policy/admin.rdf")
    assert r.requests == []


def test_fixture_map_rejects_bad_lines(tmp_path):
    bad = tmp_path / "map.tsv"
    bad.write_text("http://x/ no-tab-here\n")
    with pytest.raises(ValueError):
        load_fixture_map(bad)


def test_file_iris(tmp_path):
    doc = tmp_path / "d.n3"
    doc.write_bytes(DOC)
    r = Resolver()
    assert len(r.semantics(doc.as_uri())) == 1
    with pytest.raises(FetchError) as info:
        r.dereference((tmp_path / "missing.n3").as_uri())
    assert info.value.status == 404


def test_offline_without_fixture():
    with pytest.raises(OfflineError):
        Resolver(ResolverConfig(allow_network=False)).dereference("http://example.org/nowhere")


def test_unsupported_scheme():
    with pytest.raises(FetchError):
        Resolver().dereference("ftp://example.org/x")


def test_fetch_and_cache(server, tmp_path):
    r = Resolver(ResolverConfig(cache_dir=str(tmp_path)))
    doc = r.dereference(server + "/doc.n3")
    assert doc.media_type == "text/n3" and doc.body == DOC.decode()
    assert r.requests == [server + "/doc.n3"]
    # A second resolver, offline, is served from the cache.
    cached = Resolver(ResolverConfig(allow_network=False, cache_dir=str(tmp_path)))
    assert cached.dereference(server + "/doc.n3#x").body == DOC.decode()
    assert cached.requests == []


def test_accept_header_prefers_n3(server):
    body = Resolver().dereference(server + "/accept").body
    assert body.startswith("text/n3")


def test_redirect_followed(server):
    doc = Resolver().dereference(server + "/moved")
    assert doc.body == DOC.decode()
    assert doc.final_iri.endswith("/doc.n3")


def test_redirect_loop_is_an_error(server):
    with pytest.raises(FetchError):
        Resolver().dereference(server + "/loop")


def test_http_error_status(server):
    with pytest.raises(FetchError) as info:
        Resolver().dereference(server + "/missing")
    assert info.value.status == 404


def test_timeout(server):
    with pytest.raises(FetchTimeout):
        Resolver(ResolverConfig(timeout=0.2)).dereference(server + "/slow")


def test_semantics_of_non_n3_document(server):
    with pytest.raises(SemanticsError):
        Resolver().semantics(server + "/page")


def test_semantics_parse_error_is_wrapped(tmp_path):
    doc = tmp_path / "bad.n3"
    doc.write_text(":a :b")
    with pytest.raises(SemanticsError) as info:
        Resolver().semantics(doc.as_uri())
    assert "bad.n3" in str(info.value)


def test_concurrent_dereference_shares_nothing_mutable(server):
    r = Resolver()
    results = []
    threads = [threading.Thread(target=lambda: results.append(r.dereference(server + "/doc.n3").body)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == [DOC.decode()] * 8
