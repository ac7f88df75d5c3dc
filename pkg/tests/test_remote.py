import json
import threading
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from conftest import GENDER_QUERY
from lexsparql.kgexec import (
    EndpointConfig,
    EndpointError,
    EndpointLimits,
    EndpointTimeout,
    MalformedQuery,
    RateLimiter,
    RemoteExecutor,
    execute_remote,
    serve_mock,
)
from lexsparql.kgexec.terms import wd


class Scripted:
    """A tiny HTTP server answering from a list of (status, body) pairs."""

    def __init__(self, script, delay=0.0):
        self.script = list(script)
        self.requests = []
        owner = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_GET(self):
                owner.requests.append(dict(self.headers))
                status, body = owner.script.pop(0) if owner.script else (200, '{"head":{},"boolean":true}')
                if delay:
                    threading.Event().wait(delay)
                data = body.encode()
                try:
                    self.send_response(status)
                    self.send_header("Content-Length", str(len(data)))
                    self.end_headers()
                    self.wfile.write(data)
                except OSError:
                    pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.server.daemon_threads = True
        threading.Thread(target=self.server.serve_forever, daemon=True).start()
        self.url = f"http://127.0.0.1:{self.server.server_address[1]}/sparql"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def scripted():
    servers = []

    def make(script, delay=0.0):
        s = Scripted(script, delay)
        servers.append(s)
        return s

    yield make
    for s in servers:
        s.close()


def test_gender_query_over_mock_endpoint(feminine_apfel):
    with serve_mock(feminine_apfel) as ep:
        res = execute_remote(GENDER_QUERY, EndpointConfig(ep.url))
    assert len(res.rows) == 1
    assert res.rows[0]["qitem"] == wd("Q1775415")
    assert res.rows[0]["qitemLabel"].value == "feminine"


def test_ask_gives_boolean(feminine_apfel):
    with serve_mock(feminine_apfel) as ep:
        res = RemoteExecutor(EndpointConfig(ep.url, method="POST")).execute("ASK WHERE { }")
    assert res.kind == "boolean" and res.truth is True


def test_mock_get_document(feminine_apfel):
    with serve_mock(feminine_apfel) as ep:
        url = ep.url + "?query=" + urllib.parse.quote("ASK WHERE {}")
        with urllib.request.urlopen(url) as resp:
            doc = json.loads(resp.read())
            ctype = resp.headers["Content-Type"]
    assert doc["boolean"] is True
    assert ctype.startswith("application/sparql-results+json")


def test_mock_unsupported_is_400_with_feature(feminine_apfel):
    with serve_mock(feminine_apfel) as ep:
        with pytest.raises(MalformedQuery) as err:
            execute_remote("SELECT ?x WHERE { { ?x ?p ?o } UNION { ?o ?p ?x } }", EndpointConfig(ep.url))
    assert "UNION" in str(err.value)
    assert err.value.status == 400


def test_mock_malformed_is_400(feminine_apfel):
    with serve_mock(feminine_apfel) as ep:
        with pytest.raises(MalformedQuery):
            execute_remote("SELECT ?x WHERE { ?x", EndpointConfig(ep.url))


def test_mock_concurrent_identical(snapshot):
    q = "SELECT ?l ?lemma WHERE { ?l wikibase:lemma ?lemma } ORDER BY ?lemma"
    with serve_mock(snapshot) as ep:
        cfg = EndpointConfig(ep.url)
        with ThreadPoolExecutor(8) as pool:
            docs = list(pool.map(lambda _: execute_remote(q, cfg).dumps(), range(16)))
    assert len(set(docs)) == 1


def test_user_agent_sent(scripted):
    srv = scripted([(200, '{"head":{},"boolean":false}')])
    execute_remote("ASK {}", EndpointConfig(srv.url, user_agent="tester/1.0"))
    assert srv.requests[0]["User-Agent"] == "tester/1.0"


def test_retries_5xx_with_doubling_backoff(scripted):
    srv = scripted([(503, "busy"), (502, "bad gateway"), (200, '{"head":{},"boolean":true}')])
    sleeps = []
    res = execute_remote("ASK {}", EndpointConfig(srv.url), sleep=sleeps.append)
    assert res.truth is True
    assert sleeps == [2.0, 4.0]


def test_gives_up_after_max_retries(scripted):
    srv = scripted([(500, "boom")] * 5)
    sleeps = []
    with pytest.raises(EndpointError) as err:
        execute_remote("ASK {}", EndpointConfig(srv.url), sleep=sleeps.append)
    assert err.value.status == 500
    assert sleeps == [2.0, 4.0, 8.0]
    assert len(srv.requests) == 4


def test_other_4xx_not_retried(scripted):
    srv = scripted([(403, "forbidden")])
    sleeps = []
    with pytest.raises(EndpointError) as err:
        execute_remote("ASK {}", EndpointConfig(srv.url), sleep=sleeps.append)
    assert err.value.status == 403
    assert not isinstance(err.value, MalformedQuery)
    assert sleeps == []


def test_timeout_is_retried_then_raised(scripted):
    srv = scripted([], delay=0.5)
    sleeps = []
    limits = EndpointLimits(max_retries=1, per_query_timeout=0.1)
    with pytest.raises(EndpointTimeout):
        execute_remote("ASK {}", EndpointConfig(srv.url, limits=limits), sleep=sleeps.append)
    assert sleeps == [2.0]


def test_malformed_results_document(scripted):
    srv = scripted([(200, "not json")])
    with pytest.raises(EndpointError):
        execute_remote("ASK {}", EndpointConfig(srv.url))


def test_connection_refused_fails_fast():
    sleeps = []
    with pytest.raises(EndpointError):
        execute_remote("ASK {}", EndpointConfig("http://127.0.0.1:9/sparql"), sleep=sleeps.append)
    assert sleeps == []


def test_rate_limiter_spaces_requests():
    now = [0.0]
    slept = []

    def sleep(d):
        slept.append(d)
        now[0] += d

    limiter = RateLimiter(1.5, clock=lambda: now[0], sleep=sleep)
    grants = [limiter.acquire() for _ in range(4)]
    assert grants == [0.0, 1.5, 3.0, 4.5]
    now[0] = 10.0
    assert limiter.acquire() == 10.0
    assert slept == [1.5, 1.5, 1.5]


def test_config_validation():
    with pytest.raises(ValueError):
        EndpointConfig("http://x", user_agent="")
    with pytest.raises(ValueError):
        EndpointLimits(max_rows_per_query=0)
    with pytest.raises(ValueError):
        RateLimiter(-1)
    with pytest.raises(ValueError):
        execute_remote("  ", EndpointConfig("http://x"))
