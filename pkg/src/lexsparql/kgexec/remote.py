"""SPARQL Protocol client with pacing and retries."""

from __future__ import annotations

import logging
import socket
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import EndpointError, EndpointTimeout, MalformedQuery
from .results import ResultSet

log = logging.getLogger(__name__)

DEFAULT_USER_AGENT = "lexsparql/0.1 (dataset tooling; contact: maintainer@example.org)"
RESULTS_MIME = "application/sparql-results+json"


class RateLimiter:
    """Keeps successive requests at least ``min_interval`` seconds apart.

    One instance is shared by every worker that talks to the same endpoint.
    """

    def __init__(self, min_interval: float = 0.0, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if min_interval < 0:
            raise ValueError("min_interval must be >= 0")
        self.min_interval = min_interval
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_slot: Optional[float] = None

    def acquire(self) -> float:
        """Block until a request may be sent; returns the time it was granted."""
        with self._lock:
            now = self._clock()
            if self._next_slot is not None and now < self._next_slot:
                self._sleep(self._next_slot - now)
                now = self._next_slot
            self._next_slot = now + self.min_interval
            return now


@dataclass(frozen=True)
class EndpointLimits:
    max_rows_per_query: int = 30000
    per_query_timeout: float = 60.0
    min_request_interval: float = 0.0
    max_retries: int = 3
    backoff_initial: float = 2.0

    def __post_init__(self):
        if self.max_rows_per_query < 1:
            raise ValueError("max_rows_per_query must be >= 1")
        if self.per_query_timeout <= 0:
            raise ValueError("per_query_timeout must be > 0")
        if self.min_request_interval < 0 or self.max_retries < 0:
            raise ValueError("limits must be non-negative")


@dataclass
class EndpointConfig:
    url: str
    user_agent: str = DEFAULT_USER_AGENT
    limits: EndpointLimits = field(default_factory=EndpointLimits)
    method: str = "GET"
    rate_limiter: Optional[RateLimiter] = None

    def __post_init__(self):
        if not self.user_agent:
            raise ValueError("a user agent string is required")
        if self.method not in ("GET", "POST"):
            raise ValueError("method must be GET or POST")
        if self.rate_limiter is None:
            self.rate_limiter = RateLimiter(self.limits.min_request_interval)


def _request(query: str, endpoint: EndpointConfig) -> urllib.request.Request:
    headers = {"Accept": RESULTS_MIME, "User-Agent": endpoint.user_agent}
    if endpoint.method == "GET":
        sep = "&" if "?" in endpoint.url else "?"
        url = endpoint.url + sep + urllib.parse.urlencode({"query": query})
        return urllib.request.Request(url, headers=headers, method="GET")
    headers["Content-Type"] = "application/x-www-form-urlencoded"
    body = urllib.parse.urlencode({"query": query}).encode("utf-8")
    return urllib.request.Request(endpoint.url, data=body, headers=headers, method="POST")


def execute_remote(query: str, endpoint: EndpointConfig, timeout: Optional[float] = None,
                   sleep: Callable[[float], None] = time.sleep) -> ResultSet:
    if not query.strip():
        raise ValueError("empty query")
    timeout = endpoint.limits.per_query_timeout if timeout is None else timeout
    delay = endpoint.limits.backoff_initial
    attempt = 0
    while True:
        endpoint.rate_limiter.acquire()
        try:
            with urllib.request.urlopen(_request(query, endpoint), timeout=timeout) as resp:
                payload = resp.read().decode("utf-8")
            return ResultSet.loads(payload)
        except urllib.error.HTTPError as exc:
            message = exc.read().decode("utf-8", "replace").strip()
            if 400 <= exc.code < 500:
                if exc.code == 400:
                    raise MalformedQuery(message or "bad request", exc.code) from None
                raise EndpointError(f"HTTP {exc.code}: {message}", exc.code) from None
            failure: EndpointError = EndpointError(f"HTTP {exc.code}: {message}", exc.code)
        except (socket.timeout, TimeoutError):
            failure = EndpointTimeout(f"no answer within {timeout} s")
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                failure = EndpointTimeout(f"no answer within {timeout} s")
            else:
                raise EndpointError(f"transport failure: {exc.reason}") from None
        if attempt >= endpoint.limits.max_retries:
            raise failure
        attempt += 1
        log.warning("%s; retry %d in %.1f s", failure, attempt, delay)
        sleep(delay)
        delay *= 2


class RemoteExecutor:
    def __init__(self, endpoint: EndpointConfig):
        self.endpoint = endpoint

    def execute(self, query: str) -> ResultSet:
        return execute_remote(query, self.endpoint)

    def describe(self) -> str:
        return self.endpoint.url
