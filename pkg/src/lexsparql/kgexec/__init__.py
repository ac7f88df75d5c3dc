"""Query execution: a local evaluator over snapshots, a remote client, a mock endpoint."""

from .compare import Containment, compare_results, contains_expected
from .engine import execute_local
from .errors import (
    EndpointError, EndpointTimeout, MalformedQuery, MalformedResults, ParseError, QueryError,
    SnapshotError, UnsupportedFeature,
)
from .mock import MockEndpoint, serve_mock
from .query import parse_query
from .remote import EndpointConfig, EndpointLimits, RateLimiter, RemoteExecutor, execute_remote
from .results import ResultSet
from .snapshot import Snapshot, default_snapshot, load_snapshot, parse_snapshot
from .terms import PREFIXES, RdfTerm


class LocalExecutor:
    def __init__(self, snapshot: Snapshot):
        self.snapshot = snapshot

    def execute(self, query: str) -> ResultSet:
        return execute_local(query, self.snapshot)

    def describe(self) -> str:
        return f"mock snapshot ({len(self.snapshot)} triples)"


__all__ = [
    "Containment", "EndpointConfig", "EndpointError", "EndpointLimits", "EndpointTimeout",
    "LocalExecutor", "MalformedQuery", "MalformedResults", "MockEndpoint", "PREFIXES",
    "ParseError", "QueryError", "RateLimiter", "RdfTerm", "RemoteExecutor", "ResultSet",
    "Snapshot", "SnapshotError", "UnsupportedFeature", "compare_results", "contains_expected",
    "default_snapshot", "execute_local", "execute_remote", "load_snapshot", "parse_query", "parse_snapshot",
    "serve_mock",
]
