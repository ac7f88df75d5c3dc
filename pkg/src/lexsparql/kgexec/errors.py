class QueryError(Exception):
    """A query could not be executed. Counts as an incorrect response."""


class ParseError(QueryError):
    pass


class UnsupportedFeature(QueryError):
    def __init__(self, feature: str):
        super().__init__(f"unsupported SPARQL feature: {feature}")
        self.feature = feature


class EndpointError(QueryError):
    """Transport or server-side failure while talking to an endpoint."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class MalformedQuery(EndpointError):
    """The endpoint rejected the query (HTTP 400)."""


class EndpointTimeout(EndpointError):
    pass


class MalformedResults(EndpointError):
    pass


class SnapshotError(ValueError):
    pass
