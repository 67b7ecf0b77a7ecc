"""HTTP client for model servers speaking the JSON wire contract.

Endpoints::

    POST /encode    {"text"}                      -> {"penman"}
    POST /decode    {"penman", "style"}           -> {"text"}
    POST /stylize   {"text", "style"}             -> {"text"}
    POST /finetune  {"role", "style"?, "pairs"}   -> {"job"}
    GET  /finetune/{id}                           -> {"status": running|done|failed}
    POST /classify  {"text"}                      -> {"label", "confidence"}

Timeouts, connection failures, 429 and 5xx responses are retried; other
non-2xx statuses fail at once. Every endpoint is idempotent on the server
side, so retrying a request that may have been applied is safe.
"""

from __future__ import annotations

import logging
import threading
import time
from typing import Sequence

import httpx

from ..amr import AmrGraph, canonical_penman, parse_penman, repair_penman
from ..errors import (
    AmrError,
    BackendError,
    BackendHTTPError,
    BackendProtocolError,
    BackendTimeout,
    BackendTrainingError,
    BackendUnreachable,
)
from .interfaces import Backends

log = logging.getLogger(__name__)

_RETRY_STATUS = frozenset({429, 500, 502, 503, 504})


class RemoteSession:
    def __init__(self, endpoint: str, timeout: float = 30.0, retries: int = 2, max_in_flight: int = 4,
                 backoff: float = 0.1, transport: httpx.BaseTransport | None = None):
        if retries < 0:
            raise ValueError("retries must be >= 0")
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        self.endpoint = endpoint.rstrip("/")
        self.retries = retries
        self.backoff = backoff
        self.max_in_flight = max_in_flight
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(base_url=self.endpoint, timeout=timeout, transport=transport)

    def close(self):
        self._client.close()

    def request(self, method: str, path: str, body: dict | None = None) -> dict:
        last: BackendError | None = None
        for attempt in range(self.retries + 1):
            if attempt and self.backoff:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                with self._slots:
                    resp = self._client.request(method, path, json=body)
            except httpx.TimeoutException as exc:
                last = BackendTimeout(f"{method} {path} timed out ({exc.__class__.__name__})")
                continue
            except httpx.TransportError as exc:
                last = BackendUnreachable(f"{method} {path} failed: {exc}")
                continue
            if resp.status_code in _RETRY_STATUS:
                last = BackendHTTPError(resp.status_code, f"{method} {path}")
                continue
            if not resp.is_success:
                raise BackendHTTPError(resp.status_code, f"{method} {path}: {resp.text[:200]}")
            try:
                data = resp.json()
            except ValueError:
                raise BackendProtocolError(f"{method} {path}: response is not JSON") from None
            if not isinstance(data, dict):
                raise BackendProtocolError(f"{method} {path}: expected a JSON object")
            return data
        assert last is not None
        raise last

    def field(self, data: dict, key: str, path: str):
        if not isinstance(data.get(key), str):
            raise BackendProtocolError(f"{path}: response lacks string field {key!r}")
        return data[key]

    def ping(self) -> None:
        """Raise :class:`BackendUnreachable` unless the server answers at all."""
        try:
            self._client.get("/")
        except httpx.HTTPError as exc:
            raise BackendUnreachable(f"{self.endpoint} is unreachable: {exc}") from None

    def fine_tune(self, role: str, style: str | None, pairs: Sequence[tuple[str, AmrGraph]],
                  poll_interval: float = 0.5, poll_timeout: float = 3600.0) -> None:
        body = {"role": role, "pairs": [{"text": s, "penman": canonical_penman(g)} for s, g in pairs]}
        if style is not None:
            body["style"] = style
        job = self.request("POST", "/finetune", body).get("job")
        if not isinstance(job, (str, int)):
            raise BackendProtocolError("/finetune: response lacks a job id")
        deadline = time.monotonic() + poll_timeout
        while True:
            status = self.field(self.request("GET", f"/finetune/{job}"), "status", "/finetune")
            if status == "done":
                return
            if status == "failed":
                raise BackendTrainingError(f"fine-tuning job {job} ({role}{'/' + style if style else ''}) failed")
            if status != "running":
                raise BackendProtocolError(f"/finetune: unknown job status {status!r}")
            if time.monotonic() > deadline:
                raise BackendTimeout(f"fine-tuning job {job} did not finish in {poll_timeout}s")
            time.sleep(poll_interval)


def _graph_from_wire(text: str) -> AmrGraph:
    try:
        return parse_penman(text)
    except AmrError as exc:
        repairs: list[str] = []
        graph = repair_penman(text, repairs)
        log.warning("repaired malformed Penman from server (%s): %s", exc, "; ".join(repairs) or "no edits")
        return graph


class RemoteEncoder:
    def __init__(self, session: RemoteSession, poll_interval: float = 0.5):
        self.session = session
        self.poll_interval = poll_interval

    def to_amr(self, sentence: str) -> AmrGraph:
        data = self.session.request("POST", "/encode", {"text": sentence})
        return _graph_from_wire(self.session.field(data, "penman", "/encode"))

    def fine_tune(self, pairs) -> None:
        self.session.fine_tune("encoder", None, pairs, self.poll_interval)


class RemoteDecoder:
    def __init__(self, session: RemoteSession, style: str, poll_interval: float = 0.5):
        self.session = session
        self.style = style
        self.poll_interval = poll_interval

    def to_text(self, graph: AmrGraph) -> str:
        data = self.session.request("POST", "/decode", {"penman": canonical_penman(graph), "style": self.style})
        return self.session.field(data, "text", "/decode")

    def fine_tune(self, pairs) -> None:
        self.session.fine_tune("decoder", self.style, pairs, self.poll_interval)


class RemoteStyler:
    def __init__(self, session: RemoteSession):
        self.session = session

    def stylize(self, sentence: str, style: str) -> str:
        data = self.session.request("POST", "/stylize", {"text": sentence, "style": style})
        return self.session.field(data, "text", "/stylize")


class RemoteStyleScorer:
    """Style classifier behind ``POST /classify``."""

    def __init__(self, session: RemoteSession, styles: Sequence[str]):
        self.session = session
        self.styles = tuple(styles)

    def classify(self, sentence: str) -> tuple[str, float]:
        data = self.session.request("POST", "/classify", {"text": sentence})
        label = self.session.field(data, "label", "/classify")
        conf = data.get("confidence", 0.0)
        if not isinstance(conf, (int, float)) or not 0.0 <= conf <= 1.0:
            raise BackendProtocolError("/classify: confidence must be a number in [0, 1]")
        return label, float(conf)


def remote_backend_client(endpoint: str, styles: Sequence[str], timeout: float = 30.0, retries: int = 2,
                          max_in_flight: int = 4, backoff: float = 0.1, poll_interval: float = 0.5,
                          transport: httpx.BaseTransport | None = None) -> Backends:
    """Backends whose every call goes to the server at ``endpoint``.

    ``transport`` is passed to :class:`httpx.Client` (tests use
    :class:`httpx.MockTransport`).
    """
    session = RemoteSession(endpoint, timeout, retries, max_in_flight, backoff, transport)
    return Backends(
        RemoteEncoder(session, poll_interval),
        {s: RemoteDecoder(session, s, poll_interval) for s in styles},
        RemoteStyler(session),
        extra={"session": session},
    )
