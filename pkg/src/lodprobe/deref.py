"""Dereferenceability classification behind an abstract resolver.

A resource URI counts as dereferenceable in exactly two shapes: a hash URI
whose document answers 200 with an RDF content type, or a slash URI whose
first hop is a 303 redirect that ultimately lands on such a document.
Everything else (direct 200 on a slash URI, 4xx/5xx, non-RDF payloads,
transport failures, runaway redirects) is not dereferenceable, with the
reason preserved.

All verdicts derive from `Resolution` values produced by a `Resolver`.
Tests and CI use the scripted `MockResolver`; the `LiveResolver` is an
optional runtime for real probing and is never required by the suite.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Protocol
from urllib.parse import urlsplit

RDF_CONTENT_TYPES = frozenset(
    {"text/turtle", "application/rdf+xml", "application/n-triples", "application/ld+json"}
)

DEFAULT_MAX_REDIRECTS = 10
DEFAULT_TIMEOUT_SECONDS = 10.0


@dataclass(frozen=True, slots=True)
class Resolution:
    """Observed outcome of resolving one URI, redirect hops included."""

    requested_uri: str
    status_chain: tuple[int, ...] = ()
    content_type: str | None = None
    transport_error: str | None = None

    @property
    def final_status(self) -> int | None:
        return self.status_chain[-1] if self.status_chain else None


class Resolver(Protocol):
    max_redirects: int
    timeout: float

    def resolve(self, uri: str) -> Resolution: ...


class VerdictKind(Enum):
    DEREFERENCEABLE_HASH = "dereferenceable-hash"
    DEREFERENCEABLE_303 = "dereferenceable-303"
    NOT_DEREFERENCEABLE = "not-dereferenceable"


@dataclass(frozen=True, slots=True)
class Verdict:
    kind: VerdictKind
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.kind is not VerdictKind.NOT_DEREFERENCEABLE


def _not_ok(reason: str) -> Verdict:
    return Verdict(VerdictKind.NOT_DEREFERENCEABLE, reason)


def _normalise_content_type(value: str | None) -> str | None:
    if value is None:
        return None
    return value.split(";", 1)[0].strip().lower()


def classify(uri: str, resolver: Resolver) -> Verdict:
    """LOD dereferenceability verdict for one absolute http(s) URI."""
    split = urlsplit(uri)
    if split.scheme not in ("http", "https") or not split.netloc:
        raise ValueError(f"not an absolute http(s) URI: {uri!r}")

    is_hash = "#" in uri
    target = uri.split("#", 1)[0] if is_hash else uri
    res = resolver.resolve(target)

    if res.transport_error is not None:
        return _not_ok(f"transport-error: {res.transport_error}")
    if not res.status_chain:
        return _not_ok("no-response")

    final = res.final_status
    content_type = _normalise_content_type(res.content_type)

    if is_hash:
        if final == 200:
            if content_type in RDF_CONTENT_TYPES:
                return Verdict(VerdictKind.DEREFERENCEABLE_HASH)
            return _not_ok(f"non-rdf-content-type: {content_type}")
        if final is not None and 300 <= final < 400:
            return _not_ok("redirect-not-followed-to-completion")
        return _not_ok(f"http-{final}")

    if res.status_chain[0] != 303:
        if final is not None and 300 <= res.status_chain[0] < 400:
            return _not_ok(f"redirect-{res.status_chain[0]}-not-303")
        return _not_ok("no-303-redirect")
    if final == 200:
        if content_type in RDF_CONTENT_TYPES:
            return Verdict(VerdictKind.DEREFERENCEABLE_303)
        return _not_ok(f"non-rdf-content-type: {content_type}")
    if final is not None and 300 <= final < 400:
        return _not_ok("redirect-not-followed-to-completion")
    return _not_ok(f"http-{final}")


def pld_alive(pld_root: str, resolver: Resolver) -> bool:
    """False iff the PLD root answers 4xx/5xx or fails at transport level."""
    res = resolver.resolve(pld_root)
    if res.transport_error is not None:
        return False
    final = res.final_status
    return final is not None and not 400 <= final <= 599


@dataclass
class _Script:
    """One mock mapping: URI pattern plus the hop-by-hop response list."""

    pattern: str
    responses: list[dict]

    def matches(self, uri: str) -> bool:
        if self.pattern.endswith("*"):
            return uri.startswith(self.pattern[:-1])
        return uri == self.pattern


class MockResolver:
    """Scripted resolver for network-free runs.

    The script maps URI patterns (exact string, or prefix ending in `*`;
    exact beats prefix, longer prefix beats shorter) to an ordered response
    list consumed hop by hop. Each entry is {"status", "location"?,
    "content_type"?} or {"error": reason} for a transport failure.
    """

    def __init__(self, mappings: dict[str, list[dict]], max_redirects: int = DEFAULT_MAX_REDIRECTS):
        self.max_redirects = max_redirects
        self.timeout = DEFAULT_TIMEOUT_SECONDS
        self._scripts = [_Script(p, r) for p, r in mappings.items()]
        self._scripts.sort(key=lambda s: (s.pattern.endswith("*"), -len(s.pattern)))
        self.call_count: dict[str, int] = {}

    @classmethod
    def from_file(cls, path: str | Path) -> "MockResolver":
        doc = json.loads(Path(path).read_text("utf-8"))
        mappings = {m["pattern"]: m["responses"] for m in doc["mappings"]}
        return cls(mappings, max_redirects=doc.get("max_redirects", DEFAULT_MAX_REDIRECTS))

    def _find(self, uri: str) -> _Script | None:
        for script in self._scripts:
            if script.matches(uri):
                return script
        return None

    def resolve(self, uri: str) -> Resolution:
        self.call_count[uri] = self.call_count.get(uri, 0) + 1
        script = self._find(uri)
        if script is None:
            return Resolution(uri, transport_error="unmatched-uri")
        chain: list[int] = []
        content_type = None
        for entry in script.responses:
            if "error" in entry:
                return Resolution(uri, tuple(chain), None, entry["error"])
            status = int(entry["status"])
            chain.append(status)
            content_type = entry.get("content_type")
            if 300 <= status < 400 and entry.get("location"):
                if len(chain) > self.max_redirects:
                    return Resolution(uri, tuple(chain), None, "too-many-redirects")
                continue
            break
        return Resolution(uri, tuple(chain), content_type)


class CachedResolver:
    """At-most-one underlying resolution per distinct URI (single flight).

    Safe under concurrent use: losers of the in-flight race block on an
    event and read the winner's cached Resolution.
    """

    def __init__(self, inner: Resolver):
        self.inner = inner
        self.max_redirects = inner.max_redirects
        self.timeout = inner.timeout
        self._cache: dict[str, Resolution] = {}
        self._inflight: dict[str, threading.Event] = {}
        self._lock = threading.Lock()

    def resolve(self, uri: str) -> Resolution:
        while True:
            with self._lock:
                cached = self._cache.get(uri)
                if cached is not None:
                    return cached
                event = self._inflight.get(uri)
                if event is None:
                    event = threading.Event()
                    self._inflight[uri] = event
                    break
            event.wait()
        try:
            try:
                result = self.inner.resolve(uri)
            except Exception as exc:  # resolver contract: failures are values
                result = Resolution(uri, transport_error=f"resolver-crash: {exc}")
            with self._lock:
                self._cache[uri] = result
            return result
        finally:
            with self._lock:
                self._inflight.pop(uri, None)
            event.set()


class LiveResolver:
    """requests-backed resolver; optional runtime, never needed by tests.

    Follows redirects manually so every hop status lands in the chain.
    Probes with HEAD first and retries with GET when the server rejects
    HEAD, since many endpoints only implement GET.
    """

    def __init__(
        self,
        max_redirects: int = DEFAULT_MAX_REDIRECTS,
        timeout: float = DEFAULT_TIMEOUT_SECONDS,
        accept: str = ", ".join(sorted(RDF_CONTENT_TYPES)),
    ):
        self.max_redirects = max_redirects
        self.timeout = timeout
        self._headers = {"Accept": accept, "User-Agent": "lodprobe/0.1"}

    def resolve(self, uri: str) -> Resolution:
        try:
            import requests
        except ImportError as exc:
            raise RuntimeError("live resolving needs the 'http' extra (requests)") from exc

        chain: list[int] = []
        current = uri
        method = "HEAD"
        try:
            with requests.Session() as session:
                while True:
                    resp = session.request(
                        method,
                        current,
                        headers=self._headers,
                        timeout=self.timeout,
                        allow_redirects=False,
                    )
                    if method == "HEAD" and resp.status_code in (405, 501):
                        method = "GET"
                        continue
                    chain.append(resp.status_code)
                    if 300 <= resp.status_code < 400 and resp.headers.get("Location"):
                        if len(chain) > self.max_redirects:
                            return Resolution(uri, tuple(chain), None, "too-many-redirects")
                        current = requests.compat.urljoin(current, resp.headers["Location"])
                        continue
                    return Resolution(uri, tuple(chain), resp.headers.get("Content-Type"))
        except requests.RequestException as exc:
            return Resolution(uri, tuple(chain), None, str(exc))
