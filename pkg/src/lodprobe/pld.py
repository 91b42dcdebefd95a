"""Pay-level domain extraction against a bundled public-suffix snapshot.

The PLD of an IRI is the registrable domain of its host: one label beyond
the public suffix (dbpedia.org for http://dbpedia.org/resource/Malta).
Matching follows the public-suffix algorithm: longest rule wins,
exception rules beat wildcards, and hosts under no listed suffix fall
back to their last two labels (the list's implicit '*' default).
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from urllib.parse import urlsplit

_SNAPSHOT_NAME = "public_suffix_snapshot.dat"
_IPV4_RE = re.compile(r"^\d{1,3}(?:\.\d{1,3}){3}$")


class NoPldError(ValueError):
    """The term has no pay-level domain (blank node, non-http, IP, bare suffix)."""


class _SuffixRules:
    def __init__(self, lines):
        self.exact: set[str] = set()
        self.wildcard: set[str] = set()  # parent of a '*.' rule
        self.exception: set[str] = set()
        for raw in lines:
            rule = raw.strip().lower()
            if not rule or rule.startswith("//"):
                continue
            if rule.startswith("!"):
                self.exception.add(rule[1:])
            elif rule.startswith("*."):
                self.wildcard.add(rule[2:])
            else:
                self.exact.add(rule)

    def public_suffix_length(self, labels: list[str]) -> int:
        """Label count of the host's public suffix (longest matching rule)."""
        n = len(labels)
        for i in range(n):
            tail = labels[i:]
            joined = ".".join(tail)
            if joined in self.exception:
                return len(tail) - 1
            if joined in self.exact:
                return len(tail)
            if len(tail) >= 2 and ".".join(tail[1:]) in self.wildcard:
                return len(tail)
        return 1  # implicit default rule: the bare TLD


@lru_cache(maxsize=1)
def _rules() -> _SuffixRules:
    text = resources.files(__package__).joinpath(_SNAPSHOT_NAME).read_text("utf-8")
    return _SuffixRules(text.splitlines())


def registrable_domain(host: str) -> str:
    """Registrable domain of a bare hostname (no scheme, no port)."""
    host = host.strip().rstrip(".").lower()
    if not host or _IPV4_RE.fullmatch(host) or ":" in host:
        raise NoPldError(f"no registrable domain for host {host!r}")
    labels = host.split(".")
    if "" in labels:
        raise NoPldError(f"malformed host {host!r}")
    ps_len = _rules().public_suffix_length(labels)
    if len(labels) <= ps_len:
        raise NoPldError(f"host {host!r} is itself a public suffix")
    return ".".join(labels[-(ps_len + 1) :])


def pld(iri: str) -> str:
    """Pay-level domain of an absolute http(s) IRI.

    Raises NoPldError for anything else (blank node labels, other schemes,
    hostless IRIs, IP literals) so callers can skip the term.
    """
    try:
        split = urlsplit(iri)
        host = split.hostname
    except ValueError as exc:
        raise NoPldError(f"unparseable IRI {iri!r}: {exc}") from exc
    if split.scheme not in ("http", "https"):
        raise NoPldError(f"not an http(s) IRI: {iri!r}")
    if not host:
        raise NoPldError(f"no host in IRI: {iri!r}")
    return registrable_domain(host)


def try_pld(iri: str) -> str | None:
    """`pld` as a query: None instead of NoPldError."""
    try:
        return pld(iri)
    except (NoPldError, ValueError):
        return None
