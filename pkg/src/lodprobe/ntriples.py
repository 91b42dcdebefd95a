"""Streaming N-Triples reader and writer.

The parser is line-oriented: one statement per physical line, UTF-8 text,
`\\n` or `\\r\\n` endings. A compiled statement regex handles well-formed
lines in one pass; only lines it rejects go through the slower diagnostic
scanner that pins down a byte offset and reason. Malformed lines never
abort a stream; the reader records them and moves on, because real-world
dumps are dirty and a quality assessor has to survive them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, Union

from .terms import Term, TermKind, Triple

# Statement grammar pieces. IRIs may contain \uXXXX/\UXXXXXXXX escapes;
# literals additionally take the single-character ECHAR escapes.
_IRI = r"<(?:[^\x00-\x20<>\"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>"
_BNODE = r"_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"
_LITERAL = (
    r"\"(?:[^\"\\\n\r]|\\[tbnrf\"'\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*\""
    r"(?:\^\^" + _IRI + r"|@[A-Za-z]+(?:-[A-Za-z0-9]+)*)?"
)

_STATEMENT_RE = re.compile(
    r"[ \t]*(" + _IRI + r"|" + _BNODE + r")"
    r"[ \t]+(" + _IRI + r")"
    r"[ \t]+(" + _IRI + r"|" + _BNODE + r"|" + _LITERAL + r")"
    r"[ \t]*\.[ \t]*(?:#.*)?$"
)
_BLANK_RE = re.compile(r"[ \t]*(?:#.*)?$")
_ESCAPE_RE = re.compile(r"\\(?:[tbnrf\"'\\]|u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8})")
_ECHAR_TABLE = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\",
}


class NTriplesParseError(ValueError):
    """A single malformed line; carries the byte offset of the problem."""

    def __init__(self, reason: str, byte_offset: int = 0):
        super().__init__(f"{reason} (byte {byte_offset})")
        self.reason = reason
        self.byte_offset = byte_offset


class DatasetReadError(OSError):
    """I/O failure while streaming; `bytes_consumed` tells how far we got."""

    def __init__(self, cause: Exception, bytes_consumed: int):
        super().__init__(f"read failed after {bytes_consumed} bytes: {cause}")
        self.bytes_consumed = bytes_consumed


@dataclass(frozen=True, slots=True)
class ParseFailure:
    """Recorded malformed line: where it was and why it was dropped."""

    line_number: int
    byte_offset: int
    reason: str
    line: str


@dataclass
class StreamSummary:
    lines_read: int = 0
    triples_parsed: int = 0
    parse_errors: int = 0

    def as_dict(self) -> dict:
        return {
            "lines_read": self.lines_read,
            "triples_parsed": self.triples_parsed,
            "parse_errors": self.parse_errors,
        }


def _decode_escapes(raw: str, allow_echar: bool) -> str:
    # The statement regex guarantees every backslash starts a valid escape,
    # so only numeric escapes still need a range check here.
    if "\\" not in raw:
        return raw

    def repl(m: re.Match) -> str:
        esc = m.group(0)
        tag = esc[1]
        if tag in ("u", "U"):
            cp = int(esc[2:], 16)
            if 0xD800 <= cp <= 0xDFFF or cp > 0x10FFFF:
                raise NTriplesParseError(f"escape \\{tag}{esc[2:]} is not a scalar value")
            return chr(cp)
        if not allow_echar:
            raise NTriplesParseError(f"escape \\{tag} not allowed in IRIs")
        return _ECHAR_TABLE[tag]

    return _ESCAPE_RE.sub(repl, raw)


def _term_from_token(token: str) -> Term:
    if token.startswith("<"):
        return Term(TermKind.IRI, _decode_escapes(token[1:-1], allow_echar=False))
    if token.startswith("_:"):
        return Term(TermKind.BLANK_NODE, token[2:])
    # literal, optionally suffixed with ^^<datatype> or @lang
    end = _literal_end(token)
    value = _decode_escapes(token[1:end], allow_echar=True)
    suffix = token[end + 1 :]
    if suffix.startswith("^^"):
        return Term(TermKind.LITERAL, value, datatype_iri=_decode_escapes(suffix[3:-1], False))
    if suffix.startswith("@"):
        return Term(TermKind.LITERAL, value, language_tag=suffix[1:])
    return Term(TermKind.LITERAL, value)


def _literal_end(token: str) -> int:
    i = 1
    while True:
        if token[i] == "\\":
            i += 2 if token[i + 1] not in ("u", "U") else (6 if token[i + 1] == "u" else 10)
        elif token[i] == '"':
            return i
        else:
            i += 1


def parse_line(line: str) -> Triple | None:
    """Parse one physical line; None for blank and comment lines.

    Raises NTriplesParseError for anything else that is not a statement.
    """
    line = line.rstrip("\r\n")
    if _BLANK_RE.fullmatch(line):
        return None
    m = _STATEMENT_RE.fullmatch(line)
    if m is None:
        raise _diagnose(line)
    try:
        return Triple(
            _term_from_token(m.group(1)),
            _term_from_token(m.group(2)),
            _term_from_token(m.group(3)),
        )
    except NTriplesParseError:
        raise
    except ValueError as exc:
        raise NTriplesParseError(str(exc)) from exc


def _diagnose(line: str) -> NTriplesParseError:
    """Re-scan a rejected line to report where it stops being a statement."""
    pos = 0

    def byte_at(p: int) -> int:
        return len(line[:p].encode("utf-8"))

    def skip_ws(p: int) -> int:
        while p < len(line) and line[p] in " \t":
            p += 1
        return p

    def scan_term(p: int, role: str, allow_literal: bool, allow_bnode: bool):
        if p >= len(line):
            return None, NTriplesParseError(f"missing {role}", byte_at(p))
        ch = line[p]
        if ch == "<":
            end = line.find(">", p)
            if end < 0:
                return None, NTriplesParseError(f"unterminated IRI in {role}", byte_at(p))
            return end + 1, None
        if ch == "_" and line[p : p + 2] == "_:" and allow_bnode:
            q = p + 2
            while q < len(line) and line[q] not in " \t":
                q += 1
            return q, None
        if ch == '"':
            if not allow_literal:
                return None, NTriplesParseError(f"literal not allowed as {role}", byte_at(p))
            q = p + 1
            while q < len(line):
                if line[q] == "\\":
                    q += 2
                elif line[q] == '"':
                    break
                else:
                    q += 1
            if q >= len(line):
                return None, NTriplesParseError("unterminated literal", byte_at(p))
            q += 1
            if line[q : q + 2] == "^^":
                end = line.find(">", q)
                if end < 0:
                    return None, NTriplesParseError("unterminated datatype IRI", byte_at(q))
                q = end + 1
            elif q < len(line) and line[q] == "@":
                while q < len(line) and line[q] not in " \t":
                    q += 1
            return q, None
        return None, NTriplesParseError(f"unexpected character {ch!r} in {role}", byte_at(p))

    pos = skip_ws(pos)
    for role, allow_lit, allow_bn in (
        ("subject", False, True),
        ("predicate", False, False),
        ("object", True, True),
    ):
        nxt, err = scan_term(pos, role, allow_lit, allow_bn)
        if err:
            return err
        pos = skip_ws(nxt)
    if pos >= len(line) or line[pos] != ".":
        return NTriplesParseError("missing statement terminator '.'", byte_at(pos))
    # Structure scans clean, so the failure is lexical (bad escape, bad
    # character inside a term, malformed language tag, ...).
    return NTriplesParseError("malformed term", byte_at(skip_ws(0)))


Source = Union[str, Path, BinaryIO, Iterable[str]]


class NTriplesReader:
    """One-pass reader over a dataset; constant memory in the file size.

    Iterating yields Triples in file order. Malformed lines are skipped,
    counted in `summary`, and the first `max_recorded_errors` of them kept
    in `failures` with line numbers and byte offsets.
    """

    def __init__(self, source: Source, max_recorded_errors: int = 100):
        self._source = source
        self.max_recorded_errors = max_recorded_errors
        self.summary = StreamSummary()
        self.failures: list[ParseFailure] = []
        self.bytes_consumed = 0

    def _lines(self) -> Iterator[str]:
        src = self._source
        if isinstance(src, (str, Path)):
            with open(src, "rb") as fh:
                yield from self._decode_lines(fh)
        elif hasattr(src, "readline"):
            yield from self._decode_lines(src)
        else:
            for line in src:
                self.bytes_consumed += len(line.encode("utf-8")) + 1
                yield line

    def _decode_lines(self, fh) -> Iterator[str]:
        while True:
            try:
                raw = fh.readline()
            except OSError as exc:
                raise DatasetReadError(exc, self.bytes_consumed) from exc
            if not raw:
                return
            self.bytes_consumed += len(raw)
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError:
                yield NTriplesParseError("invalid UTF-8", 0)  # sentinel, handled below

    def __iter__(self) -> Iterator[Triple]:
        for item in self.events():
            if isinstance(item, Triple):
                yield item

    def events(self) -> Iterator[Triple | ParseFailure]:
        """Yield every parsed Triple and every ParseFailure, in file order."""
        for line in self._lines():
            self.summary.lines_read += 1
            if isinstance(line, NTriplesParseError):
                yield self._record(line, "<undecodable line>")
                continue
            try:
                triple = parse_line(line)
            except NTriplesParseError as exc:
                yield self._record(exc, line)
                continue
            if triple is not None:
                self.summary.triples_parsed += 1
                yield triple

    def _record(self, exc: NTriplesParseError, line: str) -> ParseFailure:
        self.summary.parse_errors += 1
        failure = ParseFailure(
            self.summary.lines_read, exc.byte_offset, exc.reason, line.rstrip("\r\n")[:200]
        )
        if len(self.failures) < self.max_recorded_errors:
            self.failures.append(failure)
        return failure


_LITERAL_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_NEEDS_LITERAL_ESCAPE = re.compile(r'[\x00-\x1f"\\\x7f]')
_IRI_FORBIDDEN = set('<>"{}|^`\\') | {chr(c) for c in range(0x21)}


def _escape_literal(value: str) -> str:
    if _NEEDS_LITERAL_ESCAPE.search(value) is None:
        return value
    out = []
    for ch in value:
        esc = _LITERAL_ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _escape_iri(value: str) -> str:
    if _IRI_FORBIDDEN.isdisjoint(value):
        return value
    return "".join(f"\\u{ord(c):04X}" if c in _IRI_FORBIDDEN else c for c in value)


def serialize_term(term: Term) -> str:
    if term.kind is TermKind.IRI:
        return f"<{_escape_iri(term.lexical)}>"
    if term.kind is TermKind.BLANK_NODE:
        return f"_:{term.lexical}"
    body = f'"{_escape_literal(term.lexical)}"'
    if term.datatype_iri is not None:
        return f"{body}^^<{_escape_iri(term.datatype_iri)}>"
    if term.language_tag is not None:
        return f"{body}@{term.language_tag}"
    return body


def serialize_triple(t: Triple) -> str:
    """Canonical one-line form; parse_line round-trips it exactly."""
    return f"{serialize_term(t.subject)} {serialize_term(t.predicate)} {serialize_term(t.object)} ."
