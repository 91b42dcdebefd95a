"""External merge sort that groups an N-Triples file by subject.

Works on raw lines, not parsed triples: the key is the subject's serialized
form (first `<...>` or `_:label` token), with the full line breaking ties.
Lines whose subject cannot be scanned (junk, comments, blanks) still pass
through, keyed by their leading token, and are counted in the summary.

Memory is bounded by `memory_budget` using per-line `sys.getsizeof`
accounting: a chunk is sorted and spilled to a temp file once its strings
would exceed the budget, and the spills are k-way merged back.
"""

from __future__ import annotations

import heapq
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .murmur3 import murmur3_x64_128

_LIST_SLOT_BYTES = 8


@dataclass
class SortSummary:
    lines: int = 0
    chunks: int = 0
    malformed_lines: int = 0

    def as_dict(self) -> dict:
        return {
            "lines": self.lines,
            "chunks": self.chunks,
            "malformed_lines": self.malformed_lines,
        }


def subject_sort_key(line: bytes) -> tuple[bytes, bool]:
    """(sort key, subject recognised). Key never contains a tab or newline."""
    stripped = line.lstrip(b" \t")
    if stripped.startswith(b"<"):
        end = stripped.find(b">")
        if end > 0:
            return stripped[: end + 1], True
    elif stripped.startswith(b"_:"):
        end = 2
        while end < len(stripped) and stripped[end : end + 1] not in (b" ", b"\t"):
            end += 1
        if end > 2:
            return stripped[:end], True
    # raw prefix fallback: leading token of the line as-is
    token = line.split(b" ", 1)[0].split(b"\t", 1)[0]
    return token, False


def sort_by_subject(
    input_path: str | Path,
    output_path: str | Path,
    memory_budget: int = 64 * 1024 * 1024,
    tmp_dir: str | Path | None = None,
) -> SortSummary:
    """Sort `input_path` so lines sharing a subject are contiguous.

    Output is the same multiset of lines (line endings normalised to \\n)
    ordered by (subject token, full line), both compared bytewise.
    """
    summary = SortSummary()
    chunk: list[bytes] = []
    chunk_bytes = 0
    spill_paths: list[str] = []

    def spill():
        nonlocal chunk, chunk_bytes
        chunk.sort()
        fd, path = tempfile.mkstemp(prefix="lodprobe-sort-", dir=tmp_dir)
        with os.fdopen(fd, "wb") as out:
            # One line at a time: joining would transiently double the
            # chunk's memory footprint.
            for decorated in chunk:
                out.write(decorated)
                out.write(b"\n")
        spill_paths.append(path)
        summary.chunks += 1
        chunk = []
        chunk_bytes = 0

    try:
        with open(input_path, "rb") as fh:
            for raw in fh:
                line = raw.rstrip(b"\r\n")
                summary.lines += 1
                key, ok = subject_sort_key(line)
                if not ok:
                    summary.malformed_lines += 1
                # Decorated form sorts like the (key, line) pair: \t is
                # below every byte a subject token can hold.
                decorated = key + b"\t" + line
                cost = sys.getsizeof(decorated) + _LIST_SLOT_BYTES
                if chunk and chunk_bytes + cost > memory_budget:
                    spill()
                chunk.append(decorated)
                chunk_bytes += cost

        out_dir = Path(output_path).parent
        fd, tmp_out = tempfile.mkstemp(prefix="lodprobe-sorted-", dir=out_dir)
        try:
            with os.fdopen(fd, "wb") as out:
                if not spill_paths:
                    chunk.sort()
                    for decorated in chunk:
                        out.write(decorated.split(b"\t", 1)[1])
                        out.write(b"\n")
                else:
                    if chunk:
                        spill()
                    readers = [open(p, "rb") for p in spill_paths]
                    try:
                        # Compare without the record terminator: with it, a
                        # line that extends another line would sort before it
                        # whenever the extension starts with a tab.
                        for rec in heapq.merge(*readers, key=lambda r: r[:-1]):
                            out.write(rec.split(b"\t", 1)[1])
                    finally:
                        for r in readers:
                            r.close()
            os.replace(tmp_out, output_path)
        except BaseException:
            os.unlink(tmp_out)
            raise
    finally:
        for p in spill_paths:
            if os.path.exists(p):
                os.unlink(p)
    return summary


def verify_subject_contiguous(path: str | Path) -> int | None:
    """Single-pass contiguity check.

    Returns None when every subject's lines are contiguous, else the
    1-based line number of the first line whose subject already closed.
    Memory stays bounded by keeping 128-bit key digests, not keys.
    """
    closed: set[int] = set()
    current: bytes | None = None

    def digest(key: bytes) -> int:
        h1, h2 = murmur3_x64_128(key)
        return (h1 << 64) | h2

    with open(path, "rb") as fh:
        for line_no, raw in enumerate(fh, start=1):
            key, _ = subject_sort_key(raw.rstrip(b"\r\n"))
            if key == current:
                continue
            if current is not None:
                closed.add(digest(current))
            current = key
            if digest(key) in closed:
                return line_no
    return None
