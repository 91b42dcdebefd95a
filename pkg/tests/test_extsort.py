from collections import Counter

from lodprobe import SeededRng, sort_by_subject, verify_subject_contiguous
from lodprobe.extsort import subject_sort_key

from synth import random_triple
from lodprobe import serialize_triple


def _oracle_sort(lines: list[bytes]) -> list[bytes]:
    return sorted(lines, key=lambda l: (subject_sort_key(l)[0], l))


def _write(path, lines: list[bytes]):
    path.write_bytes(b"".join(l + b"\n" for l in lines))


def _read(path) -> list[bytes]:
    return path.read_bytes().splitlines()


def test_already_sorted_is_identity(tmp_path):
    lines = [
        b"<http://a/s1> <http://a/p> <http://a/o1> .",
        b"<http://a/s1> <http://a/p> <http://a/o2> .",
        b"<http://a/s2> <http://a/p> <http://a/o1> .",
    ]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    summary = sort_by_subject(src, dst, memory_budget=1 << 20)
    assert _read(dst) == lines
    assert summary.lines == 3
    assert summary.malformed_lines == 0
    assert verify_subject_contiguous(dst) is None


def test_interleaved_subjects_grouped(tmp_path):
    lines = [
        b"<http://a/s2> <http://a/p> <http://a/o1> .",
        b"<http://a/s1> <http://a/p> <http://a/o1> .",
        b"<http://a/s2> <http://a/p> <http://a/o2> .",
        b"<http://a/s1> <http://a/p> <http://a/o2> .",
    ]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    sort_by_subject(src, dst)
    out = _read(dst)
    subjects = [l.split(b" ", 1)[0] for l in out]
    assert subjects == sorted(subjects)
    assert Counter(out) == Counter(lines)
    assert verify_subject_contiguous(dst) is None
    assert verify_subject_contiguous(src) == 3  # s2 reappears on line 3


def test_malformed_lines_pass_through_counted(tmp_path):
    lines = [
        b"<http://a/s2> <http://a/p> <http://a/o> .",
        b"complete junk here",
        b"<http://a/s1> <http://a/p> <http://a/o> .",
        b"@prefix nonsense",
    ]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    summary = sort_by_subject(src, dst)
    assert summary.malformed_lines == 2
    assert Counter(_read(dst)) == Counter(lines)


def test_multichunk_matches_in_memory_oracle(tmp_path):
    rng = SeededRng(404)
    lines = [
        serialize_triple(random_triple(rng, n_subjects=500)).encode() for _ in range(100_000)
    ]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    # ~500 KB budget forces a couple dozen spill chunks.
    summary = sort_by_subject(src, dst, memory_budget=500_000)
    assert summary.chunks > 5
    assert _read(dst) == _oracle_sort(lines)
    assert verify_subject_contiguous(dst) is None


def test_single_chunk_matches_oracle(tmp_path):
    rng = SeededRng(405)
    lines = [serialize_triple(random_triple(rng)).encode() for _ in range(2_000)]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    summary = sort_by_subject(src, dst, memory_budget=1 << 26)
    assert summary.chunks == 0
    assert _read(dst) == _oracle_sort(lines)


def test_blank_node_subjects_group(tmp_path):
    lines = [
        b"_:b2 <http://a/p> <http://a/o1> .",
        b"_:b1 <http://a/p> <http://a/o1> .",
        b"_:b2 <http://a/p> <http://a/o2> .",
    ]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    sort_by_subject(src, dst)
    assert verify_subject_contiguous(dst) is None


def test_crlf_normalised(tmp_path):
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    src.write_bytes(
        b"<http://a/s2> <http://a/p> <http://a/o> .\r\n"
        b"<http://a/s1> <http://a/p> <http://a/o> .\r\n"
    )
    sort_by_subject(src, dst)
    assert _read(dst) == [
        b"<http://a/s1> <http://a/p> <http://a/o> .",
        b"<http://a/s2> <http://a/p> <http://a/o> .",
    ]


def test_ties_broken_by_full_line(tmp_path):
    lines = [
        b"<http://a/s> <http://a/p2> <http://a/o> .",
        b"<http://a/s> <http://a/p1> <http://a/o> .",
        b"<http://a/s> <http://a/p1> <http://a/a> .",
    ]
    src, dst = tmp_path / "in.nt", tmp_path / "out.nt"
    _write(src, lines)
    sort_by_subject(src, dst)
    assert _read(dst) == sorted(lines)


def test_subject_sort_key_forms():
    assert subject_sort_key(b"<http://a/s> <http://a/p> <http://a/o> .") == (b"<http://a/s>", True)
    assert subject_sort_key(b"_:b7 <http://a/p> <http://a/o> .") == (b"_:b7", True)
    assert subject_sort_key(b"junk line") == (b"junk", False)
    assert subject_sort_key(b"") == (b"", False)
