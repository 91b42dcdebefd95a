import io

import pytest

from lodprobe import (
    NTriplesParseError,
    NTriplesReader,
    SeededRng,
    Term,
    TermKind,
    Triple,
    blank,
    iri,
    literal,
    parse_line,
    serialize_triple,
)
from lodprobe.ntriples import ParseFailure, serialize_term


def test_minimal_statement():
    t = parse_line('<http://a.org/s> <http://a.org/p> "x" .')
    assert t == Triple(iri("http://a.org/s"), iri("http://a.org/p"), literal("x"))


def test_comment_and_blank_lines_skip():
    assert parse_line("# comment") is None
    assert parse_line("") is None
    assert parse_line("   \t ") is None


def test_iri_object_and_blank_nodes():
    t = parse_line("_:b0 <http://a.org/p> <http://a.org/o> .")
    assert t.subject == blank("b0")
    assert t.object == iri("http://a.org/o")


def test_datatype_and_language_literals():
    t = parse_line(
        '<http://a.org/s> <http://a.org/p> '
        '"3.14"^^<http://www.w3.org/2001/XMLSchema#decimal> .'
    )
    assert t.object.datatype_iri == "http://www.w3.org/2001/XMLSchema#decimal"
    t = parse_line('<http://a.org/s> <http://a.org/p> "bonġu"@mt .')
    assert t.object.language_tag == "mt"
    assert t.object.lexical == "bonġu"


def test_crlf_and_trailing_comment():
    assert parse_line('<http://a/s> <http://a/p> <http://a/o> .\r\n') is not None
    assert parse_line('<http://a/s> <http://a/p> "v" . # trailing') is not None


# Independent escape decoder: walks the escape table directly, no regex.
_TABLE = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _oracle_decode(raw: str) -> str:
    out, i = [], 0
    while i < len(raw):
        if raw[i] != "\\":
            out.append(raw[i])
            i += 1
            continue
        tag = raw[i + 1]
        if tag == "u":
            out.append(chr(int(raw[i + 2 : i + 6], 16)))
            i += 6
        elif tag == "U":
            out.append(chr(int(raw[i + 2 : i + 10], 16)))
            i += 10
        else:
            out.append(_TABLE[tag])
            i += 2
    return "".join(out)


@pytest.mark.parametrize(
    "escaped",
    [
        r"abc",
        r"Aß二\U0001F600",
        r"tab\there",
        r"quote \" inside",
        r"back\\slash",
        r"newline\nmix\r\t\f\b",
        r"	end",
    ],
)
def test_escape_decoding_matches_oracle(escaped):
    line = f'<http://a.org/s> <http://a.org/p> "{escaped}" .'
    assert parse_line(line).object.lexical == _oracle_decode(escaped)


def test_surrogate_escape_rejected():
    with pytest.raises(NTriplesParseError):
        parse_line('<http://a/s> <http://a/p> "\\uD800" .')


def test_out_of_range_codepoint_rejected():
    with pytest.raises(NTriplesParseError):
        parse_line('<http://a/s> <http://a/p> "\\U00110000" .')


@pytest.mark.parametrize(
    "bad",
    [
        "<http://a/s> <http://a/p> .",                     # missing object
        "<http://a/s> <http://a/p> <http://a/o>",          # missing dot
        '"lit" <http://a/p> <http://a/o> .',               # literal subject
        "<http://a/s> _:b <http://a/o> .",                 # blank predicate
        "<http://a/s> <http://a/p> <http://a/o> . extra",  # trailing junk
        "<http://a/s <http://a/p> <http://a/o> .",         # unterminated IRI
        '<http://a/s> <http://a/p> "open .',               # unterminated literal
        "just some text",
    ],
)
def test_malformed_lines_raise(bad):
    with pytest.raises(NTriplesParseError):
        parse_line(bad)


def test_parse_error_carries_offset():
    try:
        parse_line('<http://a/s> <http://a/p> "open .')
    except NTriplesParseError as exc:
        assert exc.byte_offset > 0
        assert "literal" in exc.reason
    else:
        pytest.fail("expected a parse error")


def test_serialize_minimal():
    t = Triple(iri("http://a/s"), iri("http://a/p"), iri("http://a/o"))
    assert serialize_triple(t) == "<http://a/s> <http://a/p> <http://a/o> ."


def test_serialize_escapes_quote():
    t = Triple(iri("http://a/s"), iri("http://a/p"), literal('say "hi"'))
    assert '\\"' in serialize_triple(t)
    assert parse_line(serialize_triple(t)) == t


def _random_term(rng: SeededRng, subject_position: bool = False) -> Term:
    roll = rng.uniform_below(3 if not subject_position else 2)
    if roll == 0:
        path = "".join(chr(0x21 + rng.uniform_below(90)) for _ in range(rng.uniform_below(12)))
        path = path.replace(">", "").replace("<", "").replace('"', "")
        return iri(f"http://ex{rng.uniform_below(100)}.org/{path}")
    if roll == 1:
        return blank(f"b{rng.uniform_below(1000)}")
    alphabet = ['"', "\\", "\n", "\r", "\t", "x", "ż", "€", " ", "𝄞", "a", "#"]
    value = "".join(alphabet[rng.uniform_below(len(alphabet))] for _ in range(rng.uniform_below(15)))
    style = rng.uniform_below(3)
    if style == 0:
        return literal(value)
    if style == 1:
        return literal(value, datatype_iri=f"http://dt.org/t{rng.uniform_below(5)}")
    return literal(value, language_tag="en" if rng.uniform_below(2) else "en-GB")


def test_roundtrip_property():
    rng = SeededRng(20260810)
    for _ in range(500):
        t = Triple(
            _random_term(rng, subject_position=True),
            iri(f"http://ex.org/p{rng.uniform_below(50)}"),
            _random_term(rng),
        )
        assert parse_line(serialize_triple(t)) == t


def test_term_invariants():
    with pytest.raises(ValueError):
        Term(TermKind.IRI, "has space")
    with pytest.raises(ValueError):
        Term(TermKind.IRI, "")
    with pytest.raises(ValueError):
        Term(TermKind.IRI, "http://a.org", datatype_iri="http://dt")
    with pytest.raises(ValueError):
        literal("x", datatype_iri="http://dt", language_tag="en")
    with pytest.raises(ValueError):
        Triple(literal("s"), iri("http://p"), literal("o"))
    with pytest.raises(ValueError):
        Triple(iri("http://s"), blank("p"), literal("o"))


def test_reader_empty_file(tmp_path):
    path = tmp_path / "empty.nt"
    path.write_text("")
    reader = NTriplesReader(path)
    assert list(reader) == []
    assert reader.summary.as_dict() == {
        "lines_read": 0, "triples_parsed": 0, "parse_errors": 0,
    }


def test_reader_mixed_valid_and_malformed(tmp_path):
    path = tmp_path / "mixed.nt"
    path.write_text(
        "<http://a/s1> <http://a/p> <http://a/o1> .\n"
        "garbage line\n"
        "<http://a/s2> <http://a/p> <http://a/o2> .\n"
        "# comment\n"
        "<http://a/s3> <http://a/p> <http://a/o3> .\n"
    )
    reader = NTriplesReader(path)
    triples = list(reader)
    assert len(triples) == 3
    assert reader.summary.triples_parsed == 3
    assert reader.summary.parse_errors == 1
    assert reader.summary.lines_read == 5
    assert reader.failures[0].line_number == 2


def test_reader_events_interleaves_failures():
    lines = [
        "<http://a/s1> <http://a/p> <http://a/o1> .",
        "broken",
        "<http://a/s2> <http://a/p> <http://a/o2> .",
    ]
    events = list(NTriplesReader(lines).events())
    assert isinstance(events[0], Triple)
    assert isinstance(events[1], ParseFailure)
    assert isinstance(events[2], Triple)


def test_reader_invalid_utf8(tmp_path):
    path = tmp_path / "bad.nt"
    path.write_bytes(b"<http://a/s> <http://a/p> <http://a/o> .\n\xff\xfe broken\n")
    reader = NTriplesReader(path)
    assert len(list(reader)) == 1
    assert reader.summary.parse_errors == 1
    assert reader.failures[0].reason == "invalid UTF-8"


def test_reader_accepts_binary_file_object():
    buf = io.BytesIO(b"<http://a/s> <http://a/p> <http://a/o> .\n")
    assert len(list(NTriplesReader(buf))) == 1


def test_reader_io_failure_carries_bytes_consumed():
    from lodprobe import DatasetReadError

    class FlakySource:
        def __init__(self):
            self.calls = 0

        def readline(self):
            self.calls += 1
            if self.calls <= 2:
                return b"<http://a/s> <http://a/p> <http://a/o> .\n"
            raise OSError("disk detached")

    reader = NTriplesReader(FlakySource())
    with pytest.raises(DatasetReadError) as exc_info:
        list(reader)
    assert exc_info.value.bytes_consumed == 2 * 41
    assert reader.summary.triples_parsed == 2


def test_reader_bounded_memory(tmp_path):
    import tracemalloc

    path = tmp_path / "big.nt"
    with open(path, "w") as fh:
        for i in range(200_000):
            fh.write(f'<http://ex.org/s{i % 977}> <http://ex.org/p> "payload {i}" .\n')

    reader = NTriplesReader(path)
    tracemalloc.start()
    count = sum(1 for _ in reader)
    peak = tracemalloc.get_traced_memory()[1]
    tracemalloc.stop()
    assert count == 200_000
    # Streaming state only: far below the ~14 MB file size.
    assert peak < 4 * 1024 * 1024


def test_serialize_term_forms():
    assert serialize_term(iri("http://a/x")) == "<http://a/x>"
    assert serialize_term(blank("b1")) == "_:b1"
    assert serialize_term(literal("v")) == '"v"'
    assert serialize_term(literal("v", language_tag="en")) == '"v"@en'
    assert serialize_term(literal("v", datatype_iri="http://dt")) == '"v"^^<http://dt>'
