import struct

import numpy as np
import pytest

from config import IndexConfig
from errors import CorruptIndex, EmptyPattern, VersionMismatch
from index_file import (HEADER, MAGIC, SECTION, VERSION, Reader, TextIndex, checksum, put_varint,
                        put_varints)
from text_core import ingest

SAMPLE = b"abaababababaababa"
PATTERNS = [b"a", b"b", b"aba", b"abab", b"baab", b"bb", b"aaa", b"abaababababaababa"]


def sample_index(config=None):
    config = config or IndexConfig(tau=1)
    return TextIndex.from_text(ingest(SAMPLE, config), config)


def same_answers(x, y):
    n = x.text.n
    assert [x.query_sa(i) for i in range(1, n + 1)] == [y.query_sa(i) for i in range(1, n + 1)]
    assert [x.query_isa(j) for j in range(1, n + 1)] == [y.query_isa(j) for j in range(1, n + 1)]
    for p in PATTERNS:
        assert x.range_bytes(p) == y.range_bytes(p)
        assert x.locate_bytes(p) == y.locate_bytes(p)


def test_varints():
    out = bytearray()
    put_varint(out, 0)
    put_varint(out, 127)
    put_varint(out, 128)
    put_varint(out, 300)
    assert bytes(out) == b"\x00\x7f\x80\x01\xac\x02"
    out = bytearray()
    put_varints(out, [5, 1 << 40, 0])
    reader = Reader(bytes(out), "TEST")
    assert reader.varints() == [5, 1 << 40, 0]
    reader.done()


def test_truncated_varint():
    out = bytearray()
    put_varints(out, [3, 1000])
    reader = Reader(bytes(out[:-1]), "TEST")
    with pytest.raises(CorruptIndex):
        reader.varints()


def test_byte_queries():
    index = sample_index()
    assert index.range_bytes(b"aba") == (4, 11)
    assert index.count_bytes(b"b") == 7
    assert index.locate_bytes(b"aba") == [1, 4, 6, 8, 10, 13, 15]
    assert index.extract(1, 3) == b"aba"
    assert index.extract(17, 2) == b"a$"
    with pytest.raises(EmptyPattern):
        index.range_bytes(b"")


def test_unmapped_bytes_give_insertion_rank():
    index = sample_index()
    assert index.range_bytes(b"abc") == (11, 11)
    assert index.range_bytes(b"z") == (18, 18)
    assert index.range_bytes(b"A") == (1, 1)
    assert index.range_bytes(b"aZ") == (2, 2)
    assert index.count_bytes(b"c") == 0
    assert index.locate_bytes(b"abc") == []


def test_round_trip_succinct(tmp_path):
    index = sample_index()
    path = tmp_path / "sample.synidx"
    written = index.save(str(path))
    assert written == path.stat().st_size
    loaded = TextIndex.load(str(path))
    assert not loaded.fallback
    same_answers(index, loaded)
    assert loaded.cst.wlink((11, 18), 1) == (4, 11)
    assert loaded.cst.child((1, 11), 2) == (4, 11)


def test_round_trip_plain():
    index = sample_index(IndexConfig())
    assert index.fallback
    loaded = TextIndex.from_bytes(index.to_bytes())
    assert loaded.fallback
    same_answers(index, loaded)


def test_round_trip_periodic_text():
    config = IndexConfig(tau=3)
    raw = b"a" * 30 + b"b" + b"a" * 20 + b"ab" * 10
    index = TextIndex.from_text(ingest(raw, config), config)
    loaded = TextIndex.from_bytes(index.to_bytes(with_reverse=False))
    same_answers(index, loaded)
    assert loaded.count_bytes(b"a" * 12) == index.count_bytes(b"a" * 12)


def test_serialization_is_deterministic():
    assert sample_index().to_bytes() == sample_index().to_bytes()


def test_config_survives_round_trip():
    config = IndexConfig(tau=2, eps=0.25)
    index = TextIndex.from_text(ingest(SAMPLE, config), config)
    loaded = TextIndex.from_bytes(index.to_bytes())
    assert loaded.config == config
    assert loaded.text.tau == 2
    assert loaded.text.alphabet == b"ab"


def test_corruption_is_detected():
    data = sample_index().to_bytes()
    flipped = data[:-1] + bytes([data[-1] ^ 0xFF])
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(flipped)
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(data[:-5])
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(data + b"\x00")
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(b"NOTANIDX" + data[8:])
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(data[:10])


def test_sections_carry_crc64():
    data = sample_index().to_bytes()
    pos = len(MAGIC) + HEADER.size
    tag, length, crc = SECTION.unpack_from(data, pos)
    payload = data[pos + SECTION.size:pos + SECTION.size + length]
    assert tag == b"CONF"
    assert SECTION.size == 20
    assert crc == checksum(payload)
    assert 0 <= crc < 2 ** 64
    for bit in range(8):
        assert checksum(bytes([payload[0] ^ (1 << bit)]) + payload[1:]) != crc
    # single-bit flip inside the first payload
    start = pos + SECTION.size
    broken = data[:start] + bytes([data[start] ^ 0x01]) + data[start + 1:]
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(broken)


def test_unknown_section_is_rejected():
    data = sample_index().to_bytes()
    _, count = HEADER.unpack_from(data, len(MAGIC))
    body = data[len(MAGIC) + HEADER.size:]
    extra = SECTION.pack(b"ZZZZ", 0, checksum(b""))
    with pytest.raises(CorruptIndex):
        TextIndex.from_bytes(MAGIC + HEADER.pack(VERSION, count + 1) + body + extra)


def test_version_mismatch():
    data = sample_index().to_bytes()
    bumped = data[:8] + struct.pack("<I", VERSION + 1) + data[12:]
    with pytest.raises(VersionMismatch):
        TextIndex.from_bytes(bumped)


def test_stats():
    stats = sample_index().stats()
    assert stats["n"] == 18
    assert stats["sigma"] == 3
    assert stats["tau"] == 1
    assert not stats["fallback"]
    assert stats["sync_size"] == 17


def test_random_text_round_trip():
    rng = np.random.default_rng(12)
    raw = rng.choice(np.frombuffer(b"acgt", dtype=np.uint8), size=400).tobytes()
    config = IndexConfig(tau=2)
    index = TextIndex.from_text(ingest(raw, config), config)
    loaded = TextIndex.from_bytes(index.to_bytes(with_reverse=False))
    same_answers(index, loaded)
