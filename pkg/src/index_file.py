"""
TextIndex: one object holding the packed text, the SA/ISA index, the pattern
matching index and (on first use) the compressed suffix tree.

Index files start with the magic SYNIDX01, a u32 version and a u32 section
count. Each section is a 4-byte tag, a u64 payload length, the CRC-64 of the
payload and the payload. Only primary arrays are stored; lookup tables are
rebuilt from the text on load.
"""
import os
import struct
import time
from bisect import bisect_left
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from crc import Calculator, Crc64

from bitvec import RankSelectBitvector
from config import IndexConfig
from cst import CompressedSuffixTree
from errors import CorruptIndex, EmptyPattern, VersionMismatch
from pm_index import PlainPmIndex, PmIndex
from sa_index import PeriodicSide, PlainSaIndex, SaCore, SaIndex
from sync_set import SyncSet
from text_core import PackedText, ingest

MAGIC = b"SYNIDX01"
VERSION = 1
HEADER = struct.Struct("<II")
SECTION = struct.Struct("<4sQQ")
# mu num/den, eps, explicit tau (-1 if none), naive_min_n, oracle_max_n,
# tau, sigma, n, fallback
CONF = struct.Struct("<QQdqQQQQQB")
KNOWN_TAGS = {b"CONF", b"TEXT", b"SYNC", b"CORE", b"PERM", b"PERP", b"NSAA", b"REVX"}
CRC64 = Calculator(Crc64.CRC64, optimized=True)


def checksum(payload: bytes) -> int:
    return int(CRC64.checksum(payload))


# --- varints (LEB128) ---

def put_varint(out: bytearray, value: int):
    value = int(value)
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def put_varints(out: bytearray, values: Sequence[int]):
    put_varint(out, len(values))
    for v in values:
        put_varint(out, v)


class Reader:
    """Cursor over a section payload; running off the end is corruption."""

    def __init__(self, payload: bytes, tag: str):
        self.payload = payload
        self.tag = tag
        self.pos = 0

    def take(self, k: int) -> bytes:
        if self.pos + k > len(self.payload):
            raise CorruptIndex(f"section {self.tag} is truncated")
        chunk = self.payload[self.pos:self.pos + k]
        self.pos += k
        return chunk

    def varint(self) -> int:
        value, shift = 0, 0
        while True:
            byte = self.take(1)[0]
            value |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                return value

    def varints(self) -> List[int]:
        return [self.varint() for _ in range(self.varint())]

    def blob(self) -> bytes:
        return self.take(self.varint())

    def done(self):
        if self.pos != len(self.payload):
            raise CorruptIndex(f"section {self.tag} has trailing bytes")


def _put_bitvector(out: bytearray, bv: RankSelectBitvector):
    data = bv.to_bytes()
    put_varint(out, len(data))
    out += data


def _get_bitvector(reader: Reader, n: int) -> RankSelectBitvector:
    data = reader.blob()
    if len(data) != 8 * ((n + 63) // 64):
        raise CorruptIndex(f"section {reader.tag} holds a bitvector of the wrong size")
    return RankSelectBitvector.from_bytes(data, n)


class TextIndex:
    def __init__(self, text: PackedText, config: IndexConfig, sa, pm,
                 reverse: Optional["TextIndex"] = None):
        self.text = text
        self.config = config
        self.fallback = text.fallback
        self.sa = sa
        self.pm = pm
        self._reverse = reverse
        self._cst: Optional[CompressedSuffixTree] = None
        self._lookup = {b: i + 1 for i, b in enumerate(text.alphabet)}

    @classmethod
    def from_text(cls, text: PackedText, config: IndexConfig) -> "TextIndex":
        if text.fallback:
            sa = PlainSaIndex.build(text)
            return cls(text, config, sa, PlainPmIndex(sa))
        sa = SaIndex.build(text, config.eps)
        return cls(text, config, sa, PmIndex(sa))

    @classmethod
    def build(cls, raw: bytes, config: Optional[IndexConfig] = None) -> "TextIndex":
        config = config or IndexConfig()
        text = ingest(raw, config)
        mode = "plain" if text.fallback else "succinct"
        print(f"Building {mode} index (n={text.n}, sigma={text.sigma}, tau={text.tau})")
        started = time.perf_counter()
        index = cls.from_text(text, config)
        print(f"  Built in {time.perf_counter() - started:.3f}s")
        return index

    def __repr__(self):
        return f"TextIndex({self.text!r})"

    # --- suffix tree ---

    @property
    def reverse(self) -> "TextIndex":
        if self._reverse is None:
            self._reverse = TextIndex.from_text(self.text.reversed_text(), self.config)
        return self._reverse

    @property
    def cst(self) -> CompressedSuffixTree:
        if self._cst is None:
            rev_tree = CompressedSuffixTree(self.reverse)
            self._cst = CompressedSuffixTree(self, rev_tree)
        return self._cst

    # --- queries ---

    def query_sa(self, i: int) -> int:
        return self.sa.query_sa(i)

    def query_isa(self, j: int) -> int:
        return self.sa.query_isa(j)

    def range(self, pattern: Sequence[int]) -> Tuple[int, int]:
        return self.pm.range(pattern)

    def count(self, pattern: Sequence[int]) -> int:
        return self.pm.count(pattern)

    def locate(self, pattern: Sequence[int]) -> List[int]:
        return self.pm.locate(pattern)

    def range_bytes(self, raw: bytes) -> Tuple[int, int]:
        """
        Interval of a raw byte pattern. A byte missing from the text gives the
        empty interval at the rank the pattern would be inserted.
        """
        if not raw:
            raise EmptyPattern("pattern must be non-empty")
        mapped = []
        for byte in raw:
            c = self._lookup.get(byte)
            if c is None:
                below = bisect_left(self.text.alphabet, byte)
                if below + 1 < self.text.sigma:
                    b = self.pm.range(tuple(mapped) + (below + 1,))[0]
                elif mapped:
                    b = self.pm.range(mapped)[1]
                else:
                    b = self.text.n
                return b, b
            mapped.append(c)
        return self.pm.range(mapped)

    def count_bytes(self, raw: bytes) -> int:
        b, e = self.range_bytes(raw)
        return e - b

    def locate_bytes(self, raw: bytes) -> List[int]:
        b, e = self.range_bytes(raw)
        return sorted(self.sa.query_sa(i) for i in range(b + 1, e + 1))

    def extract(self, j: int, length: int) -> bytes:
        """Raw bytes of T[j..j+length); the sentinel shows as '$'."""
        return self.text.to_bytes(self.text.substring(j, length))

    def stats(self) -> Dict[str, object]:
        return {
            "n": self.text.n,
            "sigma": self.text.sigma,
            "tau": self.text.tau,
            "fallback": self.fallback,
            "sync_size": 0 if self.fallback else self.sa.sync.size,
        }

    # --- serialization ---

    def _sections(self, with_reverse: bool) -> List[Tuple[bytes, bytes]]:
        text, config = self.text, self.config
        conf = CONF.pack(config.mu.numerator, config.mu.denominator, config.eps,
                         -1 if config.tau is None else config.tau,
                         config.naive_min_n, config.oracle_max_n,
                         text.tau, text.sigma, text.n, int(text.fallback)) + text.alphabet
        sections = [(b"CONF", conf), (b"TEXT", text.packed_bytes())]
        if self.fallback:
            sections.append((b"NSAA", self.sa.sa.astype("<u4").tobytes()))
        else:
            sync, core = self.sa.sync, self.sa.core
            out = bytearray()
            put_varints(out, np.diff(sync.positions, prepend=0).tolist())
            put_varints(out, sync.a_smap.tolist())
            sections.append((b"SYNC", bytes(out)))
            out = bytearray()
            _put_bitvector(out, core.b_short)
            put_varints(out, core.a_short)
            sections.append((b"CORE", bytes(out)))
            for tag, side in ((b"PERM", self.sa.minus), (b"PERP", self.sa.plus)):
                out = bytearray()
                _put_bitvector(out, side.b_exp)
                put_varints(out, side.r_lex.tolist())
                sections.append((tag, bytes(out)))
        if with_reverse:
            sections.append((b"REVX", self.reverse.to_bytes(with_reverse=False)))
        return sections

    def to_bytes(self, with_reverse: bool = True) -> bytes:
        sections = self._sections(with_reverse)
        out = bytearray(MAGIC)
        out += HEADER.pack(VERSION, len(sections))
        for tag, payload in sections:
            out += SECTION.pack(tag, len(payload), checksum(payload))
            out += payload
        return bytes(out)

    def save(self, path: str) -> int:
        data = self.to_bytes()
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, "wb") as f:
            f.write(data)
        print(f"Saved index to {path} ({len(data)} bytes)")
        return len(data)

    @classmethod
    def load(cls, path: str) -> "TextIndex":
        print(f"Loading index from {path}")
        with open(path, "rb") as f:
            return cls.from_bytes(f.read())

    @staticmethod
    def _split_sections(data: bytes) -> Dict[bytes, bytes]:
        if data[:len(MAGIC)] != MAGIC:
            raise CorruptIndex("missing SYNIDX01 magic")
        pos = len(MAGIC)
        if len(data) < pos + HEADER.size:
            raise CorruptIndex("truncated header")
        version, count = HEADER.unpack_from(data, pos)
        if version != VERSION:
            raise VersionMismatch(f"index version {version}, expected {VERSION}")
        pos += HEADER.size
        sections = {}
        for _ in range(count):
            if len(data) < pos + SECTION.size:
                raise CorruptIndex("truncated section header")
            tag, length, crc = SECTION.unpack_from(data, pos)
            pos += SECTION.size
            payload = data[pos:pos + length]
            pos += length
            if tag not in KNOWN_TAGS or tag in sections:
                raise CorruptIndex(f"unexpected section {tag!r}")
            if len(payload) != length or checksum(payload) != crc:
                raise CorruptIndex(f"checksum mismatch in section {tag.decode()}")
            sections[tag] = payload
        if pos != len(data):
            raise CorruptIndex("trailing bytes after the last section")
        return sections

    @classmethod
    def from_bytes(cls, data: bytes) -> "TextIndex":
        sections = cls._split_sections(data)
        for tag in (b"CONF", b"TEXT"):
            if tag not in sections:
                raise CorruptIndex(f"missing section {tag.decode()}")
        conf = sections[b"CONF"]
        if len(conf) < CONF.size:
            raise CorruptIndex("section CONF is truncated")
        (mu_num, mu_den, eps, cfg_tau, naive_min_n, oracle_max_n,
         tau, sigma, n, fallback) = CONF.unpack_from(conf)
        try:
            config = IndexConfig(mu=Fraction(mu_num, mu_den), eps=eps,
                                 tau=None if cfg_tau < 0 else cfg_tau,
                                 naive_min_n=naive_min_n, oracle_max_n=oracle_max_n)
        except (ValueError, ZeroDivisionError) as exc:
            raise CorruptIndex(f"section CONF holds an invalid config: {exc}") from exc
        alphabet = conf[CONF.size:]
        if len(alphabet) != sigma - 1:
            raise CorruptIndex("alphabet size disagrees with sigma")
        text = PackedText.from_packed(sections[b"TEXT"], n, sigma, tau, config.mu,
                                      bool(fallback), alphabet)
        if text.fallback:
            index = cls._load_plain(text, config, sections)
        else:
            index = cls._load_succinct(text, config, sections)
        if b"REVX" in sections:
            index._reverse = cls.from_bytes(sections[b"REVX"])
        return index

    @classmethod
    def _load_plain(cls, text, config, sections) -> "TextIndex":
        if b"NSAA" not in sections:
            raise CorruptIndex("missing section NSAA")
        payload = sections[b"NSAA"]
        if len(payload) != 4 * text.n:
            raise CorruptIndex("section NSAA has the wrong length")
        sa = PlainSaIndex(text, np.frombuffer(payload, dtype="<u4").astype(np.int64))
        return cls(text, config, sa, PlainPmIndex(sa))

    @classmethod
    def _load_succinct(cls, text, config, sections) -> "TextIndex":
        for tag in (b"SYNC", b"CORE", b"PERM", b"PERP"):
            if tag not in sections:
                raise CorruptIndex(f"missing section {tag.decode()}")
        reader = Reader(sections[b"SYNC"], "SYNC")
        positions = np.cumsum(np.asarray(reader.varints(), dtype=np.int64))
        a_smap = np.asarray(reader.varints(), dtype=np.int64)
        reader.done()
        if a_smap.size != positions.size:
            raise CorruptIndex("section SYNC lists mismatched arrays")
        sync = SyncSet.from_parts(text, positions, a_smap, config.eps)

        reader = Reader(sections[b"CORE"], "CORE")
        b_short = _get_bitvector(reader, text.n)
        a_short = reader.varints()
        reader.done()
        core = SaCore(text, sync, b_short, a_short)

        sides = []
        for tag, sign in ((b"PERM", -1), (b"PERP", 1)):
            reader = Reader(sections[tag], tag.decode())
            b_exp = _get_bitvector(reader, text.n)
            r_lex = np.asarray(reader.varints(), dtype=np.int64)
            reader.done()
            sides.append(PeriodicSide(text, core, sign, b_exp, r_lex))
        sa = SaIndex(text, sync, core, *sides)
        return cls(text, config, sa, PmIndex(sa))
