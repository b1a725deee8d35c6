"""
Static bitvector with rank and select.

Bits live in little-endian 64-bit words. The rank directory keeps an absolute
count per 512-bit superblock plus a relative count per word; select binary
searches the superblocks and then walks at most eight words.
"""
from typing import Iterable

import numpy as np

from errors import OutOfRange, RankOutOfRange

WORD = 64
WORDS_PER_SUPER = 8
SUPER = WORD * WORDS_PER_SUPER
MASK64 = (1 << 64) - 1


def _popcounts(words: np.ndarray) -> np.ndarray:
    as_bytes = words.view(np.uint8).reshape(-1, 8)
    return np.unpackbits(as_bytes, axis=1).sum(axis=1).astype(np.int64)


def _nth_set_bit(word: int, r: int) -> int:
    """0-based offset of the r-th (1-based) set bit of word."""
    for _ in range(r - 1):
        word &= word - 1
    return (word & -word).bit_length() - 1


class RankSelectBitvector:
    def __init__(self, words: np.ndarray, length: int):
        self.words = np.ascontiguousarray(words, dtype="<u8")
        self.len = int(length)
        counts = _popcounts(self.words) if self.words.size else np.zeros(0, np.int64)
        cumulative = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        n_super = (self.words.size + WORDS_PER_SUPER - 1) // WORDS_PER_SUPER
        # ones before each superblock, with a closing entry
        self.super_ranks = cumulative[::WORDS_PER_SUPER][:n_super + 1]
        if self.super_ranks.size < n_super + 1:
            self.super_ranks = np.append(self.super_ranks, cumulative[-1])
        word_super = np.arange(self.words.size) // WORDS_PER_SUPER
        self.word_ranks = (cumulative[:-1] - self.super_ranks[word_super]).astype(np.uint16)
        self.ones = int(cumulative[-1])

    @classmethod
    def build(cls, bits: Iterable) -> "RankSelectBitvector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=bool)
        length = arr.size
        padded = np.zeros(((length + WORD - 1) // WORD) * WORD, dtype=bool)
        padded[:length] = arr
        packed = np.packbits(padded, bitorder="little")
        return cls(packed.view("<u8") if packed.size else np.zeros(0, "<u8"), length)

    @classmethod
    def from_positions(cls, positions, length: int) -> "RankSelectBitvector":
        """Bitvector of the given length with the 1-based positions set."""
        bits = np.zeros(length, dtype=bool)
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size:
            bits[pos - 1] = True
        return cls.build(bits)

    def __len__(self):
        return self.len

    def access(self, j: int) -> int:
        """Bit at 1-based position j."""
        if not 1 <= j <= self.len:
            raise OutOfRange(f"bit {j} outside [1..{self.len}]")
        i = j - 1
        return (int(self.words[i // WORD]) >> (i % WORD)) & 1

    def rank(self, b: int, j: int) -> int:
        """Number of positions i <= j with S[i] = b."""
        if not 0 <= j <= self.len:
            raise OutOfRange(f"rank argument {j} outside [0..{self.len}]")
        w, off = divmod(j, WORD)
        if w >= self.words.size:
            ones = self.ones
        else:
            ones = int(self.super_ranks[w // WORDS_PER_SUPER]) + int(self.word_ranks[w])
            if off:
                ones += (int(self.words[w]) & ((1 << off) - 1)).bit_count()
        return ones if b else j - ones

    def select(self, b: int, r: int) -> int:
        """Position of the r-th position holding b."""
        total = self.rank(b, self.len)
        if not 1 <= r <= total:
            raise RankOutOfRange(f"select({b}, {r}) with only {total} matches")
        if b:
            before = self.super_ranks
        else:
            before = np.arange(self.super_ranks.size, dtype=np.int64) * SUPER - self.super_ranks
        sb = int(np.searchsorted(before, r, side="left")) - 1
        r -= int(before[sb])
        w = sb * WORDS_PER_SUPER
        last = min(w + WORDS_PER_SUPER, self.words.size)
        while w < last:
            word = int(self.words[w])
            if not b:
                word = ~word & MASK64
            c = word.bit_count()
            if r <= c:
                return w * WORD + _nth_set_bit(word, r) + 1
            r -= c
            w += 1
        raise RankOutOfRange("select directory is inconsistent")

    def positions(self) -> np.ndarray:
        """1-based positions of all set bits."""
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")[:self.len]
        return np.flatnonzero(bits) + 1

    def to_bytes(self) -> bytes:
        return self.words.tobytes()

    @classmethod
    def from_bytes(cls, payload: bytes, length: int) -> "RankSelectBitvector":
        return cls(np.frombuffer(payload, dtype="<u8").copy(), length)
