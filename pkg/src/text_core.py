"""
Packed text storage and the short-string encodings every other module reads.

Positions are 1-based at every public entry point; the symbol array itself is a
0-based numpy array of length n whose last entry is the sentinel 0.
"""
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from config import IndexConfig, choose_tau
from errors import AlphabetTooLarge, EmptyInput, OutOfRange, TooLong, BadSymbol

LCE_FIRST_CHUNK = 64


class PackedText:
    """Immutable text over [0..sigma) ending with the unique sentinel 0."""

    def __init__(self, symbols: np.ndarray, sigma: int, tau: int, mu: Fraction,
                 fallback: bool, alphabet: bytes):
        self.symbols = np.ascontiguousarray(symbols, dtype=np.uint8)
        self.symbols.setflags(write=False)
        self.n = int(self.symbols.size)
        self.sigma = sigma
        self.tau = tau
        self.mu = Fraction(mu)
        self.fallback = fallback
        # alphabet[c - 1] is the raw byte behind symbol c
        self.alphabet = bytes(alphabet)

    @property
    def kappa(self) -> int:
        return 3 * self.tau - 1

    @property
    def bits_per_symbol(self) -> int:
        return max(1, (self.sigma - 1).bit_length())

    def __len__(self):
        return self.n

    def __repr__(self):
        return (f"PackedText(n={self.n}, sigma={self.sigma}, tau={self.tau}, "
                f"fallback={self.fallback})")

    def _check(self, j: int):
        if not 1 <= j <= self.n:
            raise OutOfRange(f"position {j} outside [1..{self.n}]")

    def at(self, j: int) -> int:
        self._check(j)
        return int(self.symbols[j - 1])

    def substring(self, j: int, length: int) -> Tuple[int, ...]:
        """T[j..j+length), clipped at the end of the text."""
        self._check(j)
        return tuple(int(c) for c in self.symbols[j - 1:j - 1 + length])

    def substring_inf(self, j: int, length: int) -> Tuple[int, ...]:
        """Substring of the infinite power T^inf; j may be <= 0."""
        idx = (np.arange(j - 1, j - 1 + length) % self.n)
        return tuple(int(c) for c in self.symbols[idx])

    def suffix_len(self, j: int) -> int:
        return self.n - j + 1

    def lce(self, j1: int, j2: int) -> int:
        """Length of the longest common prefix of T[j1..n] and T[j2..n]."""
        self._check(j1)
        self._check(j2)
        if j1 == j2:
            return self.n - j1 + 1
        a, b = j1 - 1, j2 - 1
        limit = self.n - max(a, b)
        matched = 0
        step = LCE_FIRST_CHUNK
        while matched < limit:
            size = min(step, limit - matched)
            x = self.symbols[a + matched:a + matched + size]
            y = self.symbols[b + matched:b + matched + size]
            diff = np.flatnonzero(x != y)
            if diff.size:
                return matched + int(diff[0])
            matched += size
            step *= 2
        return matched

    def compare_suffix(self, j: int, pattern: Sequence[int]) -> int:
        """
        Compares T[j..n] against pattern: -1 if the suffix is smaller and not
        prefixed by the pattern, 0 if the pattern is a prefix, +1 otherwise.
        """
        self._check(j)
        m = len(pattern)
        chunk = self.symbols[j - 1:j - 1 + m]
        pat = np.asarray(pattern, dtype=np.int64)
        k = min(chunk.size, m)
        diff = np.flatnonzero(chunk[:k].astype(np.int64) != pat[:k])
        if diff.size:
            d = int(diff[0])
            return -1 if int(chunk[d]) < int(pat[d]) else 1
        if k == m:
            return 0
        return -1

    def window_int(self, j: int, length: int) -> int:
        """int(T[j..j+length)) for a window that fits in the text."""
        return encode_int(self.substring(j, length), self.sigma, self.tau)

    def map_pattern(self, raw: bytes) -> Optional[Tuple[int, ...]]:
        """Maps raw bytes to symbols; None if some byte is absent from the text."""
        lookup = {b: i + 1 for i, b in enumerate(self.alphabet)}
        out = []
        for b in raw:
            c = lookup.get(b)
            if c is None:
                return None
            out.append(c)
        return tuple(out)

    def to_bytes(self, symbols: Sequence[int]) -> bytes:
        """Maps symbols back to raw bytes; the sentinel renders as '$'."""
        return bytes(self.alphabet[c - 1] if c else ord("$") for c in symbols)

    def reversed_text(self) -> "PackedText":
        """T^rev with T^rev[i] = T[n-i] for i < n and the sentinel kept last."""
        rev = np.concatenate([self.symbols[:-1][::-1], self.symbols[-1:]])
        return PackedText(rev, self.sigma, self.tau, self.mu, self.fallback, self.alphabet)

    def packed_bytes(self) -> bytes:
        """Symbols packed at bits_per_symbol bits each."""
        bits = self.bits_per_symbol
        matrix = np.unpackbits(self.symbols[:, None], axis=1)[:, 8 - bits:]
        return np.packbits(matrix.reshape(-1)).tobytes()

    @classmethod
    def from_packed(cls, payload: bytes, n: int, sigma: int, tau: int, mu: Fraction,
                    fallback: bool, alphabet: bytes) -> "PackedText":
        bits = max(1, (sigma - 1).bit_length())
        flat = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))[:n * bits]
        matrix = np.zeros((n, 8), dtype=np.uint8)
        matrix[:, 8 - bits:] = flat.reshape(n, bits)
        symbols = np.packbits(matrix, axis=1).reshape(-1)
        return cls(symbols, sigma, tau, mu, fallback, alphabet)


def ingest(raw: bytes, config: IndexConfig = None) -> PackedText:
    """
    Remaps the distinct bytes of raw order-preservingly to [1..sigma) and appends
    the sentinel 0.
    """
    config = config or IndexConfig()
    if not raw:
        raise EmptyInput("text must contain at least one byte")
    data = np.frombuffer(bytes(raw), dtype=np.uint8)
    distinct = np.unique(data)
    if distinct.size > 255:
        raise AlphabetTooLarge("all 256 byte values occur; no room for the sentinel")
    lut = np.zeros(256, dtype=np.uint8)
    lut[distinct] = np.arange(1, distinct.size + 1, dtype=np.uint8)
    symbols = np.concatenate([lut[data], np.zeros(1, dtype=np.uint8)])
    n = int(symbols.size)
    sigma = int(distinct.size) + 1
    tau, fallback = choose_tau(n, sigma, config)
    return PackedText(symbols, sigma, tau, config.mu, fallback, distinct.tobytes())


def from_symbols(symbols: Sequence[int], sigma: int, tau: int, fallback: bool = False,
                 mu: Fraction = Fraction(1, 8)) -> PackedText:
    """Wraps an already remapped symbol sequence (must end with the sentinel)."""
    arr = np.asarray(symbols, dtype=np.uint8)
    alphabet = bytes(range(ord("a"), ord("a") + sigma - 1)) if sigma <= 27 else \
        bytes(range(1, sigma))
    return PackedText(arr, sigma, tau, mu, fallback, alphabet)


# --- packed short-string encodings ---

def encode_int(x: Sequence[int], sigma: int, tau: int) -> int:
    """int(X): base-sigma value of X . 0^(6tau-2|X|) . c^|X| with c = sigma-1."""
    m = len(x)
    if m > 3 * tau - 1:
        raise TooLong(f"|X|={m} exceeds 3*tau-1={3 * tau - 1}")
    value = 0
    for c in x:
        value = value * sigma + c
    value *= sigma ** (6 * tau - 2 * m)
    c = sigma - 1
    for _ in range(m):
        value = value * sigma + c
    return value


def encode_int_prime(x: Sequence[int], sigma: int, tau: int) -> int:
    """int'(X): base-sigma value of X . c^(6tau-2|X|) . 0^|X|."""
    m = len(x)
    if m > 3 * tau - 1:
        raise TooLong(f"|X|={m} exceeds 3*tau-1={3 * tau - 1}")
    value = 0
    for c in x:
        value = value * sigma + c
    fill = 6 * tau - 2 * m
    value = value * sigma ** fill + (sigma ** fill - 1)
    return value * sigma ** m


def decode_int(value: int, sigma: int, tau: int) -> Tuple[int, ...]:
    """Inverse of encode_int."""
    width = 6 * tau
    digits = []
    for _ in range(width):
        value, d = divmod(value, sigma)
        digits.append(d)
    digits.reverse()
    c = sigma - 1
    m = 0
    while m < width and digits[width - 1 - m] == c:
        m += 1
    # The zero gap separates X from its length marker, so a trailing c-run
    # longer than |X| cannot happen.
    m = min(m, 3 * tau - 1)
    return tuple(digits[:m])


def meta_symbol(s: Sequence[int], i: int, sigma: int, tau: int) -> int:
    """mstr(S)[i], 1-based block index."""
    kappa = 3 * tau - 1
    blocks = (len(s) + 1 + kappa - 1) // kappa
    if not 1 <= i <= blocks:
        raise OutOfRange(f"block {i} outside [1..{blocks}]")
    return encode_int(s[(i - 1) * kappa:min(len(s), i * kappa)], sigma, tau)


def meta_symbol_prime(s: Sequence[int], i: int, sigma: int, tau: int) -> int:
    """mstr'(S)[i]; differs from mstr only at the final block."""
    kappa = 3 * tau - 1
    blocks = (len(s) + 1 + kappa - 1) // kappa
    if i != blocks:
        return meta_symbol(s, i, sigma, tau)
    return encode_int_prime(s[(i - 1) * kappa:], sigma, tau)


def mstr(s: Sequence[int], sigma: int, tau: int) -> Tuple[int, ...]:
    kappa = 3 * tau - 1
    blocks = (len(s) + 1 + kappa - 1) // kappa
    return tuple(meta_symbol(s, i, sigma, tau) for i in range(1, blocks + 1))


def mstr_prime(s: Sequence[int], sigma: int, tau: int) -> Tuple[int, ...]:
    kappa = 3 * tau - 1
    blocks = (len(s) + 1 + kappa - 1) // kappa
    return tuple(meta_symbol_prime(s, i, sigma, tau) for i in range(1, blocks + 1))


def check_symbols(x: Sequence[int], sigma: int):
    for c in x:
        if not 0 <= c < sigma:
            raise BadSymbol(f"symbol {c} outside [0..{sigma})")


# --- periodicity helpers ---

def period(x: Sequence[int]) -> int:
    """Smallest p >= 1 with x[i] = x[i+p] for all valid i (|x| for aperiodic x)."""
    m = len(x)
    if m == 0:
        return 0
    fail = [0] * m
    k = 0
    for i in range(1, m):
        while k and x[i] != x[k]:
            k = fail[k - 1]
        if x[i] == x[k]:
            k += 1
        fail[i] = k
    return m - fail[-1]


def lcp(x: Sequence[int], y: Sequence[int]) -> int:
    k = min(len(x), len(y))
    a = np.asarray(x[:k], dtype=np.int64)
    b = np.asarray(y[:k], dtype=np.int64)
    diff = np.flatnonzero(a != b)
    return int(diff[0]) if diff.size else k


def periodic_root(x: Sequence[int], p: int) -> Tuple[int, Tuple[int, ...]]:
    """
    (s, H) where H is the lexicographically minimal rotation of x[:p] and x
    starts with a length-s suffix of H. Requires |x| >= 2p.
    """
    x = tuple(x)
    best = min(range(p), key=lambda t: x[t:t + p])
    return best, x[best:best + p]


def power_prefix(h: Sequence[int], s: int, length: int) -> Tuple[int, ...]:
    """Length-`length` prefix of (suffix of H of length s) . H^inf."""
    h = tuple(h)
    p = len(h)
    start = (p - s) % p
    return tuple(h[(start + t) % p] for t in range(length))
