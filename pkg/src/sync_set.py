"""
Synchronizing set S of a packed text and the sequences derived from it.

Every length-tau window gets an identifier; windows whose period is at most
tau/3 are excluded. Position i joins S when the smallest identifier among the
windows starting in [i..i+tau] sits at i or at i+tau. Membership of i then
depends only on T[i..i+2tau), and S hits every length-tau block whose
(3tau-1)-context is not highly periodic.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydivsufsort import divsufsort

from bitvec import RankSelectBitvector
from errors import OutOfRange, TauTooLarge
from prefix_rs import PrefixRankSelect
from text_core import PackedText, period

NO_ID = np.iinfo(np.int64).max


def build_suffix_array(text: PackedText) -> np.ndarray:
    """1-based suffix array of the whole text (build-time only)."""
    sa = divsufsort(np.array(text.symbols, dtype=np.uint8))
    return np.asarray(sa, dtype=np.int64) + 1


def inverse_permutation(sa: np.ndarray) -> np.ndarray:
    """isa[j-1] = i for sa[i-1] = j."""
    isa = np.empty(sa.size, dtype=np.int64)
    isa[sa - 1] = np.arange(1, sa.size + 1, dtype=np.int64)
    return isa


def periodic_windows(symbols: np.ndarray, tau: int, length: int) -> np.ndarray:
    """
    Boolean mask over window starts (0-based): True where the window of the
    given length has period at most tau/3.
    """
    sym = np.asarray(symbols)
    count = sym.size - length + 1
    mask = np.zeros(max(count, 0), dtype=bool)
    if count <= 0:
        return mask
    for p in range(1, tau // 3 + 1):
        span = length - p
        if span <= 0:
            mask[:] = True
            break
        match = (sym[:-p] == sym[p:]).astype(np.int64)
        sums = np.concatenate([[0], np.cumsum(match)])
        # all of match[k..k+span) hold
        mask |= (sums[span:span + count] - sums[:count]) == span
    return mask


def window_ids(symbols: np.ndarray, tau: int) -> np.ndarray:
    """Lexicographic rank of every length-tau window; equal windows share a rank."""
    windows = sliding_window_view(np.asarray(symbols, dtype=np.uint8), tau)
    _, ids = np.unique(windows, axis=0, return_inverse=True)
    return np.asarray(ids, dtype=np.int64).reshape(-1)


def select_positions(text: PackedText) -> np.ndarray:
    tau, n = text.tau, text.n
    if 2 * tau > n:
        raise TauTooLarge(f"tau={tau} exceeds n/2 for n={n}")
    ids = window_ids(text.symbols, tau)
    ids[periodic_windows(text.symbols, tau, tau)] = NO_ID
    lows = sliding_window_view(ids, tau + 1).min(axis=1)
    count = n - 2 * tau + 1
    lows = lows[:count]
    first = ids[:count]
    last = ids[tau:tau + count]
    chosen = (lows != NO_ID) & ((first == lows) | (last == lows))
    return np.flatnonzero(chosen).astype(np.int64) + 1


@dataclass
class SyncReport:
    consistent: bool = True
    dense: bool = True
    violation: Optional[str] = None
    size: int = 0
    density_ratio: float = 0.0

    @property
    def ok(self) -> bool:
        return self.consistent and self.dense


def verify_sync(text: PackedText, positions: Sequence[int]) -> SyncReport:
    """Exhaustive check of the consistency and density conditions."""
    tau, n = text.tau, text.n
    members = np.zeros(n + 2, dtype=bool)
    pos = np.asarray(positions, dtype=np.int64)
    if pos.size:
        members[pos] = True
    report = SyncReport(size=int(pos.size), density_ratio=pos.size * tau / n)

    seen = {}
    data = text.symbols.tobytes()
    for i in range(1, n - 2 * tau + 2):
        key = data[i - 1:i - 1 + 2 * tau]
        first = seen.setdefault(key, i)
        if members[first] != members[i]:
            report.consistent = False
            report.violation = f"consistency: windows at {first} and {i} disagree"
            return report

    hits = np.concatenate([[0], np.cumsum(members[1:n + 1])])
    for i in range(1, n - 3 * tau + 3):
        empty = hits[min(n, i + tau - 1)] - hits[i - 1] == 0
        periodic = 3 * period(text.symbols[i - 1:i - 1 + 3 * tau - 1].tolist()) <= tau
        if empty != periodic:
            report.dense = False
            report.violation = (f"density: block at {i} is "
                                f"{'empty' if empty else 'hit'} but window is "
                                f"{'periodic' if periodic else 'nonperiodic'}")
            return report
    return report


def sort_lex(positions: Sequence[int], isa: np.ndarray) -> np.ndarray:
    """Positions reordered by the rank of the suffix starting there."""
    pos = np.asarray(positions, dtype=np.int64)
    if pos.size < 2:
        return pos.copy()
    return pos[np.argsort(isa[pos - 1], kind="stable")]


def sync_strings(text: PackedText, lex_order: np.ndarray) -> List[tuple]:
    """W[i] = reverse(T^inf[s-tau .. s+2tau)) for every s in lex order."""
    tau, n = text.tau, text.n
    if not lex_order.size:
        return []
    offsets = np.arange(-tau, 2 * tau, dtype=np.int64)
    idx = (lex_order[:, None] - 1 + offsets[None, :]) % n
    rows = text.symbols[idx][:, ::-1]
    return [tuple(int(c) for c in row) for row in rows]


class SyncSet:
    """S in text order and lex order, with B_S, the permutations and W."""

    def __init__(self, text: PackedText, positions: np.ndarray, lex_order: np.ndarray,
                 eps: float = 0.5, w_seq: Optional[PrefixRankSelect] = None):
        self.text = text
        self.tau = text.tau
        self.n = text.n
        self.eps = eps
        self.positions = np.asarray(positions, dtype=np.int64)
        self.lex_order = np.asarray(lex_order, dtype=np.int64)
        self.size = int(self.positions.size)
        self.b_s = RankSelectBitvector.from_positions(self.positions, self.n)
        # a_smap[i-1] = j with s_text_j = s_lex_i (1-based values)
        self.a_smap = np.searchsorted(self.positions, self.lex_order) + 1
        self.a_smap_inv = np.empty(self.size, dtype=np.int64)
        self.a_smap_inv[self.a_smap - 1] = np.arange(1, self.size + 1)
        if w_seq is None and self.size:
            w_seq = PrefixRankSelect.build(sync_strings(text, self.lex_order), text.sigma, eps)
        self.w_seq = w_seq
        # 2tau-windows of the members; membership depends on nothing else
        self.windows = {text.window_int(int(s), 2 * self.tau) for s in self.positions}

    @classmethod
    def construct(cls, text: PackedText, isa: np.ndarray, eps: float = 0.5) -> "SyncSet":
        positions = select_positions(text)
        return cls(text, positions, sort_lex(positions, isa), eps)

    @classmethod
    def from_parts(cls, text: PackedText, positions: np.ndarray, a_smap: np.ndarray,
                   eps: float = 0.5) -> "SyncSet":
        """Rebuilds from the stored text-order positions and lex permutation."""
        positions = np.asarray(positions, dtype=np.int64)
        lex_order = positions[np.asarray(a_smap, dtype=np.int64) - 1] if positions.size \
            else positions
        return cls(text, positions, lex_order, eps)

    def __len__(self):
        return self.size

    def __contains__(self, j: int) -> bool:
        return 1 <= j <= self.n and bool(self.b_s.access(j))

    def succ(self, j: int) -> int:
        """min{s in S and n-2tau+2 : s >= j}."""
        limit = self.n - 2 * self.tau + 1
        if not 1 <= j <= limit:
            raise OutOfRange(f"position {j} outside [1..{limit}]")
        r = self.b_s.rank(1, j - 1)
        if r == self.size:
            return limit + 1
        return self.b_s.select(1, r + 1)

    def lex_index(self, s: int) -> int:
        """y with s_lex_y = s, for s in S."""
        return int(self.a_smap_inv[self.b_s.rank(1, s) - 1])

    def verify(self) -> SyncReport:
        return verify_sync(self.text, self.positions)
