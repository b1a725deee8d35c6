"""
SA and ISA queries.

The index core maps every string of length <= 3tau-1 to its SA interval and
splits the SA into blocks of equal (3tau-1)-prefixes. Positions whose prefix
block is nonperiodic are resolved through the synchronizing set; periodic ones
through the run decomposition, one mirrored structure per run type.
"""
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from bitvec import RankSelectBitvector
from errors import NotPeriodic, OutOfRange, WrongType
from range_cs import BoundedSumRange
from sync_set import SyncSet, build_suffix_array, inverse_permutation, periodic_windows
from text_core import (PackedText, decode_int, encode_int, encode_int_prime,
                       period, periodic_root)


@dataclass(frozen=True)
class RunMeta:
    """L-decomposition of a periodic position."""
    start: int
    root: Tuple[int, ...]
    head: int
    exp: int
    tail: int
    end: int
    end_full: int
    type: int

    @property
    def period(self) -> int:
        return len(self.root)


class SaCore:
    def __init__(self, text: PackedText, sync: SyncSet, b_short: RankSelectBitvector,
                 a_short: List[int]):
        self.text = text
        self.sync = sync
        self.tau = text.tau
        self.kappa = text.kappa
        self.n = text.n
        self.b_short = b_short
        self.a_short = [int(v) for v in a_short]
        self.strings = [decode_int(v, text.sigma, text.tau) for v in self.a_short]
        self.l_range: Dict[int, Tuple[int, int]] = {}
        self.l_per: Dict[int, int] = {}
        self.l_root: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
        self.l_dist: Dict[int, int] = {}
        self._fill_tables()

    @classmethod
    def build(cls, text: PackedText, sync: SyncSet, sa: np.ndarray) -> "SaCore":
        n, kappa = text.n, text.kappa
        padded = np.full(n + kappa, -1, dtype=np.int16)
        padded[:n] = text.symbols
        rows = padded[(sa - 1)[:, None] + np.arange(kappa)[None, :]]
        bits = np.ones(n, dtype=bool)
        bits[:-1] = np.any(rows[1:] != rows[:-1], axis=1)
        b_short = RankSelectBitvector.build(bits)
        a_short = []
        for i in np.flatnonzero(bits) + 1:
            j = int(sa[i - 1])
            a_short.append(text.window_int(j, min(kappa, n - j + 1)))
        return cls(text, sync, b_short, a_short)

    def _fill_tables(self):
        sigma, tau, kappa = self.text.sigma, self.tau, self.kappa
        ends = self.b_short.positions()
        starts = np.concatenate([[0], ends[:-1]])
        for value, y, b, e in zip(self.a_short, self.strings, starts.tolist(), ends.tolist()):
            for m in range(len(y) + 1):
                key = encode_int(y[:m], sigma, tau)
                cur = self.l_range.get(key)
                self.l_range[key] = (b, e) if cur is None else (min(cur[0], b), max(cur[1], e))
            if len(y) != kappa:
                continue
            p = period(y)
            self.l_per[value] = p
            if 3 * p <= tau:
                s, root = periodic_root(y, p)
                self.l_root[value] = (s, root)
            else:
                self.l_dist[value] = next(
                    u for u in range(tau)
                    if encode_int(y[u:u + 2 * tau], sigma, tau) in self.sync.windows)

    # --- blocks ---

    def select_end(self, t: int) -> int:
        return 0 if t == 0 else self.b_short.select(1, t)

    def block_of(self, i: int) -> int:
        """0-based index into a_short of the block holding SA position i."""
        return self.b_short.rank(1, i - 1)

    def range_of(self, x) -> Tuple[int, int]:
        """(RangeBeg, RangeEnd) of a string of length <= 3tau-1."""
        sigma, tau = self.text.sigma, self.tau
        key = encode_int(x, sigma, tau)
        hit = self.l_range.get(key)
        if hit is not None:
            return hit
        lo = bisect_left(self.a_short, key)
        hi = bisect_left(self.a_short, encode_int_prime(x, sigma, tau))
        return self.select_end(lo), self.select_end(hi)

    # --- periodicity ---

    def is_periodic_key(self, key: int) -> bool:
        p = self.l_per.get(key)
        return p is not None and 3 * p <= self.tau

    def is_periodic_pos(self, j: int) -> bool:
        if not 1 <= j <= self.n:
            raise OutOfRange(f"position {j} outside [1..{self.n}]")
        if j > self.n - self.kappa + 1:
            return False
        return self.is_periodic_key(self.text.window_int(j, self.kappa))

    def is_periodic_rank(self, i: int) -> bool:
        if not 1 <= i <= self.n:
            raise OutOfRange(f"rank {i} outside [1..{self.n}]")
        return self.is_periodic_key(self.a_short[self.block_of(i)])

    def run_meta(self, j: int) -> RunMeta:
        if not self.is_periodic_pos(j):
            raise NotPeriodic(f"position {j} is not periodic")
        s, root = self.l_root[self.text.window_int(j, self.kappa)]
        p = len(root)
        e = j + p + self.text.lce(j, j + p)
        k, tail = divmod(e - j - s, p)
        kind = 1 if self.text.at(e) > self.text.at(e - p) else -1
        return RunMeta(j, root, s, k, tail, e, e - tail, kind)


def find_runs(text: PackedText, core: SaCore) -> List[RunMeta]:
    """L-decompositions of every run start (a periodic j with j-1 not periodic)."""
    mask = periodic_windows(text.symbols, text.tau, text.kappa)
    if not mask.size:
        return []
    starts = np.flatnonzero(mask & ~np.concatenate([[False], mask[:-1]])) + 1
    return [core.run_meta(int(r)) for r in starts]


def run_positions(run: RunMeta, kappa: int) -> range:
    """Periodic positions of a run: windows of length kappa that end before run.end."""
    return range(run.start, run.end - kappa + 1)


def exponent_counts(text: PackedText, core: SaCore, runs: List[RunMeta]) -> Dict[int, Counter]:
    """For every periodic block key, how many positions carry each L-exponent."""
    kappa = text.kappa
    counts: Dict[int, Counter] = {}
    for run in runs:
        p = run.period
        for j in run_positions(run, kappa):
            key = text.window_int(j, kappa)
            counts.setdefault(key, Counter())[(run.end_full - j) // p] += 1
    for key, cnt in counts.items():
        b_x, e_x = core.l_range[key]
        assert sum(cnt.values()) <= e_x - b_x, f"block {key} overflows its SA range"
    return counts


class PeriodicSide:
    """
    Structures for the runs of one type. For type +1 every SA-block coordinate
    is mirrored (position i becomes n+1-i) and runs sharing a root are listed
    by descending rank of their full-period end.
    """

    def __init__(self, text: PackedText, core: SaCore, sign: int,
                 b_exp: RankSelectBitvector, r_lex: np.ndarray,
                 l_minexp: Optional[Dict[int, int]] = None):
        self.text = text
        self.core = core
        self.sign = sign
        self.n = text.n
        self.b_exp = b_exp
        self.r_lex = np.asarray(r_lex, dtype=np.int64)
        self.runs_lex = [core.run_meta(int(r)) for r in self.r_lex]
        if l_minexp is None:
            l_minexp = {key: min(c) for key, c in exponent_counts(text, core, self.runs_lex).items()}
        self.l_minexp = l_minexp

        starts = np.sort(self.r_lex)
        self.b_rprime = RankSelectBitvector.from_positions(starts, self.n)
        # a_rmap[t-1] = x: the t-th run in text order is r_lex[x-1]
        self.a_rmap = np.argsort(self.r_lex, kind="stable").astype(np.int64) + 1
        self.a_rmap_inv = np.empty(self.a_rmap.size, dtype=np.int64)
        self.a_rmap_inv[self.a_rmap - 1] = np.arange(1, self.a_rmap.size + 1)

        lengths = [m.end_full - m.start for m in self.runs_lex]
        self.a_len = BoundedSumRange(lengths + [0]) if lengths else None

        self.l_runs: Dict[int, Tuple[int, int]] = {}
        sigma, tau = text.sigma, text.tau
        for x, m in enumerate(self.runs_lex):
            key = encode_int(m.root, sigma, tau)
            b, _ = self.l_runs.get(key, (x, x))
            self.l_runs[key] = (b, x + 1)

    @classmethod
    def build(cls, text: PackedText, core: SaCore, sign: int, runs: List[RunMeta],
              isa: np.ndarray) -> "PeriodicSide":
        n, sigma, tau = text.n, text.sigma, text.tau
        mine = [m for m in runs if m.type == sign]
        counts = exponent_counts(text, core, mine)
        ends = []
        l_minexp = {}
        for key, cnt in counts.items():
            b_x, e_x = core.l_range[key]
            base = b_x if sign < 0 else n - e_x
            k_min, k_max = min(cnt), max(cnt)
            total = 0
            for k in range(k_min, k_max + 1):
                total += cnt[k]
                ends.append(base + total)
            l_minexp[key] = k_min
        b_exp = RankSelectBitvector.from_positions(sorted(ends), n)
        order = sorted(mine, key=lambda m: (encode_int(m.root, sigma, tau),
                                            sign * -int(isa[m.end_full - 1])))
        r_lex = np.asarray([m.start for m in order], dtype=np.int64)
        return cls(text, core, sign, b_exp, r_lex, l_minexp)

    def __len__(self):
        return int(self.r_lex.size)

    def base(self, b_x: int, e_x: int) -> int:
        return b_x if self.sign < 0 else self.n - e_x

    def _groups(self, b_x: int, e_x: int) -> int:
        base = self.base(b_x, e_x)
        return self.b_exp.rank(1, base + e_x - b_x) - self.b_exp.rank(1, base)

    def region_size(self, b_x: int, e_x: int, key: int) -> int:
        """Number of positions of this type inside the block of key."""
        if key not in self.l_minexp:
            return 0
        base = self.base(b_x, e_x)
        return self.b_exp.select(1, self.b_exp.rank(1, base) + self._groups(b_x, e_x)) - base

    def exp_groups_upto(self, b_x: int, e_x: int, key: int, k: int) -> int:
        """Positions of this type inside the block of key with L-exponent <= k."""
        if key not in self.l_minexp or k < self.l_minexp[key]:
            return 0
        idx = k - self.l_minexp[key] + 1
        if idx >= self._groups(b_x, e_x):
            return self.region_size(b_x, e_x, key)
        base = self.base(b_x, e_x)
        return self.b_exp.select(1, self.b_exp.rank(1, base) + idx) - base

    def rc(self, v: int, x: int) -> int:
        return 0 if self.a_len is None else self.a_len.rcount(v, x)

    def lex_index_of(self, j: int) -> int:
        """Index into r_lex of the run containing position j."""
        return int(self.a_rmap[self.b_rprime.rank(1, j) - 1])

    def run_start(self, x: int) -> int:
        return self.b_rprime.select(1, int(self.a_rmap_inv[x - 1]))

    def root_range(self, root) -> Optional[Tuple[int, int]]:
        return self.l_runs.get(encode_int(root, self.text.sigma, self.text.tau))


class SaIndex:
    def __init__(self, text: PackedText, sync: SyncSet, core: SaCore,
                 minus: PeriodicSide, plus: PeriodicSide):
        self.text = text
        self.sync = sync
        self.core = core
        self.minus = minus
        self.plus = plus
        self.n = text.n
        self.tau = text.tau

    @classmethod
    def build(cls, text: PackedText, eps: float = 0.5) -> "SaIndex":
        sa = build_suffix_array(text)
        isa = inverse_permutation(sa)
        sync = SyncSet.construct(text, isa, eps)
        core = SaCore.build(text, sync, sa)
        runs = find_runs(text, core)
        minus = PeriodicSide.build(text, core, -1, runs, isa)
        plus = PeriodicSide.build(text, core, 1, runs, isa)
        return cls(text, sync, core, minus, plus)

    def side(self, sign: int) -> PeriodicSide:
        return self.minus if sign < 0 else self.plus

    def is_periodic_pos(self, j: int) -> bool:
        return self.core.is_periodic_pos(j)

    def is_periodic_rank(self, i: int) -> bool:
        return self.core.is_periodic_rank(i)

    def run_meta(self, j: int) -> RunMeta:
        return self.core.run_meta(j)

    # --- ISA ---

    def _deltas(self, j: int):
        meta = self.core.run_meta(j)
        key = self.text.window_int(j, self.text.kappa)
        b_x, e_x = self.core.l_range[key]
        side = self.side(meta.type)
        length = meta.end_full - j
        delta_a = side.exp_groups_upto(b_x, e_x, key, meta.exp)
        _, e_h = side.root_range(meta.root)
        delta_s = side.rc(length, e_h) - side.rc(length, side.lex_index_of(j))
        return meta, b_x, e_x, delta_a, delta_s

    def delta_a(self, j: int) -> int:
        meta, _, _, delta_a, _ = self._deltas(j)
        if meta.type != -1:
            raise WrongType(f"position {j} has type +1")
        return delta_a

    def delta_s(self, j: int) -> int:
        meta, _, _, _, delta_s = self._deltas(j)
        if meta.type != -1:
            raise WrongType(f"position {j} has type +1")
        return delta_s

    def query_isa(self, j: int) -> int:
        n, tau = self.n, self.tau
        if not 1 <= j <= n:
            raise OutOfRange(f"position {j} outside [1..{n}]")
        if j > n - 3 * tau + 2:
            return self.core.range_of(self.text.substring(j, n - j + 1))[0] + 1
        if self.core.is_periodic_pos(j):
            meta, b_x, e_x, delta_a, delta_s = self._deltas(j)
            delta = delta_a - delta_s
            return b_x + delta if meta.type < 0 else e_x + 1 - delta
        s = self.sync.succ(j)
        d = self.text.substring(j, s + 2 * tau - j)
        b_d = self.core.l_range[encode_int(d, self.text.sigma, tau)][0]
        return b_d + self.sync.w_seq.prefix_rank(d[::-1], self.sync.lex_index(s))

    # --- SA ---

    def _sa_periodic(self, i: int, key: int) -> int:
        core = self.core
        b_x, e_x = core.l_range[key]
        s, root = core.l_root[key]
        if i - b_x <= self.minus.region_size(b_x, e_x, key):
            side, off = self.minus, i - b_x
        else:
            side, off = self.plus, e_x + 1 - i
        base = side.base(b_x, e_x)
        q = base + off
        before = side.b_exp.rank(1, q - 1)
        k = side.l_minexp[key] + before - side.b_exp.rank(1, base)
        delta_a = side.b_exp.select(1, before + 1) - base
        delta_s = delta_a - off
        length = s + k * len(root)
        _, e_h = side.root_range(root)
        x = side.a_len.rselect(length, side.rc(length, e_h) - delta_s)
        return side.run_start(x) + int(side.a_len.values[x - 1]) - length

    def query_sa(self, i: int) -> int:
        n, tau = self.n, self.tau
        if not 1 <= i <= n:
            raise OutOfRange(f"rank {i} outside [1..{n}]")
        core = self.core
        t = core.block_of(i)
        key, y = core.a_short[t], core.strings[t]
        if len(y) < core.kappa:
            return n + 1 - len(y)
        if core.is_periodic_key(key):
            return self._sa_periodic(i, key)
        dist = core.l_dist[key]
        d = y[:dist + 2 * tau]
        b_d = core.l_range[encode_int(d, self.text.sigma, tau)][0]
        y_idx = self.sync.w_seq.prefix_select(d[::-1], i - b_d)
        return int(self.sync.lex_order[y_idx - 1]) - dist


class PlainSaIndex:
    """Explicit SA/ISA arrays, used for texts too small or too large-alphabet for tau >= 1."""

    def __init__(self, text: PackedText, sa: np.ndarray):
        self.text = text
        self.n = text.n
        self.sa = np.asarray(sa, dtype=np.int64)
        self.isa = inverse_permutation(self.sa)

    @classmethod
    def build(cls, text: PackedText) -> "PlainSaIndex":
        return cls(text, build_suffix_array(text))

    def query_sa(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise OutOfRange(f"rank {i} outside [1..{self.n}]")
        return int(self.sa[i - 1])

    def query_isa(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise OutOfRange(f"position {j} outside [1..{self.n}]")
        return int(self.isa[j - 1])
