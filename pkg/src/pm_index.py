"""
Pattern matching: the SA interval of a pattern, its occurrence count and its
occurrences.

Short patterns are answered by the core tables alone. Longer nonperiodic
patterns are anchored at the first synchronizing position of their prefix;
periodic ones are counted run by run using the exponent blocks and the
run-length structure of the SA index.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from errors import BadSymbol, EmptyPattern, NotPeriodic
from sa_index import PeriodicSide, PlainSaIndex, SaIndex
from text_core import PackedText, encode_int, lcp, period, periodic_root, power_prefix
from trie import MetaTrie


@dataclass(frozen=True)
class PatternMeta:
    root: Tuple[int, ...]
    head: int
    exp: int
    tail: int
    end: int
    type: int
    full: bool

    @property
    def period(self) -> int:
        return len(self.root)

    @property
    def aligned(self) -> int:
        """Length of the H'H^k part."""
        return self.head + self.exp * len(self.root)


def pattern_meta(pattern: Sequence[int], tau: int) -> PatternMeta:
    """L-decomposition of a periodic pattern; full means no period break inside P."""
    kappa = 3 * tau - 1
    p_seq = tuple(pattern)
    if len(p_seq) < kappa:
        raise NotPeriodic("pattern shorter than 3tau-1")
    x = p_seq[:kappa]
    p = period(x)
    if 3 * p > tau:
        raise NotPeriodic(f"pattern prefix has period {p} > tau/3")
    s, root = periodic_root(x, p)
    e = 1 + p + lcp(p_seq, p_seq[p:])
    k, tail = divmod(e - 1 - s, p)
    full = e > len(p_seq)
    kind = -1
    if not full and p_seq[e - 1] > p_seq[e - 1 - p]:
        kind = 1
    return PatternMeta(root, s, k, tail, e, kind, full)


def pow_root(root: Sequence[int], tau: int) -> Tuple[int, ...]:
    p = len(root)
    return power_prefix(root, 0, p * math.ceil(tau / p))


class ZsetTrie:
    """
    Metastring trie over the suffixes starting |pow(H)| symbols before the
    full-period end of every run of one type, in ascending suffix order.
    """

    def __init__(self, text: PackedText, side: PeriodicSide):
        self.text = text
        self.side = side
        blocks = sorted(side.l_runs.values())
        a_z: List[int] = []
        for b, e in blocks:
            block = [m.end_full - len(pow_root(m.root, text.tau)) for m in side.runs_lex[b:e]]
            if side.sign > 0:
                block.reverse()
            a_z.extend(block)
        self.a_z = np.asarray(a_z, dtype=np.int64)
        self.meta = MetaTrie(text, self.a_z)

    def runs_range(self, root: Sequence[int], y: Sequence[int]) -> Tuple[int, int]:
        """
        Interval of r_lex holding the runs with this root whose text after the
        full-period end starts with y; the begin counts the runs ordered before.
        """
        block = self.side.root_range(root)
        if block is None:
            return 0, 0
        b, e = self.meta.prefix_range(pow_root(root, self.text.tau) + tuple(y))
        if self.side.sign > 0:
            b_h, e_h = block
            return b_h + e_h - e, b_h + e_h - b
        return b, e


class PatternIndex:
    """Validation and the queries shared by both index flavours."""

    text: PackedText

    def check_pattern(self, pattern: Sequence[int]) -> Tuple[int, ...]:
        p_seq = tuple(int(c) for c in pattern)
        if not p_seq:
            raise EmptyPattern("pattern must be non-empty")
        for c in p_seq:
            if not 0 <= c < self.text.sigma:
                raise BadSymbol(f"pattern symbol {c} outside [0..{self.text.sigma})")
        return p_seq

    def range(self, pattern: Sequence[int]) -> Tuple[int, int]:
        p_seq = self.check_pattern(pattern)
        if 0 in p_seq[:-1]:
            # only the sentinel suffix can contain 0, so nothing matches
            cut = p_seq.index(0) + 1
            end = self._range(p_seq[:cut])[1]
            return end, end
        return self._range(p_seq)

    def _range(self, p_seq: Tuple[int, ...]) -> Tuple[int, int]:
        raise NotImplementedError

    def count(self, pattern: Sequence[int]) -> int:
        b, e = self.range(pattern)
        return e - b

    def locate(self, pattern: Sequence[int]) -> List[int]:
        b, e = self.range(pattern)
        return sorted(self.sa.query_sa(i) for i in range(b + 1, e + 1))


class PmIndex(PatternIndex):
    def __init__(self, sa: SaIndex):
        self.sa = sa
        self.text = sa.text
        self.core = sa.core
        self.sync = sa.sync
        self.tau = sa.tau
        self.kappa = sa.text.kappa
        self.s_meta = MetaTrie(self.text, self.sync.lex_order)
        self.z_minus = ZsetTrie(self.text, sa.minus)
        self.z_plus = ZsetTrie(self.text, sa.plus)

    def _key(self, x) -> int:
        return encode_int(x, self.text.sigma, self.tau)

    def is_periodic_pattern(self, pattern: Sequence[int]) -> bool:
        if len(pattern) < self.kappa:
            return False
        return 3 * period(tuple(pattern[:self.kappa])) <= self.tau

    def _range(self, p_seq):
        core = self.core
        if len(p_seq) <= self.kappa:
            return core.range_of(p_seq)
        x = p_seq[:self.kappa]
        key = self._key(x)
        if key not in core.l_range:
            return core.range_of(x)
        if core.is_periodic_key(key):
            return self._range_periodic(p_seq, key)
        return self._range_nonperiodic(p_seq, key)

    def _range_nonperiodic(self, p_seq, key):
        dist = self.core.l_dist[key]
        d = p_seq[:dist + 2 * self.tau]
        b_d = self.core.l_range[self._key(d)][0]
        y1, y2 = self.s_meta.prefix_range(p_seq[dist:])
        rev = d[::-1]
        w = self.sync.w_seq
        return b_d + w.prefix_rank(rev, y1), b_d + w.prefix_rank(rev, y2)

    # --- periodic patterns ---

    def _parts(self, sign: int):
        return (self.sa.minus, self.z_minus) if sign < 0 else (self.sa.plus, self.z_plus)

    def _count_before(self, sign, key, b_x, e_x, meta: PatternMeta, rest) -> int:
        """Positions of this type in the X block on the far side of P (not prefixed by P)."""
        side, zset = self._parts(sign)
        total = side.exp_groups_upto(b_x, e_x, key, meta.exp - 1)
        if side.root_range(meta.root) is None:
            return total
        length = meta.aligned
        theta = max(0, self.kappa - length)
        b_y = zset.runs_range(meta.root, rest)[0]
        b_theta = zset.runs_range(meta.root, meta.root[:theta])[0]
        return total + side.rc(length, b_y) - side.rc(length, b_theta)

    def _occ_s(self, sign, meta: PatternMeta, rest) -> int:
        side, zset = self._parts(sign)
        if side.root_range(meta.root) is None:
            return 0
        b_q, e_q = zset.runs_range(meta.root, rest)
        return side.rc(meta.aligned, e_q) - side.rc(meta.aligned, b_q)

    def _range_periodic(self, p_seq, key):
        meta = pattern_meta(p_seq, self.tau)
        b_x, e_x = self.core.l_range[key]
        rest = p_seq[meta.aligned:]
        if meta.full:
            beg = b_x + self._count_before(-1, key, b_x, e_x, meta, rest)
            end = e_x - self._count_before(1, key, b_x, e_x, meta, rest)
        elif meta.type < 0:
            beg = b_x + self._count_before(-1, key, b_x, e_x, meta, rest)
            end = beg + self._occ_s(-1, meta, rest)
        else:
            end = e_x - self._count_before(1, key, b_x, e_x, meta, rest)
            beg = end - self._occ_s(1, meta, rest)
        return beg, end

    def occurrence_split(self, pattern: Sequence[int]) -> Dict[str, int]:
        """
        Occurrences of a periodic pattern split by run type: "a" counts those
        with a larger L-exponent than P, "s" those sharing it.
        """
        p_seq = self.check_pattern(pattern)
        if not self.is_periodic_pattern(p_seq):
            raise NotPeriodic("pattern is not periodic")
        split = {"a-": 0, "a+": 0, "s-": 0, "s+": 0}
        key = self._key(p_seq[:self.kappa])
        if key not in self.core.l_range or 0 in p_seq[:-1]:
            return split
        meta = pattern_meta(p_seq, self.tau)
        b_x, e_x = self.core.l_range[key]
        rest = p_seq[meta.aligned:]
        for sign, tag in ((-1, "-"), (1, "+")):
            if not meta.full and meta.type != sign:
                continue
            side, _ = self._parts(sign)
            if meta.full:
                split["a" + tag] = side.region_size(b_x, e_x, key) - \
                    side.exp_groups_upto(b_x, e_x, key, meta.exp)
            split["s" + tag] = self._occ_s(sign, meta, rest)
        return split


class PlainPmIndex(PatternIndex):
    """Binary search over an explicit suffix array."""

    def __init__(self, sa: PlainSaIndex):
        self.sa = sa
        self.text = sa.text

    def _first(self, p_seq, limit: int) -> int:
        """Number of SA entries i with compare_suffix(SA[i], P) < limit."""
        lo, hi = 0, self.text.n
        while lo < hi:
            mid = (lo + hi) // 2
            if self.text.compare_suffix(int(self.sa.sa[mid]), p_seq) < limit:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def _range(self, p_seq):
        return self._first(p_seq, 0), self._first(p_seq, 1)
