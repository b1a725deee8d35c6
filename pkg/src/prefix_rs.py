"""
Prefix rank and prefix selection over a sequence W of equal-length strings.

The structure is the wavelet tree of W: each prefix node v_Y keeps the sequence
B_Y of symbols that follow Y, in the order of the W entries having Y as a
prefix. Long prefixes are resolved by a nested instance over the grouped
strings (blocks of h symbols), which skips whole levels at once.
"""
import math
from typing import Dict, Sequence, Tuple

import numpy as np

from errors import BadSymbol, InconsistentLengths, OutOfRange, RankOutOfRange, TooLong


class SymbolRankSelect:
    """Rank/select over a symbol sequence via per-symbol sorted position arrays."""

    def __init__(self, length: int, positions: Dict[int, np.ndarray], sigma: int):
        self.len = length
        self.sigma = sigma
        # symbol -> 1-based positions, ascending
        self.positions = positions

    @classmethod
    def build(cls, seq: Sequence[int], sigma: int) -> "SymbolRankSelect":
        # grouped alphabets can exceed 64 bits, so symbols stay Python ints
        lists: Dict[int, list] = {}
        for i, a in enumerate(seq):
            a = int(a)
            if not 0 <= a < sigma:
                raise BadSymbol(f"sequence symbol {a} outside [0..{sigma})")
            lists.setdefault(a, []).append(i + 1)
        positions = {a: np.asarray(p, dtype=np.int64) for a, p in lists.items()}
        return cls(len(seq), positions, sigma)

    def _check_symbol(self, a: int):
        if not 0 <= a < self.sigma:
            raise BadSymbol(f"symbol {a} outside [0..{self.sigma})")

    def rank(self, a: int, j: int) -> int:
        self._check_symbol(a)
        if not 0 <= j <= self.len:
            raise OutOfRange(f"rank argument {j} outside [0..{self.len}]")
        pos = self.positions.get(a)
        if pos is None:
            return 0
        return int(np.searchsorted(pos, j, side="right"))

    def select(self, a: int, r: int) -> int:
        self._check_symbol(a)
        pos = self.positions.get(a)
        if pos is None or not 1 <= r <= pos.size:
            raise RankOutOfRange(f"select({a}, {r}) out of range")
        return int(pos[r - 1])

    def count(self, a: int) -> int:
        pos = self.positions.get(a)
        return 0 if pos is None else int(pos.size)


def _as_matrix(w) -> np.ndarray:
    rows = [tuple(x) for x in w]
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise InconsistentLengths(f"strings of lengths {sorted(lengths)}")
    ell = lengths.pop() if lengths else 0
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), ell)


def recursion_h(ell: int, eps: float) -> int:
    return max(2, math.ceil(ell ** (eps / 2)))


class PrefixRankSelect:
    def __init__(self, matrix: np.ndarray, sigma: int, eps: float = 0.5):
        self.m, self.ell = matrix.shape
        if self.ell < 1:
            raise InconsistentLengths("strings must have length >= 1")
        if matrix.size and (matrix.min() < 0 or matrix.max() >= sigma):
            raise BadSymbol(f"string symbol outside [0..{sigma})")
        self.sigma = sigma
        self.eps = eps
        self.h = recursion_h(self.ell, eps)
        self.nodes: Dict[Tuple[int, int], SymbolRankSelect] = {}
        self._build_levels(matrix)

        # grouped instance over blocks of h symbols
        self.recursive = None
        groups = self.ell // self.h
        if groups >= 1 and self.ell > self.h:
            weights = sigma ** np.arange(self.h - 1, -1, -1, dtype=object)
            blocks = matrix[:, :groups * self.h].astype(object).reshape(self.m, groups, self.h)
            grouped = (blocks * weights).sum(axis=2)
            self.recursive = PrefixRankSelect(grouped, sigma ** self.h, eps)

    @classmethod
    def build(cls, w, sigma: int, eps: float = 0.5) -> "PrefixRankSelect":
        return cls(_as_matrix(w), sigma, eps)

    def _build_levels(self, matrix: np.ndarray):
        keys = np.zeros(self.m, dtype=object)
        for depth in range(self.ell):
            column = matrix[:, depth]
            # entries are visited in W order, so every B_Y keeps that order
            groups: Dict[int, list] = {}
            for i in range(self.m):
                groups.setdefault(keys[i], []).append(int(column[i]))
            for key, seq in groups.items():
                self.nodes[(depth, key)] = SymbolRankSelect.build(seq, self.sigma)
            keys = keys * self.sigma + column

    def depth(self) -> int:
        """Number of nested instances including this one."""
        return 1 + (self.recursive.depth() if self.recursive else 0)

    def _split(self, x: Sequence[int]):
        x = tuple(x)
        if len(x) > self.ell:
            raise TooLong(f"|X|={len(x)} exceeds string length {self.ell}")
        for c in x:
            if not 0 <= c < self.sigma:
                raise BadSymbol(f"symbol {c} outside [0..{self.sigma})")
        q = len(x) // self.h if self.recursive else 0
        q = min(q, self.recursive.ell if self.recursive else 0)
        grouped = []
        for t in range(q):
            v = 0
            for c in x[t * self.h:(t + 1) * self.h]:
                v = v * self.sigma + c
            grouped.append(v)
        return x, q * self.h, tuple(grouped)

    def _prefix_key(self, x: Sequence[int], length: int) -> int:
        v = 0
        for c in x[:length]:
            v = v * self.sigma + c
        return v

    def prefix_rank(self, x: Sequence[int], j: int) -> int:
        """Number of i <= j such that X is a prefix of W[i]."""
        if not 0 <= j <= self.m:
            raise OutOfRange(f"rank argument {j} outside [0..{self.m}]")
        x, skip, grouped = self._split(x)
        r = self.recursive.prefix_rank(grouped, j) if skip else j
        for d in range(skip, len(x)):
            node = self.nodes.get((d, self._prefix_key(x, d)))
            if node is None or r == 0:
                return 0
            r = node.rank(x[d], r)
        return r

    def prefix_select(self, x: Sequence[int], r: int) -> int:
        """The r-th smallest i such that X is a prefix of W[i]."""
        x, skip, grouped = self._split(x)
        total = self.prefix_rank(x, self.m)
        if not 1 <= r <= total:
            raise RankOutOfRange(f"prefix_select rank {r} outside [1..{total}]")
        q = r
        for d in range(len(x) - 1, skip - 1, -1):
            q = self.nodes[(d, self._prefix_key(x, d))].select(x[d], q)
        if skip:
            q = self.recursive.prefix_select(grouped, q)
        return q
