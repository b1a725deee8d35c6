"""
Range counting and range selection over a nonnegative array with a bounded sum.

For h = max(1, floor(log2 m)) and every k, P_k lists the positions i with
A[i] >= k*h, and M'_k concatenates the bitvectors M_kh .. M_(k+1)h-1 where
M_v marks the entries of P_k whose value is at least v.
"""
import math
from typing import List, Sequence

import numpy as np

from bitvec import RankSelectBitvector
from errors import BadSymbol, RankOutOfRange, OutOfRange, TooShort


class BoundedSumRange:
    def __init__(self, values: Sequence[int]):
        a = np.asarray(values, dtype=np.int64)
        if a.size < 2:
            raise TooShort("range structure needs at least two values")
        if a.min() < 0:
            raise BadSymbol("values must be nonnegative")
        self.values = a
        self.m = int(a.size)
        self.h = max(1, int(math.floor(math.log2(self.m))))
        self.max_value = int(a.max())
        self.k_max = self.max_value // self.h
        self.p_arrays: List[np.ndarray] = []
        self.m_prime: List[RankSelectBitvector] = []
        for k in range(self.k_max + 1):
            self._build_level(k)

    def _build_level(self, k: int):
        h = self.h
        p_k = np.flatnonzero(self.values >= k * h) + 1
        m_k = p_k.size
        vals = self.values[p_k - 1]
        bits = np.empty(h * m_k, dtype=bool)
        # M_kh is all ones; each later M_v turns off the entries equal to v-1
        current = np.ones(m_k, dtype=bool)
        events = {}
        for t in np.flatnonzero(vals < (k + 1) * h):
            events.setdefault(int(vals[t]), []).append(int(t))
        for step in range(h):
            v = k * h + step
            if step:
                off = events.get(v - 1)
                if off:
                    current[off] = False
            bits[step * m_k:(step + 1) * m_k] = current
        self.p_arrays.append(p_k)
        self.m_prime.append(RankSelectBitvector.build(bits))

    def __len__(self):
        return self.m

    def total(self) -> int:
        return int(self.values.sum())

    def rcount(self, v: int, j: int) -> int:
        """Number of i <= j with A[i] >= v."""
        if not 0 <= j <= self.m:
            raise OutOfRange(f"prefix length {j} outside [0..{self.m}]")
        if v <= 0:
            return j
        if v > self.max_value:
            return 0
        k, step = divmod(v, self.h)
        p_k = self.p_arrays[k]
        m_k = p_k.size
        j_prime = int(np.searchsorted(p_k, j, side="right"))
        base = step * m_k
        bv = self.m_prime[k]
        return bv.rank(1, base + j_prime) - bv.rank(1, base)

    def rselect(self, v: int, r: int) -> int:
        """The r-th smallest i with A[i] >= v."""
        total = self.rcount(v, self.m)
        if not 1 <= r <= total:
            raise RankOutOfRange(f"rselect({v}, {r}) with only {total} matches")
        if v <= 0:
            return r
        k, step = divmod(v, self.h)
        p_k = self.p_arrays[k]
        base = step * p_k.size
        bv = self.m_prime[k]
        idx = bv.select(1, bv.rank(1, base) + r) - base
        return int(p_k[idx - 1])
