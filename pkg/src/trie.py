"""
Compact tries over sorted string sets.

Edge labels are never stored; a trie only knows how to read symbol d of leaf i,
the length of leaf i, and the lcp of two adjacent leaves. The same machinery
serves suffix sets of the text, metastring images of suffix sets and the
decoded short prefixes of the index core.
"""
from bisect import bisect_left
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from errors import NotSorted, OutOfRange
from text_core import PackedText, decode_int, encode_int, encode_int_prime, lcp

ROOT = 0


class CompactTrie:
    """
    Trie over q leaves, given in lexicographic order. Leaf i (1-based) has
    lrank i-1 and rrank i. Nodes are integer ids; the root is 0.
    """

    def __init__(self, q: int, symbol_at: Callable[[int, int], int],
                 length_of: Callable[[int], int], lcp_of: Callable[[int, int], int]):
        self.q = q
        self.symbol_at = symbol_at
        self.length_of = length_of
        self.parent: List[int] = []
        self.depth: List[int] = []
        self.lrank: List[int] = []
        self.rrank: List[int] = []
        self.children: List[List[int]] = []
        self.leaf_node = [0] * (q + 1)
        self._construct(lcp_of)
        self.child_syms: List[List[int]] = [
            [symbol_at(self.lrank[u] + 1, self.depth[v]) for u in kids]
            for v, kids in enumerate(self.children)
        ]
        self._build_lca()
        self._build_heavy_paths()

    def _new_node(self, depth: int, lrank: int) -> int:
        self.parent.append(-1)
        self.depth.append(depth)
        self.lrank.append(lrank)
        self.rrank.append(lrank)
        self.children.append([])
        return len(self.depth) - 1

    def _link(self, parent: int, child: int):
        self.parent[child] = parent
        self.children[parent].append(child)

    def _construct(self, lcp_of):
        root = self._new_node(0, 0)
        stack = [root]
        for i in range(1, self.q + 1):
            ell = 0
            if i > 1:
                ell = lcp_of(i - 1, i)
                prev_len, cur_len = self.length_of(i - 1), self.length_of(i)
                if ell >= min(prev_len, cur_len) or \
                        self.symbol_at(i - 1, ell) >= self.symbol_at(i, ell):
                    raise NotSorted(f"leaves {i - 1} and {i} are not in strict order")
            while self.depth[stack[-1]] > ell:
                last = stack.pop()
                self.rrank[last] = i - 1
                if self.depth[stack[-1]] >= ell:
                    self._link(stack[-1], last)
                else:
                    mid = self._new_node(ell, self.lrank[last])
                    self._link(mid, last)
                    stack.append(mid)
            leaf = self._new_node(self.length_of(i), i - 1)
            self.rrank[leaf] = i
            self.leaf_node[i] = leaf
            # linked to its parent when popped
            stack.append(leaf)
        while len(stack) > 1:
            last = stack.pop()
            self.rrank[last] = self.q
            self._link(stack[-1], last)
        self.rrank[root] = self.q

    def _build_lca(self):
        # Euler tour over string depths, sparse table of argmins
        tour, first = [], [0] * len(self.depth)
        stack = [(ROOT, 0)]
        while stack:
            v, k = stack.pop()
            if k == 0:
                first[v] = len(tour)
            tour.append(v)
            if k < len(self.children[v]):
                stack.append((v, k + 1))
                stack.append((self.children[v][k], 0))
        self._tour = np.asarray(tour, dtype=np.int64)
        self._first = np.asarray(first, dtype=np.int64)
        depths = np.asarray(self.depth, dtype=np.int64)[self._tour]
        m = self._tour.size
        table = [np.arange(m, dtype=np.int64)]
        span = 2
        while span <= m:
            prev = table[-1]
            half = span // 2
            left = prev[:m - span + 1]
            right = prev[half:half + m - span + 1]
            table.append(np.where(depths[left] <= depths[right], left, right))
            span *= 2
        self._sparse = table
        self._tour_depths = depths

    def _build_heavy_paths(self):
        size = [self.rrank[v] - self.lrank[v] for v in range(len(self.depth))]
        self.head = [0] * len(self.depth)
        self.path_of = [0] * len(self.depth)
        self.pos_in_path = [0] * len(self.depth)
        self.paths: List[List[int]] = []
        self.path_depths: List[List[int]] = []
        stack = [ROOT]
        while stack:
            top = stack.pop()
            path = []
            v = top
            while True:
                self.head[v] = top
                self.path_of[v] = len(self.paths)
                self.pos_in_path[v] = len(path)
                path.append(v)
                kids = self.children[v]
                if not kids:
                    break
                heavy = max(kids, key=lambda u: size[u])
                stack.extend(u for u in kids if u != heavy)
                v = heavy
            self.paths.append(path)
            self.path_depths.append([self.depth[u] for u in path])

    # --- queries ---

    def num_nodes(self) -> int:
        return len(self.depth)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def leaf(self, i: int) -> int:
        if not 1 <= i <= self.q:
            raise OutOfRange(f"leaf {i} outside [1..{self.q}]")
        return self.leaf_node[i]

    def lca(self, u: int, v: int) -> int:
        lo, hi = sorted((int(self._first[u]), int(self._first[v])))
        k = (hi - lo + 1).bit_length() - 1
        a = int(self._sparse[k][lo])
        b = int(self._sparse[k][hi - (1 << k) + 1])
        best = a if self._tour_depths[a] <= self._tour_depths[b] else b
        return int(self._tour[best])

    def wa(self, v: int, d: int) -> int:
        """Shallowest ancestor of v (inclusive) with depth >= d."""
        x = v
        while True:
            h = self.head[x]
            if self.depth[h] >= d:
                p = self.parent[h]
                if p < 0 or self.depth[p] < d:
                    return h
                x = p
                continue
            depths = self.path_depths[self.path_of[x]]
            k = bisect_left(depths, d, 0, self.pos_in_path[x] + 1)
            return self.paths[self.path_of[x]][k]

    def child(self, v: int, c: int) -> Optional[int]:
        syms = self.child_syms[v]
        k = bisect_left(syms, c)
        if k < len(syms) and syms[k] == c:
            return self.children[v][k]
        return None

    def pred(self, v: int, c: int) -> Optional[int]:
        """Child with the largest first symbol below c."""
        k = bisect_left(self.child_syms[v], c)
        return self.children[v][k - 1] if k else None

    def prefix_range(self, q: Sequence[int]) -> Tuple[int, int]:
        """
        (b, e): b leaves are smaller than q and not prefixed by it, the next
        e - b leaves have q as a prefix.
        """
        m = len(q)
        v, d = ROOT, 0
        while True:
            if d == m:
                return self.lrank[v], self.rrank[v]
            if not self.children[v]:
                # leaf string is a proper prefix of q
                return self.rrank[v], self.rrank[v]
            c = q[d]
            syms = self.child_syms[v]
            k = bisect_left(syms, c)
            if k == len(syms) or syms[k] != c:
                r = self.rrank[self.children[v][k - 1]] if k else self.lrank[v]
                return r, r
            u = self.children[v][k]
            leaf = self.lrank[u] + 1
            stop = min(self.depth[u], m)
            t = d + 1
            while t < stop:
                a = self.symbol_at(leaf, t)
                if a != q[t]:
                    r = self.lrank[u] if q[t] < a else self.rrank[u]
                    return r, r
                t += 1
            if stop == m:
                return self.lrank[u], self.rrank[u]
            v, d = u, stop

    def rank(self, q: Sequence[int]) -> int:
        return self.prefix_range(q)[0]


class SuffixTrie(CompactTrie):
    """Compact trie of the suffixes T[A[i]..n] for a sorted position array A."""

    def __init__(self, text: PackedText, positions: Sequence[int]):
        self.text = text
        self.positions = np.asarray(positions, dtype=np.int64)
        sym = text.symbols
        pos = self.positions

        def symbol_at(i, d):
            return int(sym[pos[i - 1] - 1 + d])

        def length_of(i):
            return text.n - int(pos[i - 1]) + 1

        def lcp_of(a, b):
            return text.lce(int(pos[a - 1]), int(pos[b - 1]))

        super().__init__(int(pos.size), symbol_at, length_of, lcp_of)


class MetaTrie:
    """
    Trie over the metastring images of T[A[i]..n], blocks of 3tau-1 symbols
    encoded with int(). ceil(sqrt n) dummy single-symbol leaves sort after
    every real leaf and never show up in query results.
    """

    def __init__(self, text: PackedText, positions: Sequence[int]):
        self.text = text
        self.kappa = text.kappa
        self.positions = np.asarray(positions, dtype=np.int64)
        self.q_real = int(self.positions.size)
        self.dummies = int(np.ceil(np.sqrt(text.n)))
        self.dummy_base = text.sigma ** (6 * text.tau)
        q_total = self.q_real + self.dummies
        kappa, n, pos = self.kappa, text.n, self.positions

        def symbol_at(i, d):
            if i > self.q_real:
                return self.dummy_base + (i - self.q_real)
            start = int(pos[i - 1]) + d * kappa
            if start > n:
                return 0
            return text.window_int(start, min(kappa, n - start + 1))

        def length_of(i):
            if i > self.q_real:
                return 1
            return (n - int(pos[i - 1]) + 1) // kappa + 1

        def lcp_of(a, b):
            if b > self.q_real:
                return 0
            return text.lce(int(pos[a - 1]), int(pos[b - 1])) // kappa

        self.trie = CompactTrie(q_total, symbol_at, length_of, lcp_of)

    def _meta(self, pattern: Sequence[int], closing) -> List[int]:
        kappa, sigma, tau = self.kappa, self.text.sigma, self.text.tau
        full = len(pattern) // kappa
        out = [encode_int(pattern[t * kappa:(t + 1) * kappa], sigma, tau) for t in range(full)]
        out.append(closing(pattern[full * kappa:], sigma, tau))
        return out

    def prefix_range(self, pattern: Sequence[int]) -> Tuple[int, int]:
        """(b_pre, e_pre) over the real leaves for pattern P."""
        lo = self.trie.rank(self._meta(pattern, encode_int))
        hi = self.trie.rank(self._meta(pattern, encode_int_prime))
        return min(lo, self.q_real), min(hi, self.q_real)


class TruncatedTrie(CompactTrie):
    """
    Trie of the distinct (3tau-1)-prefixes of the suffixes, leaves in SA
    order. Node ranges are mapped back to SA ranges through the block
    boundaries of the index core.
    """

    def __init__(self, text: PackedText, core):
        self.text = text
        self.core = core
        strings = [decode_int(v, text.sigma, text.tau) for v in core.a_short]
        self.strings = strings

        def symbol_at(i, d):
            return strings[i - 1][d]

        def length_of(i):
            return len(strings[i - 1])

        def lcp_of(a, b):
            return lcp(strings[a - 1], strings[b - 1])

        super().__init__(len(strings), symbol_at, length_of, lcp_of)
        self.node_of = {encode_int(self.label(v), text.sigma, text.tau): v
                        for v in range(self.num_nodes())}
        self.l_child = {(v, c): u for v in range(self.num_nodes())
                        for c, u in zip(self.child_syms[v], self.children[v])}
        self.l_wa = {}
        for v in range(self.num_nodes()):
            u = v
            for d in range(self.depth[v], -1, -1):
                while u != ROOT and self.depth[self.parent[u]] >= d:
                    u = self.parent[u]
                self.l_wa[(v, d)] = u

    def label(self, v: int) -> Tuple[int, ...]:
        return self.strings[self.lrank[v]][:self.depth[v]]

    def _select(self, t: int) -> int:
        return 0 if t == 0 else self.core.b_short.select(1, t)

    def sa_range(self, v: int) -> Tuple[int, int]:
        return self._select(self.lrank[v]), self._select(self.rrank[v])

    def block_leaf(self, i: int) -> int:
        """Trie leaf of the block holding SA position i."""
        return self.leaf_node[self.core.b_short.rank(1, i - 1) + 1]

    def map_range(self, b: int, e: int) -> int:
        """Trie node for the SA interval (b..e]."""
        return self.lca(self.block_leaf(b + 1), self.block_leaf(e))
