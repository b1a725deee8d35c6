"""
Compressed suffix tree. A node is its SA interval (b, e); nothing about the
tree is stored beyond the tries below. Every operation reduces to finding the
SA interval of some prefix of a suffix, which is done by one of:

* the truncated trie, for string depths below 3tau-1;
* the trie of the synchronizing suffixes, for deeper nonperiodic nodes;
* pattern matching, for deeper periodic nodes and for plain indexes.

Weiner links also consult an index of the reversed text.
"""
from typing import Optional, Tuple

from errors import BadSymbol, DepthOutOfRange, InvalidNode, IsRoot, OutOfRange
from text_core import encode_int
from trie import SuffixTrie, TruncatedTrie

Node = Tuple[int, int]
NONE: Node = (0, 0)


class CompressedSuffixTree:
    def __init__(self, text_index, reverse=None):
        self.text_index = text_index
        self.reverse = reverse
        self.text = text_index.text
        self.n = text_index.text.n
        self.sa = text_index.sa
        self.pm = text_index.pm
        self.succinct = not text_index.fallback
        if self.succinct:
            self.core = text_index.sa.core
            self.sync = text_index.sa.sync
            self.kappa = self.text.kappa
            self.tau = self.text.tau
            self.truncated = TruncatedTrie(self.text, self.core)
            self.s_trie = SuffixTrie(self.text, self.sync.lex_order)

    # --- handles ---

    def root(self) -> Node:
        return (0, self.n)

    def _check(self, v: Node) -> Node:
        b, e = v
        if not 0 <= b < e <= self.n:
            raise InvalidNode(f"({b}, {e}) is not a node handle")
        return b, e

    def _suffix(self, i: int) -> int:
        return self.sa.query_sa(i)

    # --- locus of a prefix ---

    def _locus(self, b: int, e: int, d: int) -> Node:
        """SA interval of the length-d prefix shared by the suffixes ranked (b..e]."""
        if d == 0:
            return self.root()
        j = self._suffix(e)
        if not self.succinct:
            return self.pm.range(self.text.substring(j, d))
        if d < self.kappa:
            u = self.truncated.map_range(b, e)
            return self.truncated.sa_range(self.truncated.l_wa[(u, d)])
        if not self.core.is_periodic_pos(j):
            return self._sync_locus(b, e, j, d)
        return self.pm.range(self.text.substring(j, d))

    def _sync_context(self, j: int):
        """(distance to the next synchronizing position, D, RangeBeg(D))."""
        dist = self.sync.succ(j) - j
        d = self.text.substring(j, dist + 2 * self.tau)
        b_d = self.core.l_range[encode_int(d, self.text.sigma, self.tau)][0]
        return dist, d, b_d

    def _to_strie(self, b: int, e: int, j: int):
        dist, d, b_d = self._sync_context(j)
        w = self.sync.w_seq
        rev = d[::-1]
        y1 = w.prefix_select(rev, b + 1 - b_d)
        y2 = w.prefix_select(rev, e - b_d)
        trie = self.s_trie
        return trie.lca(trie.leaf(y1), trie.leaf(y2)), dist, rev, b_d

    def _from_strie(self, node: int, rev, b_d: int) -> Node:
        trie = self.s_trie
        w = self.sync.w_seq
        return (b_d + w.prefix_rank(rev, trie.lrank[node]),
                b_d + w.prefix_rank(rev, trie.rrank[node]))

    def _sync_locus(self, b: int, e: int, j: int, d: int) -> Node:
        u, dist, rev, b_d = self._to_strie(b, e, j)
        return self._from_strie(self.s_trie.wa(u, d - dist), rev, b_d)

    # --- node operations ---

    def sdepth(self, v: Node) -> int:
        b, e = self._check(v)
        if e - b == 1:
            return self.n - self._suffix(e) + 1
        return self.text.lce(self._suffix(b + 1), self._suffix(e))

    def isleaf(self, v: Node) -> bool:
        b, e = self._check(v)
        return e - b == 1

    def count(self, v: Node) -> int:
        b, e = self._check(v)
        return e - b

    def index(self, v: Node) -> int:
        _, e = self._check(v)
        return self._suffix(e)

    def findleaf(self, j: int) -> Node:
        i = self.sa.query_isa(j)
        return (i - 1, i)

    def letter(self, v: Node, i: int) -> int:
        ell = self.sdepth(v)
        if not 1 <= i <= ell:
            raise OutOfRange(f"letter {i} outside [1..{ell}]")
        return self.text.at(self.index(v) + i - 1)

    def isancestor(self, u: Node, v: Node) -> bool:
        b1, e1 = self._check(u)
        b2, e2 = self._check(v)
        return b1 <= b2 and e2 <= e1

    def string(self, v: Node) -> Tuple[int, ...]:
        ell = self.sdepth(v)
        return self.text.substring(self.index(v), ell) if ell else ()

    def wa(self, v: Node, d: int) -> Node:
        ell = self.sdepth(v)
        if not 0 <= d <= ell:
            raise DepthOutOfRange(f"depth {d} outside [0..{ell}]")
        if d == ell:
            return v
        return self._locus(v[0], v[1], d)

    def lca(self, u: Node, v: Node) -> Node:
        b1, e1 = self._check(u)
        b2, e2 = self._check(v)
        b, e = min(b1, b2), max(e1, e2)
        if (b, e) == (b1, e1):
            return u
        if (b, e) == (b2, e2):
            return v
        ell = self.text.lce(self._suffix(b + 1), self._suffix(e))
        return self._locus(b, e, ell)

    def parent(self, v: Node) -> Node:
        b, e = self._check(v)
        if (b, e) == self.root():
            raise IsRoot("the root has no parent")
        candidates = []
        if b > 0:
            candidates.append(self.lca(v, (b - 1, b)))
        if e < self.n:
            candidates.append(self.lca(v, (e, e + 1)))
        return min(candidates, key=lambda w: w[1] - w[0])

    def child(self, v: Node, c: int) -> Node:
        b, e = self._check(v)
        if e - b == 1:
            return NONE
        ell = self.sdepth(v)
        if self.succinct and ell < self.kappa:
            u = self.truncated.map_range(b, e)
            w = self.truncated.l_child.get((u, c))
            return NONE if w is None else self.truncated.sa_range(w)
        j = self._suffix(e)
        if self.succinct and not self.core.is_periodic_pos(j):
            u, dist, rev, b_d = self._to_strie(b, e, j)
            w = self.s_trie.child(u, c)
            if w is None:
                return NONE
            node = self._from_strie(w, rev, b_d)
            return node if node[0] < node[1] else NONE
        node = self.pm.range(self.text.substring(j, ell) + (c,))
        return node if node[0] < node[1] else NONE

    def pred_child(self, v: Node, c: int) -> Tuple[int, Node]:
        """(RangeBeg(str(v)c), child of v with the largest branch symbol below c)."""
        b, e = self._check(v)
        ell = self.sdepth(v)
        rank = self.pm.range(self.string(v) + (c,))[0]
        if rank == b or e - b == 1:
            return rank, NONE
        return rank, self.wa((rank - 1, rank), ell + 1)

    def firstchild(self, v: Node) -> Node:
        b, e = self._check(v)
        if e - b == 1:
            return NONE
        return self.wa((b, b + 1), self.sdepth(v) + 1)

    def lastchild(self, v: Node) -> Node:
        b, e = self._check(v)
        if e - b == 1:
            return NONE
        return self.wa((e - 1, e), self.sdepth(v) + 1)

    def rightsibling(self, v: Node) -> Node:
        p = self.parent(v)
        if v[1] == p[1]:
            return NONE
        return self.wa((v[1], v[1] + 1), self.sdepth(p) + 1)

    def leftsibling(self, v: Node) -> Node:
        p = self.parent(v)
        if v[0] == p[0]:
            return NONE
        return self.wa((v[0] - 1, v[0]), self.sdepth(p) + 1)

    def slink_k(self, v: Node, i: int) -> Node:
        ell = self.sdepth(v)
        if not 1 <= i <= ell:
            raise DepthOutOfRange(f"slink step {i} outside [1..{ell}]")
        if i == ell:
            return self.root()
        return self.wa(self.findleaf(self.index(v) + i), ell - i)

    def slink(self, v: Node) -> Node:
        return self.slink_k(v, 1)

    def _extension_start(self, v: Node, c: int) -> Optional[int]:
        """A position j' with T[j'..] starting with c.str(v), or None."""
        ell = self.sdepth(v)
        j = self.index(v)
        if j + ell - 1 == self.n:
            # str(v) runs into the sentinel, so it occurs only at j
            return j - 1 if j > 1 and self.text.at(j - 1) == c else None
        rev_tree = self.reverse
        jr = self.n - (j + ell - 1)
        w = rev_tree.wa(rev_tree.findleaf(jr), ell)
        if rev_tree.sdepth(w) > ell:
            if rev_tree.letter(w, ell + 1) != c:
                return None
            jrc = rev_tree.index(w)
        else:
            u = rev_tree.child(w, c)
            if u == NONE:
                return None
            jrc = rev_tree.index(u)
        return self.n - (jrc + ell)

    def wlink_prime(self, v: Node, c: int) -> Node:
        """Interval of c.str(v), or (0, 0) if it does not occur."""
        self._check(v)
        if not 0 <= c < self.text.sigma:
            raise BadSymbol(f"symbol {c} outside [0..{self.text.sigma})")
        ell = self.sdepth(v)
        if c == 0:
            return (0, 1) if ell == 0 else NONE
        start = self._extension_start(v, c)
        if start is None:
            return NONE
        return self.wa(self.findleaf(start), ell + 1)

    def wlink(self, v: Node, c: int) -> Node:
        u = self.wlink_prime(v, c)
        if u != NONE and self.sdepth(u) == self.sdepth(v) + 1:
            return u
        return NONE
