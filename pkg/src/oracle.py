"""
Brute-force reference implementations. Nothing here reuses the index code:
suffixes are compared as byte strings and every answer follows its defining
equation directly.
"""
from typing import Dict, List, Optional, Sequence, Set, Tuple

from errors import TooLargeForOracle

ORACLE_MAX_N = 10_000


def _as_bytes(symbols: Sequence[int], limit: int = ORACLE_MAX_N) -> bytes:
    data = bytes(int(c) for c in symbols)
    if len(data) > limit:
        raise TooLargeForOracle(f"n={len(data)} exceeds oracle ceiling {limit}")
    return data


def naive_sa(symbols: Sequence[int], limit: int = ORACLE_MAX_N) -> List[int]:
    """1-based suffix array by full suffix comparison."""
    data = _as_bytes(symbols, limit)
    return [j + 1 for j in sorted(range(len(data)), key=lambda j: data[j:])]


def naive_isa(symbols: Sequence[int], limit: int = ORACLE_MAX_N) -> List[int]:
    sa = naive_sa(symbols, limit)
    isa = [0] * len(sa)
    for i, j in enumerate(sa, start=1):
        isa[j - 1] = i
    return isa


def naive_occ(symbols: Sequence[int], pattern: Sequence[int]) -> Set[int]:
    data = _as_bytes(symbols)
    pat = bytes(pattern)
    return {j + 1 for j in range(len(data)) if data.startswith(pat, j)}


def naive_range(symbols: Sequence[int], pattern: Sequence[int]) -> Tuple[int, int]:
    """(RangeBeg, RangeEnd): suffixes smaller than P, and that plus occurrences."""
    data = _as_bytes(symbols)
    pat = bytes(pattern)
    smaller = 0
    hits = 0
    m = len(pat)
    for j in range(len(data)):
        head = data[j:j + m]
        if head == pat:
            hits += 1
        elif head < pat:
            smaller += 1
    return smaller, smaller + hits


def naive_lce(symbols: Sequence[int], j1: int, j2: int) -> int:
    k = 0
    n = len(symbols)
    while j1 - 1 + k < n and j2 - 1 + k < n and symbols[j1 - 1 + k] == symbols[j2 - 1 + k]:
        k += 1
    return k


def naive_prefix_rank(w: Sequence[Sequence[int]], x: Sequence[int], j: int) -> int:
    x = tuple(x)
    return sum(1 for s in w[:j] if tuple(s[:len(x)]) == x)


def naive_prefix_select(w: Sequence[Sequence[int]], x: Sequence[int], r: int) -> int:
    x = tuple(x)
    seen = 0
    for i, s in enumerate(w, start=1):
        if tuple(s[:len(x)]) == x:
            seen += 1
            if seen == r:
                return i
    raise ValueError("rank beyond the number of matches")


def naive_rcount(a: Sequence[int], v: int, j: int) -> int:
    return sum(1 for x in a[:j] if x >= v)


def naive_rselect(a: Sequence[int], v: int, r: int) -> int:
    seen = 0
    for i, x in enumerate(a, start=1):
        if x >= v:
            seen += 1
            if seen == r:
                return i
    raise ValueError("rank beyond the number of matches")


def naive_period(x: Sequence[int]) -> int:
    m = len(x)
    for p in range(1, m + 1):
        if all(x[i] == x[i + p] for i in range(m - p)):
            return p
    return m


def naive_run_meta(symbols: Sequence[int], tau: int, j: int) -> Optional[Dict]:
    """L-decomposition of a periodic position j by definition; None if j is not periodic."""
    n = len(symbols)
    kappa = 3 * tau - 1
    if j > n - kappa + 1:
        return None
    window = tuple(symbols[j - 1:j - 1 + kappa])
    p = naive_period(window)
    if 3 * p > tau:
        return None
    e = j + kappa
    while e <= n and symbols[e - 1] == symbols[e - 1 - p]:
        e += 1
    rotations = [window[t:t + p] for t in range(p)]
    root = min(rotations)
    s = rotations.index(root)
    k = (e - j - s) // p
    tail = (e - j - s) % p
    kind = 1 if e <= n and symbols[e - 1] > symbols[e - 1 - p] else -1
    return {"root": root, "head": s, "exp": k, "tail": tail, "end": e,
            "end_full": e - tail, "type": kind}


class NaiveSuffixTree:
    """
    Explicit suffix tree. Nodes are keyed by their (lrank, rrank) pair so the
    answers are directly comparable with the compressed tree.
    """

    def __init__(self, symbols: Sequence[int], limit: int = 3000):
        self.symbols = [int(c) for c in symbols]
        self.data = _as_bytes(self.symbols, limit)
        self.n = len(self.symbols)
        self.sa = naive_sa(self.symbols, limit)
        self.isa = [0] * (self.n + 1)
        for i, j in enumerate(self.sa, start=1):
            self.isa[j] = i
        self.depth: Dict[Tuple[int, int], int] = {}
        self.parent_of: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}
        self.children_of: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        self._build()

    def _sym(self, i, offset):
        return self.data[self.sa[i - 1] - 1 + offset]

    def _build(self):
        root = (0, self.n)
        self.parent_of[root] = None
        stack = [(root, 0)]
        while stack:
            (b, e), _ = stack.pop()
            if e - b == 1:
                self.depth[(b, e)] = self.n - self.sa[e - 1] + 1
                self.children_of[(b, e)] = []
                continue
            ell = 0
            while self._sym(b + 1, ell) == self._sym(e, ell):
                ell += 1
            self.depth[(b, e)] = ell
            kids = []
            i = b + 1
            while i <= e:
                c = self._sym(i, ell)
                k = i
                while k + 1 <= e and self._sym(k + 1, ell) == c:
                    k += 1
                kids.append((i - 1, k))
                i = k + 1
            self.children_of[(b, e)] = kids
            for kid in kids:
                self.parent_of[kid] = (b, e)
                stack.append((kid, ell))

    # --- node basics ---

    def nodes(self) -> List[Tuple[int, int]]:
        return sorted(self.depth)

    def root(self):
        return (0, self.n)

    def string(self, v) -> Tuple[int, ...]:
        j = self.sa[v[1] - 1]
        return tuple(self.symbols[j - 1:j - 1 + self.depth[v]])

    def sdepth(self, v):
        return self.depth[v]

    def range_of(self, pattern) -> Tuple[int, int]:
        return naive_range(self.symbols, pattern)

    def ancestors(self, v):
        out = []
        while v is not None:
            out.append(v)
            v = self.parent_of[v]
        return out

    # --- node operations ---

    def parent(self, v):
        return self.parent_of[v]

    def isleaf(self, v):
        return not self.children_of[v]

    def count(self, v):
        return v[1] - v[0]

    def index(self, v):
        return self.sa[v[1] - 1]

    def findleaf(self, j):
        i = self.isa[j]
        return (i - 1, i)

    def letter(self, v, i):
        return self.string(v)[i - 1]

    def isancestor(self, u, v):
        return u in self.ancestors(v)

    def lca(self, u, v):
        up = set(self.ancestors(u))
        for w in self.ancestors(v):
            if w in up:
                return w
        return self.root()

    def wa(self, v, d):
        best = v
        for w in self.ancestors(v):
            if self.depth[w] >= d:
                best = w
        return best

    def child(self, v, c):
        for kid in self.children_of[v]:
            if self.string(kid)[self.depth[v]] == c:
                return kid
        return (0, 0)

    def pred_child(self, v, c):
        rank = self.range_of(self.string(v) + (c,))[0]
        best = (0, 0)
        for kid in self.children_of[v]:
            if self.string(kid)[self.depth[v]] < c:
                best = kid
        return rank, best

    def firstchild(self, v):
        kids = self.children_of[v]
        return kids[0] if kids else (0, 0)

    def lastchild(self, v):
        kids = self.children_of[v]
        return kids[-1] if kids else (0, 0)

    def rightsibling(self, v):
        kids = self.children_of[self.parent_of[v]]
        pos = kids.index(v)
        return kids[pos + 1] if pos + 1 < len(kids) else (0, 0)

    def leftsibling(self, v):
        kids = self.children_of[self.parent_of[v]]
        pos = kids.index(v)
        return kids[pos - 1] if pos > 0 else (0, 0)

    def slink_k(self, v, i):
        target = self.string(v)[i:]
        b, e = self.range_of(target)
        return (b, e)

    def slink(self, v):
        return self.slink_k(v, 1)

    def wlink_prime(self, v, c):
        b, e = self.range_of((c,) + self.string(v))
        return (b, e) if b < e else (0, 0)

    def wlink(self, v, c):
        u = self.wlink_prime(v, c)
        if u != (0, 0) and u in self.depth and self.depth[u] == self.depth[v] + 1:
            return u
        return (0, 0)
