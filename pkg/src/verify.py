"""
Oracle comparison harness. Builds an index for a text and checks every answer
against the brute-force implementations in oracle.py.
"""
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from config import IndexConfig
from errors import SynIdxError
from index_file import TextIndex
from oracle import NaiveSuffixTree, naive_isa, naive_occ, naive_range, naive_run_meta, naive_sa
from sync_set import SyncReport
from text_core import ingest

CHECKS = ("sa", "isa", "sync", "runs", "pm", "st")
REPRO_PREFIX = 64


@dataclass
class Mismatch:
    check: str
    query: str
    expected: object
    got: object

    def __str__(self):
        return f"{self.check} {self.query}: expected {self.expected!r}, got {self.got!r}"


@dataclass
class VerifyReport:
    name: str
    n: int
    sigma: int
    tau: int
    fallback: bool
    checks: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)
    sync: Optional[SyncReport] = None
    reproducer: Optional[bytes] = None

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def expect(self, check: str, query: str, expected, got):
        self.checks += 1
        if expected != got:
            self.mismatches.append(Mismatch(check, query, expected, got))

    def detail(self) -> str:
        if self.ok:
            return ""
        lines = [str(m) for m in self.mismatches[:5]]
        if len(self.mismatches) > 5:
            lines.append(f"... {len(self.mismatches) - 5} more")
        if self.reproducer is not None:
            lines.append(f"reproducer text: {self.reproducer[:REPRO_PREFIX]!r}")
        return "\n".join(lines)


# --- text families ---

def random_text(rng: np.random.Generator, n: int, sigma: int) -> bytes:
    """n-1 random letters over the first sigma-1 lowercase letters."""
    letters = np.frombuffer(b"abcdefghijklmnopqrstuvwxyz", dtype=np.uint8)[:max(1, sigma - 1)]
    return rng.choice(letters, size=max(1, n - 1)).tobytes()


def fibonacci_word(length: int) -> bytes:
    a, b = b"a", b"ab"
    while len(b) < length:
        a, b = b, b + a
    return b[:length]


def de_bruijn(k: int, order: int) -> bytes:
    """Lyndon-word construction over the first k letters."""
    a = [0] * (k * order)
    out: List[int] = []

    def step(t, p):
        if t > order:
            if order % p == 0:
                out.extend(a[1:p + 1])
        else:
            a[t] = a[t - p]
            step(t + 1, p)
            for c in range(a[t - p] + 1, k):
                a[t] = c
                step(t + 1, t)

    step(1, 1)
    return bytes(ord("a") + c for c in out)


def adversarial_texts(n: int) -> List[tuple]:
    """(name, raw) pairs of highly periodic or highly structured texts."""
    return [
        ("a^n", b"a" * (n - 1)),
        ("(ab)^k", (b"ab" * n)[:n - 1]),
        ("(aab)^k", (b"aab" * n)[:n - 1]),
        ("fibonacci", fibonacci_word(n - 1)),
        ("de-bruijn", (de_bruijn(2, max(2, (n - 1).bit_length() - 1)) * n)[:n - 1]),
    ]


# --- individual check groups ---

def _check_sa(index: TextIndex, sa: List[int], report: VerifyReport):
    for i in range(1, index.text.n + 1):
        report.expect("sa", f"SA[{i}]", sa[i - 1], index.query_sa(i))


def _check_isa(index: TextIndex, isa: List[int], report: VerifyReport):
    for j in range(1, index.text.n + 1):
        report.expect("isa", f"ISA[{j}]", isa[j - 1], index.query_isa(j))


def _check_sync(index: TextIndex, report: VerifyReport):
    if index.fallback:
        return
    report.sync = index.sa.sync.verify()
    report.expect("sync", "conditions", None, report.sync.violation)


def _check_runs(index: TextIndex, symbols: List[int], report: VerifyReport):
    """L-decompositions, block constancy inside a run, gaps between runs."""
    if index.fallback:
        return
    core, tau = index.sa.core, index.text.tau
    prev = None
    last_periodic = None
    for j in range(1, index.text.n + 1):
        naive = naive_run_meta(symbols, tau, j)
        if naive is None:
            prev = None
            continue
        meta = core.run_meta(j)
        got = {"root": meta.root, "head": meta.head, "exp": meta.exp, "tail": meta.tail,
               "end": meta.end, "end_full": meta.end_full, "type": meta.type}
        report.expect("runs", f"L-decomposition({j})", naive, got)
        if prev is not None:
            report.expect("runs", f"run end constant at {j}", prev.end, meta.end)
        elif last_periodic is not None:
            report.expect("runs", f"gap before {j}", True, j - last_periodic.start >= 2 * tau)
            report.expect("runs", f"end of run before {j}", True,
                          last_periodic.end <= j + tau - 1)
        prev = meta
        last_periodic = meta

    ends = [m.end_full for side in (index.sa.minus, index.sa.plus) for m in side.runs_lex]
    report.expect("runs", "distinct full-period ends", len(ends), len(set(ends)))


def _patterns(symbols: List[int], rng: np.random.Generator, exhaustive_n: int,
              samples: int, absent: int) -> Iterable[tuple]:
    n = len(symbols)
    seen = set()
    if n <= exhaustive_n:
        for j in range(n):
            for m in range(1, n - j + 1):
                seen.add(tuple(symbols[j:j + m]))
    else:
        for _ in range(samples):
            j = int(rng.integers(0, n))
            m = int(rng.integers(1, min(n - j, 64) + 1))
            seen.add(tuple(symbols[j:j + m]))
    sigma = max(symbols) + 1
    tries = 0
    found = 0
    while found < absent and tries < 50 * absent and sigma > 1:
        tries += 1
        m = int(rng.integers(2, 12))
        cand = tuple(int(c) for c in rng.integers(1, sigma, size=m))
        if cand not in seen and not naive_occ(symbols, cand):
            seen.add(cand)
            found += 1
    return sorted(seen)


def _check_pm(index: TextIndex, symbols: List[int], rng, report: VerifyReport,
              exhaustive_n: int, samples: int):
    for pattern in _patterns(symbols, rng, exhaustive_n, samples, absent=10):
        label = index.text.to_bytes(pattern).decode("latin-1")
        expected = naive_range(symbols, pattern)
        report.expect("pm", f"range({label})", expected, index.range(pattern))
        report.expect("pm", f"locate({label})", sorted(naive_occ(symbols, pattern)),
                      index.locate(pattern))
        if not index.fallback and index.pm.is_periodic_pattern(pattern) \
                and 0 not in pattern[:-1]:
            split = index.pm.occurrence_split(pattern)
            report.expect("pm", f"split({label})", expected[1] - expected[0],
                          sum(split.values()))


def _depths_to_check(ell: int, leaf: bool) -> List[int]:
    if not leaf:
        return list(range(ell + 1))
    return sorted({0, 1, ell // 2, max(0, ell - 1), ell} & set(range(ell + 1)))


def _check_st(index: TextIndex, symbols: List[int], rng, report: VerifyReport, limit: int):
    naive = NaiveSuffixTree(symbols, limit)
    tree = index.cst
    sigma = index.text.sigma
    nodes = naive.nodes()
    for j in range(1, index.text.n + 1):
        report.expect("st", f"findleaf({j})", naive.findleaf(j), tree.findleaf(j))
    for v in nodes:
        tag = f"{v[0]}:{v[1]}"
        ell = naive.sdepth(v)
        leaf = naive.isleaf(v)
        report.expect("st", f"sdepth {tag}", ell, tree.sdepth(v))
        report.expect("st", f"isleaf {tag}", leaf, tree.isleaf(v))
        report.expect("st", f"count {tag}", naive.count(v), tree.count(v))
        report.expect("st", f"index {tag}", naive.index(v), tree.index(v))
        report.expect("st", f"firstchild {tag}", naive.firstchild(v), tree.firstchild(v))
        report.expect("st", f"lastchild {tag}", naive.lastchild(v), tree.lastchild(v))
        if v != naive.root():
            report.expect("st", f"parent {tag}", naive.parent(v), tree.parent(v))
            report.expect("st", f"rightsibling {tag}", naive.rightsibling(v),
                          tree.rightsibling(v))
            report.expect("st", f"leftsibling {tag}", naive.leftsibling(v),
                          tree.leftsibling(v))
        for i in range(1, min(ell, 4) + 1):
            report.expect("st", f"letter {tag} {i}", naive.letter(v, i), tree.letter(v, i))
            report.expect("st", f"slink_k {tag} {i}", naive.slink_k(v, i), tree.slink_k(v, i))
        for d in _depths_to_check(ell, leaf):
            report.expect("st", f"wa {tag} {d}", naive.wa(v, d), tree.wa(v, d))
        for c in range(sigma):
            report.expect("st", f"child {tag} {c}", naive.child(v, c), tree.child(v, c))
            report.expect("st", f"pred {tag} {c}", naive.pred_child(v, c),
                          tree.pred_child(v, c))
            report.expect("st", f"wlink' {tag} {c}", naive.wlink_prime(v, c),
                          tree.wlink_prime(v, c))
            report.expect("st", f"wlink {tag} {c}", naive.wlink(v, c), tree.wlink(v, c))
    picks = rng.integers(0, len(nodes), size=(min(200, len(nodes) ** 2), 2))
    for a, b in picks.tolist():
        u, v = nodes[a], nodes[b]
        query = f"{u[0]}:{u[1]} {v[0]}:{v[1]}"
        report.expect("st", f"lca {query}", naive.lca(u, v), tree.lca(u, v))
        report.expect("st", f"isancestor {query}", naive.isancestor(u, v),
                      tree.isancestor(u, v))


# --- drivers ---

def verify_text(raw: bytes, config: Optional[IndexConfig] = None, name: str = "text",
                checks: Sequence[str] = CHECKS, seed: int = 0, exhaustive_n: int = 120,
                samples: int = 1000, tree_limit: int = 400) -> VerifyReport:
    config = config or IndexConfig()
    text = ingest(raw, config)
    index = TextIndex.from_text(text, config)
    report = VerifyReport(name, text.n, text.sigma, text.tau, text.fallback)
    symbols = text.symbols.tolist()
    rng = np.random.default_rng(seed)
    sa = naive_sa(symbols, config.oracle_max_n)
    isa = naive_isa(symbols, config.oracle_max_n)
    if "sa" in checks:
        _check_sa(index, sa, report)
    if "isa" in checks:
        _check_isa(index, isa, report)
    if "sync" in checks:
        _check_sync(index, report)
    if "runs" in checks:
        _check_runs(index, symbols, report)
    if "pm" in checks:
        _check_pm(index, symbols, rng, report, exhaustive_n, samples)
    if "st" in checks and text.n <= tree_limit:
        _check_st(index, symbols, rng, report, tree_limit)
    return report


def shrink(raw: bytes, still_fails: Callable[[bytes], bool]) -> bytes:
    """Shortest prefix of doubling length on which the failure reproduces."""
    length = 1
    while length < len(raw):
        cand = raw[:length]
        try:
            failed = still_fails(cand)
        except SynIdxError:
            failed = False
        if failed:
            return cand
        length *= 2
    return raw


def verify_with_reproducer(raw: bytes, config: Optional[IndexConfig] = None,
                           **kwargs) -> VerifyReport:
    report = verify_text(raw, config, **kwargs)
    if report.ok:
        return report
    failing = sorted({m.check for m in report.mismatches})
    local = dict(kwargs, checks=failing)
    report.reproducer = shrink(raw, lambda cand: not verify_text(cand, config, **local).ok)
    return report


def suite_configs(n: int) -> List[IndexConfig]:
    """Default parameters plus explicit small taus that force the succinct path."""
    configs = [IndexConfig()]
    for tau in (1, 3, 6):
        if 2 * tau <= n:
            configs.append(IndexConfig(tau=tau))
    return configs


def run_suite(seeds: Iterable[int], max_n: int = 300, sigmas: Sequence[int] = (2, 3, 4, 16),
              adversarial: bool = True, **kwargs) -> List[VerifyReport]:
    reports = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        sigma = int(sigmas[seed % len(sigmas)])
        n = int(rng.integers(2, max_n + 1))
        raw = random_text(rng, n, sigma)
        for config in suite_configs(len(raw) + 1):
            reports.append(verify_with_reproducer(
                raw, config, name=f"random seed={seed} sigma={sigma}", seed=seed, **kwargs))
    if adversarial:
        for name, raw in adversarial_texts(max_n):
            for config in suite_configs(len(raw) + 1):
                reports.append(verify_with_reproducer(raw, config, name=name, **kwargs))
    return reports
