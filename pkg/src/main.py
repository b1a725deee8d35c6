import argparse
import os
import sys
import time
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pandas as pd

from config import DEFAULT_MU, INDEX_DIR, IndexConfig
from database import get_or_create_text, init_db, record_bench_run, record_verify_run
from errors import CorruptIndex, InvalidNode, SynIdxError, VersionMismatch
from index_file import TextIndex
from verify import run_suite, verify_with_reproducer

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_MISMATCH = 3

# verb -> argument kinds
ST_OPS = {
    "root": (),
    "sdepth": ("node",),
    "string": ("node",),
    "isleaf": ("node",),
    "count": ("node",),
    "index": ("node",),
    "findleaf": ("int",),
    "letter": ("node", "int"),
    "isancestor": ("node", "node"),
    "lca": ("node", "node"),
    "wa": ("node", "int"),
    "parent": ("node",),
    "child": ("node", "sym"),
    "pred": ("node", "sym"),
    "firstchild": ("node",),
    "lastchild": ("node",),
    "rightsibling": ("node",),
    "leftsibling": ("node",),
    "slink": ("node",),
    "slink_k": ("node", "int"),
    "wlink": ("node", "sym"),
    "wlink_prime": ("node", "sym"),
}
BENCH_VERBS = ("sa", "isa", "count", "locate")


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def read_text(path):
    with open(path, "rb") as f:
        return f.read()


def make_config(args):
    mu = Fraction(args.mu) if getattr(args, "mu", None) else DEFAULT_MU
    return IndexConfig(mu=mu, eps=getattr(args, "eps", 0.5), tau=getattr(args, "tau", None))


def default_index_path(path):
    name = os.path.splitext(os.path.basename(path))[0]
    return os.path.join(INDEX_DIR, f"{name}.synidx")


def pattern_arg(value):
    return os.fsencode(value)


# --- build and queries ---

def cmd_build(args):
    raw = read_text(args.path)
    print(f"Building index for {args.path}")
    index = TextIndex.build(raw, make_config(args))
    out = args.out or default_index_path(args.path)
    index.save(out)
    return EXIT_OK


def cmd_sa(args):
    index = TextIndex.load(args.index)
    print(index.query_sa(args.i))
    return EXIT_OK


def cmd_isa(args):
    index = TextIndex.load(args.index)
    print(index.query_isa(args.j))
    return EXIT_OK


def cmd_range(args):
    index = TextIndex.load(args.index)
    b, e = index.range_bytes(args.pattern)
    print(f"{b} {e}")
    return EXIT_OK


def cmd_count(args):
    index = TextIndex.load(args.index)
    print(index.count_bytes(args.pattern))
    if args.split:
        mapped = index.text.map_pattern(args.pattern)
        if mapped is not None and not index.fallback and index.pm.is_periodic_pattern(mapped):
            split = index.pm.occurrence_split(mapped)
            print(" ".join(f"{k}={v}" for k, v in split.items()))
    return EXIT_OK


def cmd_locate(args):
    index = TextIndex.load(args.index)
    print(" ".join(str(j) for j in index.locate_bytes(args.pattern)))
    return EXIT_OK


# --- suffix tree ---

def parse_node(value):
    try:
        b, e = value.split(":")
        return int(b), int(e)
    except ValueError:
        raise InvalidNode(f"node handle must look like b:e, got {value!r}")


def parse_symbol(index, value):
    """Symbol for a one-byte argument; '$' is the sentinel, None if absent from the text."""
    if value == "$":
        return 0
    raw = os.fsencode(value)
    if len(raw) != 1:
        raise InvalidNode(f"expected a single symbol, got {value!r}")
    mapped = index.text.map_pattern(raw)
    return None if mapped is None else mapped[0]


def format_node(v):
    return f"{v[0]}:{v[1]}"


def run_st(index, op, values):
    kinds = ST_OPS[op]
    if len(values) != len(kinds):
        raise InvalidNode(f"st {op} takes {len(kinds)} argument(s), got {len(values)}")
    tree = index.cst
    args = []
    for kind, value in zip(kinds, values):
        if kind == "node":
            args.append(parse_node(value))
        elif kind == "int":
            args.append(int(value))
        else:
            args.append(parse_symbol(index, value))

    if op == "root":
        return format_node(tree.root())
    if kinds[-1:] == ("sym",) and args[-1] is None:
        v = args[0]
        tree.sdepth(v)
        if op != "pred":
            return format_node((0, 0))
        # the next symbol up has the same predecessor child and insertion rank
        byte = os.fsencode(values[-1])[0]
        c = bisect_left(index.text.alphabet, byte) + 1
        if c == index.text.sigma:
            return f"{v[1]} {format_node(tree.lastchild(v))}"
        args[-1] = c
    if op == "pred":
        rank, node = tree.pred_child(*args)
        return f"{rank} {format_node(node)}"
    if op == "string":
        return index.text.to_bytes(tree.string(*args)).decode("latin-1")
    result = getattr(tree, op)(*args)
    if op == "letter":
        return index.text.to_bytes((result,)).decode("latin-1")
    if isinstance(result, bool):
        return "1" if result else "0"
    if isinstance(result, tuple):
        return format_node(result)
    return str(result)


def cmd_st(args):
    index = TextIndex.load(args.index)
    print(run_st(index, args.op, args.args))
    return EXIT_OK


# --- verification ---

def cmd_verify(args):
    if args.path:
        raw = read_text(args.path)
        config = IndexConfig(tau=args.tau, oracle_max_n=max(args.max_n, len(raw) + 1))
        reports = [verify_with_reproducer(raw, config, name=os.path.basename(args.path))]
    else:
        reports = run_suite(range(args.seeds), max_n=args.max_n)

    if args.record:
        init_db()
    failed = 0
    for report in reports:
        status = "ok" if report.ok else "FAILED"
        print(f"{report.name} n={report.n} tau={report.tau} "
              f"{'plain' if report.fallback else 'succinct'}: "
              f"{report.checks} checks, {len(report.mismatches)} mismatches [{status}]")
        if not report.ok:
            failed += 1
            print(report.detail())
        if args.record:
            text_id = get_or_create_text(report.name, report.n, report.sigma)
            record_verify_run(text_id, report)
    print(f"Verification complete: {len(reports) - failed}/{len(reports)} passed.")
    return EXIT_MISMATCH if failed else EXIT_OK


# --- benchmark ---

def _workload(index, queries, rng):
    n, kappa = index.text.n, index.text.kappa
    work = []
    for t in range(queries):
        verb = BENCH_VERBS[t % len(BENCH_VERBS)]
        if verb in ("sa", "isa"):
            work.append((verb, int(rng.integers(1, n + 1))))
        else:
            j = int(rng.integers(1, n))
            length = int(rng.integers(1, min(2 * kappa, n - j) + 1))
            work.append((verb, index.text.substring(j, length)))
    return work


def _timed(index, item):
    verb, arg = item
    started = time.perf_counter()
    if verb == "sa":
        index.query_sa(arg)
    elif verb == "isa":
        index.query_isa(arg)
    elif verb == "count":
        index.count(arg)
    else:
        index.locate(arg)
    return verb, time.perf_counter() - started


def run_bench(path, queries=1000, threads=1, config=None, record=True, seed=0):
    """
    Builds an index for the file and times a mixed query workload. Returns
    (summary dict, latency percentiles DataFrame in microseconds).
    """
    raw = read_text(path)
    config = config or IndexConfig()
    started = time.perf_counter()
    index = TextIndex.build(raw, config)
    build_seconds = time.perf_counter() - started
    index_bytes = len(index.to_bytes(with_reverse=False))
    stats = index.stats()

    work = _workload(index, queries, np.random.default_rng(seed))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        latencies = list(pool.map(lambda item: _timed(index, item), work))

    df = pd.DataFrame(latencies, columns=["query", "seconds"])
    table = (df.groupby("query")["seconds"].quantile([0.5, 0.9, 0.99]).unstack() * 1e6)
    table.columns = ["p50", "p90", "p99"]
    summary = dict(stats, path=path, build_seconds=build_seconds, index_bytes=index_bytes,
                   threads=threads, queries=len(work))
    if record:
        init_db()
        text_id = get_or_create_text(os.path.basename(path), stats["n"], stats["sigma"])
        summary["run_id"] = record_bench_run(text_id, stats, build_seconds, index_bytes,
                                             threads, latencies)
    return summary, table


def cmd_bench(args):
    summary, table = run_bench(args.path, args.queries, args.threads, make_config(args),
                               record=not args.no_record)
    n = summary["n"]
    print(f"build: {summary['build_seconds']:.3f}s "
          f"({n / max(summary['build_seconds'], 1e-9):,.0f} symbols/s)")
    print(f"index: {summary['index_bytes']} bytes "
          f"({8 * summary['index_bytes'] / n:.2f} bits/symbol)")
    print(f"tau={summary['tau']} sync={summary['sync_size']} threads={summary['threads']}")
    print(table.round(1).to_string())
    return EXIT_OK


def build_parser():
    parser = CliParser(prog="synidx", description="Synchronizing-set compressed text index")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--mu", help="tau = floor(mu * log_sigma n), e.g. 1/8")
        p.add_argument("--eps", type=float, default=0.5, help="wavelet tree fan-out exponent")
        p.add_argument("--tau", type=int, help="explicit tau (forces the succinct index)")

    p = sub.add_parser("build", help="build an index file from a text file")
    p.add_argument("path")
    p.add_argument("--out", help="index file (default data/indexes/<name>.synidx)")
    add_config_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sa", help="print SA[i]")
    p.add_argument("index")
    p.add_argument("i", type=int)
    p.set_defaults(func=cmd_sa)

    p = sub.add_parser("isa", help="print ISA[j]")
    p.add_argument("index")
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_isa)

    for verb, func in (("range", cmd_range), ("count", cmd_count), ("locate", cmd_locate)):
        p = sub.add_parser(verb, help=f"{verb} of a raw byte pattern")
        p.add_argument("index")
        p.add_argument("pattern", type=pattern_arg)
        if verb == "count":
            p.add_argument("--split", action="store_true",
                           help="also print the run-type split of a periodic pattern")
        p.set_defaults(func=func)

    p = sub.add_parser("st", help="suffix tree operation")
    p.add_argument("index")
    p.add_argument("op", choices=sorted(ST_OPS))
    p.add_argument("args", nargs="*")
    p.set_defaults(func=cmd_st)

    p = sub.add_parser("verify", help="compare against brute-force oracles")
    p.add_argument("path", nargs="?")
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--max-n", type=int, default=300)
    p.add_argument("--tau", type=int)
    p.add_argument("--record", action="store_true", help="store results in the run database")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="build time, index size and query latencies")
    p.add_argument("path")
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-record", action="store_true")
    add_config_args(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, CorruptIndex, VersionMismatch) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except (SynIdxError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
