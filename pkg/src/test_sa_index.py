import numpy as np
import pytest

from config import IndexConfig
from errors import NotPeriodic, OutOfRange, WrongType
from oracle import naive_isa, naive_lce, naive_run_meta, naive_sa
from sa_index import PlainSaIndex, SaIndex, find_runs, run_positions
from text_core import ingest

SAMPLE = b"abaababababaababa"
SAMPLE_SA = [18, 17, 12, 3, 15, 10, 1, 13, 8, 6, 4, 16, 11, 2, 14, 9, 7, 5]
MIXED_RUNS = b"a" * 10 + b"b" + b"a" * 12 + b"c" + b"a" * 9 + b"b" + b"a" * 11


def build(raw, tau, eps=0.5):
    return SaIndex.build(ingest(raw, IndexConfig(tau=tau)), eps)


def random_bytes(seed, n, letters):
    rng = np.random.default_rng(seed)
    return rng.choice(np.frombuffer(letters, dtype=np.uint8), size=n).tobytes()


def check_against_oracle(index):
    symbols = index.text.symbols.tolist()
    sa, isa = naive_sa(symbols), naive_isa(symbols)
    got_sa = [index.query_sa(i) for i in range(1, index.n + 1)]
    got_isa = [index.query_isa(j) for j in range(1, index.n + 1)]
    assert got_sa == sa
    assert got_isa == isa


def test_sample():
    index = build(SAMPLE, 1)
    assert [index.query_sa(i) for i in range(1, 19)] == SAMPLE_SA
    assert index.query_isa(1) == 7
    assert index.query_isa(18) == 1
    assert index.query_sa(7) == 1
    assert index.query_sa(18) == 5


def test_two_symbol_text():
    index = build(b"a", 1)
    assert index.query_sa(1) == 2
    assert index.query_sa(2) == 1
    assert index.query_isa(1) == 2


def test_out_of_range():
    index = build(SAMPLE, 1)
    with pytest.raises(OutOfRange):
        index.query_sa(0)
    with pytest.raises(OutOfRange):
        index.query_isa(19)


@pytest.mark.parametrize("tau", [1, 2, 3])
@pytest.mark.parametrize("letters", [b"ab", b"abc", b"abcdefghijklmno"])
def test_random_texts(tau, letters):
    check_against_oracle(build(random_bytes(tau * 31 + len(letters), 250, letters), tau))


@pytest.mark.parametrize("raw,tau", [
    (b"a" * 40, 3),
    (b"ab" * 20, 6),
    (b"aab" * 15, 9),
    (MIXED_RUNS, 3),
    (b"abaababaabaababaababaabaababaabaab", 3),
])
def test_periodic_texts(raw, tau):
    check_against_oracle(build(raw, tau))


def test_nested_wavelet_levels():
    check_against_oracle(build(random_bytes(8, 200, b"ab"), 3, eps=0.9))


def test_periodic_position_flags():
    index = build(b"a" * 63, 3)
    assert index.is_periodic_pos(1)
    assert index.is_periodic_pos(index.n - 3 * 3 + 1)
    assert not index.is_periodic_pos(index.n - 3 * 3 + 2)
    assert index.is_periodic_rank(index.n)
    assert not index.is_periodic_rank(1)


def test_run_meta_alternating():
    index = build(b"ab" * 12, 6)
    meta = index.run_meta(1)
    assert meta.root == (1, 2)
    assert meta.head == 0
    assert meta.exp == 12
    assert meta.tail == 0
    assert meta.end == 25
    assert meta.type == -1
    second = index.run_meta(2)
    assert second.root == (1, 2)
    assert second.head == 1
    assert second.exp == 11


def test_run_meta_matches_definition():
    index = build(MIXED_RUNS, 3)
    symbols = index.text.symbols.tolist()
    periodic = 0
    for j in range(1, index.n + 1):
        expected = naive_run_meta(symbols, 3, j)
        if expected is None:
            assert not index.is_periodic_pos(j)
            with pytest.raises(NotPeriodic):
                index.run_meta(j)
            continue
        periodic += 1
        meta = index.run_meta(j)
        got = {"root": meta.root, "head": meta.head, "exp": meta.exp, "tail": meta.tail,
               "end": meta.end, "end_full": meta.end_full, "type": meta.type}
        assert got == expected
    assert periodic > 0


def test_deltas_on_unary_run():
    # a^20$: positions 1..13 are periodic, exponent 21 - j, all of type -1
    index = build(b"a" * 20, 3)
    for j in range(1, 14):
        assert index.delta_a(j) == 14 - j
        assert index.delta_s(j) == 0
        assert index.query_isa(j) == 22 - j


def test_deltas_reject_increasing_runs():
    index = build(b"a" * 12 + b"b", 3)
    assert index.run_meta(1).type == 1
    with pytest.raises(WrongType):
        index.delta_a(1)
    with pytest.raises(WrongType):
        index.delta_s(1)


def test_plain_index():
    text = ingest(SAMPLE)
    assert text.fallback
    index = PlainSaIndex.build(text)
    assert [index.query_sa(i) for i in range(1, 19)] == SAMPLE_SA
    assert index.query_isa(1) == 7
    with pytest.raises(OutOfRange):
        index.query_sa(19)


# --- periodic runs, checked against definitions ---

RUNS_MINUS = b"b" * 12 + b"a" + b"b" * 15 + b"a" + b"b" * 10 + b"a" + b"b" * 13


def runs_text(seed):
    rng = np.random.default_rng(seed)
    letters = list(b"abc")
    pieces = []
    for _ in range(10):
        pieces.append(bytes([int(rng.choice(letters))]) * int(rng.integers(8, 16)))
        pieces.append(bytes(int(c) for c in rng.choice(letters, size=int(rng.integers(1, 4)))))
    # a trailing run ends at the sentinel, so type -1 always occurs
    pieces.append(b"a" * 9)
    return b"".join(pieces)


RUN_FAMILIES = [
    (b"a" * 40, 3),
    (b"ab" * 20, 6),
    (b"aab" * 15, 9),
    (MIXED_RUNS, 3),
    (RUNS_MINUS, 3),
    (runs_text(1), 3),
    (runs_text(2), 3),
]


def periodic_table(raw, tau):
    symbols = ingest(raw, IndexConfig(tau=tau)).symbols.tolist()
    metas = {}
    for j in range(1, len(symbols) + 1):
        meta = naive_run_meta(symbols, tau, j)
        if meta is not None:
            metas[j] = meta
    return symbols, metas


def same_exponent_above(metas, isa, j):
    mj = metas[j]
    return {x for x, m in metas.items()
            if m["type"] == -1 and (m["root"], m["head"], m["exp"]) ==
            (mj["root"], mj["head"], mj["exp"]) and isa[x - 1] > isa[j - 1]}


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_exponent_groups_fill_periodic_blocks(raw, tau):
    index = build(raw, tau)
    core = index.core
    keys = [key for key in core.l_per if core.is_periodic_key(key)]
    assert keys
    for key in keys:
        b_x, e_x = core.l_range[key]
        sizes = [side.region_size(b_x, e_x, key) for side in (index.minus, index.plus)]
        assert sum(sizes) == e_x - b_x
    check_against_oracle(index)


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_run_positions_stop_before_the_break(raw, tau):
    index = build(raw, tau)
    kappa = index.text.kappa
    runs = find_runs(index.text, index.core)
    assert runs
    for run in runs:
        positions = list(run_positions(run, kappa))
        assert positions[-1] == run.end - kappa
        assert all(index.is_periodic_pos(j) for j in positions)
        assert not index.is_periodic_pos(run.end - kappa + 1)


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_runs_are_far_apart(raw, tau):
    _, metas = periodic_table(raw, tau)
    positions = sorted(metas)
    for j, nxt in zip(positions, positions[1:]):
        if nxt > j + 1:
            assert nxt - j >= 2 * tau
            assert metas[j]["end"] <= nxt + tau - 1


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_run_starts_have_distinct_full_ends(raw, tau):
    _, metas = periodic_table(raw, tau)
    ends = [metas[j]["end_full"] for j in metas if j - 1 not in metas]
    assert ends
    assert len(set(ends)) == len(ends)


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_run_metadata_is_constant_inside_a_run(raw, tau):
    _, metas = periodic_table(raw, tau)
    for j, cur in metas.items():
        prev = metas.get(j - 1)
        if prev is None:
            continue
        for field in ("root", "end", "tail", "end_full", "type"):
            assert cur[field] == prev[field], (j, field)
        p = len(cur["root"])
        if prev["head"]:
            assert (cur["head"], cur["exp"]) == (prev["head"] - 1, prev["exp"])
        else:
            assert (cur["head"], cur["exp"]) == (p - 1, prev["exp"] - 1)


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_periodic_sa_blocks_are_ordered_by_type_and_run_length(raw, tau):
    symbols, metas = periodic_table(raw, tau)
    kappa = 3 * tau - 1
    blocks = {}
    for j in naive_sa(symbols):
        if j in metas:
            blocks.setdefault(tuple(symbols[j - 1:j - 1 + kappa]), []).append(j)
    for members in blocks.values():
        types = [metas[j]["type"] for j in members]
        assert types == sorted(types)
        minus = [metas[j]["end"] - j for j in members if metas[j]["type"] < 0]
        plus = [metas[j]["end"] - j for j in members if metas[j]["type"] > 0]
        assert minus == sorted(minus)
        assert plus == sorted(plus, reverse=True)


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_same_exponent_positions_hit_each_run_once(raw, tau):
    symbols, metas = periodic_table(raw, tau)
    isa = naive_isa(symbols)
    starts = [i for i, m in metas.items() if m["type"] < 0 and i - 1 not in metas]
    for j, mj in metas.items():
        if mj["type"] > 0:
            continue
        above = same_exponent_above(metas, isa, j)
        for i in starts:
            mi = metas[i]
            if mi["root"] != mj["root"]:
                continue
            ell = mi["end"] - i - 3 * tau + 2
            hits = [x for x in above if i <= x < i + ell]
            assert len(hits) <= 1
            expected = (isa[mi["end_full"] - 1] > isa[mj["end_full"] - 1]
                        and mi["end_full"] - i >= mj["end_full"] - j)
            assert (len(hits) == 1) == expected, (i, j)


@pytest.mark.parametrize("raw,tau", RUN_FAMILIES)
def test_delta_is_all_minus_same(raw, tau):
    symbols, metas = periodic_table(raw, tau)
    isa = naive_isa(symbols)
    kappa = 3 * tau - 1
    index = build(raw, tau)
    checked = 0
    for j, mj in metas.items():
        if mj["type"] > 0:
            continue
        delta = sum(1 for x in range(1, len(symbols) + 1)
                    if naive_lce(symbols, j, x) >= kappa and isa[x - 1] <= isa[j - 1])
        delta_a = sum(1 for m in metas.values()
                      if m["type"] == -1 and (m["root"], m["head"]) == (mj["root"], mj["head"])
                      and m["exp"] <= mj["exp"])
        delta_s = len(same_exponent_above(metas, isa, j))
        assert delta == delta_a - delta_s
        assert index.delta_a(j) == delta_a
        assert index.delta_s(j) == delta_s
        assert index.query_isa(j) == isa[j - 1]
        checked += 1
    assert checked
