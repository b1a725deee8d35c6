import pytest

import database
from verify import VerifyReport, Mismatch
from visualization.data_loader import (latency_percentiles, load_bench_runs, load_latencies,
                                       load_verify_runs)
from visualization.visualizer import Visualizer


@pytest.fixture
def populated_db(tmp_path, monkeypatch):
    monkeypatch.setattr(database, "DB_PATH", str(tmp_path / "synidx.db"))
    database.init_db()
    text_id = database.get_or_create_text("sample.txt", 18, 3)
    stats = {"tau": 1, "fallback": False, "sync_size": 17}
    latencies = [("sa", 2e-5), ("sa", 4e-5), ("isa", 3e-5), ("count", 9e-5), ("locate", 1e-4)]
    database.record_bench_run(text_id, stats, 0.5, 120, 1, latencies)
    plain = database.get_or_create_text("plain.txt", 100, 4)
    database.record_bench_run(plain, {"tau": 1, "fallback": True, "sync_size": 0},
                              0.01, 500, 2, [("sa", 1e-6)])

    passed = VerifyReport("sample.txt", 18, 3, 1, False, checks=40)
    failed = VerifyReport("sample.txt", 18, 3, 1, False, checks=40,
                          mismatches=[Mismatch("sa", "SA[3]", 12, 13)])
    database.record_verify_run(text_id, passed, seed=0)
    database.record_verify_run(text_id, failed, seed=1)
    return tmp_path


def test_empty_database(tmp_path, monkeypatch):
    monkeypatch.setattr(database, "DB_PATH", str(tmp_path / "none.db"))
    assert load_bench_runs().empty
    assert load_latencies().empty
    assert load_verify_runs().empty
    viz = Visualizer(load_bench_runs(), load_latencies(), load_verify_runs())
    assert viz.plot_build_throughput() is None
    assert viz.plot_latency_percentiles() is None
    assert viz.plot_latency_distribution() is None
    assert viz.plot_verify_history() is None


def test_text_rows_are_reused(populated_db):
    first = database.get_or_create_text("sample.txt", 18, 3)
    assert database.get_or_create_text("sample.txt", 18, 3) == first
    texts = database.get_all_texts()
    assert set(texts) == {"sample.txt", "plain.txt"}
    assert texts["plain.txt"]["sigma"] == 4


def test_loaders(populated_db):
    runs = load_bench_runs()
    print(runs.head())
    assert len(runs) == 2
    sample = runs[runs["text_name"] == "sample.txt"].iloc[0]
    assert sample["throughput"] == pytest.approx(36.0)
    assert sample["bits_per_symbol"] == pytest.approx(8 * 120 / 18)
    assert not sample["fallback"]

    latencies = load_latencies()
    assert len(latencies) == 6
    assert latencies["micros"].max() == pytest.approx(100.0)

    table = latency_percentiles(latencies)
    assert list(table.columns) == ["query", "p50", "p90", "p99"]
    sa_row = table[table["query"] == "sa"].iloc[0]
    assert sa_row["p50"] == pytest.approx(20.0)

    verify = load_verify_runs()
    assert verify["passed"].tolist().count(False) == 1
    assert verify[~verify["passed"]].iloc[0]["detail"].startswith("sa SA[3]")


def test_visualization(populated_db):
    viz = Visualizer(load_bench_runs(), load_latencies(), load_verify_runs())
    assert viz.plot_build_throughput() is not None
    assert viz.plot_build_throughput(text="plain.txt") is not None
    assert viz.plot_build_throughput(text="missing.txt") is None

    fig = viz.plot_latency_percentiles(text="sample.txt")
    assert [trace.name for trace in fig.data] == ["p50", "p90", "p99"]
    assert viz.plot_latency_percentiles(verb="count") is not None
    assert viz.plot_latency_distribution(verb="sa") is not None

    fig = viz.plot_verify_history()
    assert {trace.name for trace in fig.data} == {"passed", "failed"}
