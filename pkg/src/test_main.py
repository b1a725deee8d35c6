import pytest

import database
from main import EXIT_IO, EXIT_OK, EXIT_USAGE, main, run_bench

SAMPLE = b"abaababababaababa"


@pytest.fixture
def sample_index(tmp_path):
    source = tmp_path / "sample.txt"
    source.write_bytes(SAMPLE)
    out = tmp_path / "sample.synidx"
    assert main(["build", str(source), "--tau", "1", "--out", str(out)]) == EXIT_OK
    return str(out)


@pytest.fixture
def temp_db(tmp_path, monkeypatch):
    path = tmp_path / "db" / "synidx.db"
    monkeypatch.setattr(database, "DB_PATH", str(path))
    return path


def last_line(capsys):
    return capsys.readouterr().out.strip().splitlines()[-1]


@pytest.mark.parametrize("argv,expected", [
    (["sa", "7"], "1"),
    (["sa", "18"], "5"),
    (["isa", "1"], "7"),
    (["range", "aba"], "4 11"),
    (["range", "abc"], "11 11"),
    (["count", "aba"], "7"),
    (["count", "c"], "0"),
    (["locate", "aba"], "1 4 6 8 10 13 15"),
    (["locate", "bb"], ""),
])
def test_queries(sample_index, capsys, argv, expected):
    capsys.readouterr()
    assert main([argv[0], sample_index] + argv[1:]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1] == expected


@pytest.mark.parametrize("args,expected", [
    (["root"], "0:18"),
    (["child", "0:18", "a"], "1:11"),
    (["child", "0:18", "$"], "0:1"),
    (["child", "0:18", "c"], "0:0"),
    (["parent", "4:11"], "1:11"),
    (["sdepth", "4:11"], "3"),
    (["string", "4:11"], "aba"),
    (["letter", "4:11", "2"], "b"),
    (["isancestor", "1:11", "4:11"], "1"),
    (["isleaf", "4:11"], "0"),
    (["lca", "4:5", "10:11"], "4:11"),
    (["wa", "4:11", "1"], "1:11"),
    (["slink", "4:11"], "11:18"),
    (["wlink", "11:18", "a"], "4:11"),
    (["pred", "0:18", "b"], "11 1:11"),
    (["pred", "0:18", "c"], "18 11:18"),
    (["findleaf", "1"], "6:7"),
])
def test_suffix_tree_verbs(sample_index, capsys, args, expected):
    capsys.readouterr()
    assert main(["st", sample_index] + args) == EXIT_OK
    assert last_line(capsys) == expected


@pytest.mark.parametrize("args", [
    ["parent", "0:18"],
    ["sdepth", "5:5"],
    ["sdepth", "nonsense"],
    ["child", "0:18", "ab"],
    ["wa", "4:11"],
])
def test_suffix_tree_usage_errors(sample_index, args):
    assert main(["st", sample_index] + args) == EXIT_USAGE


def test_query_errors(sample_index, tmp_path):
    assert main(["sa", sample_index, "19"]) == EXIT_USAGE
    assert main(["sa", str(tmp_path / "missing.synidx"), "1"]) == EXIT_IO
    broken = tmp_path / "broken.synidx"
    broken.write_bytes(b"SYNIDX01" + b"\x00" * 4)
    assert main(["sa", str(broken), "1"]) == EXIT_IO


def test_unknown_verb_exits_with_usage_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_build_rejects_bad_tau(tmp_path):
    source = tmp_path / "tiny.txt"
    source.write_bytes(b"ab")
    assert main(["build", str(source), "--tau", "5", "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["build", str(tmp_path / "absent.txt")]) == EXIT_IO


def test_count_split(tmp_path, capsys):
    source = tmp_path / "runs.txt"
    source.write_bytes(b"a" * 10 + b"b" + b"a" * 12)
    out = tmp_path / "runs.synidx"
    assert main(["build", str(source), "--tau", "3", "--out", str(out)]) == EXIT_OK
    capsys.readouterr()
    assert main(["count", str(out), "a" * 9, "--split"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-2] == "6"
    assert lines[-1] == "a-=3 a+=1 s-=1 s+=1"


def test_verify_file(tmp_path, capsys):
    source = tmp_path / "sample.txt"
    source.write_bytes(SAMPLE)
    assert main(["verify", str(source), "--tau", "1"]) == EXIT_OK
    assert "1/1 passed" in last_line(capsys)


def test_verify_suite_records(temp_db, capsys):
    assert main(["verify", "--seeds", "2", "--max-n", "24", "--record"]) == EXIT_OK
    texts = database.get_all_texts()
    assert texts
    assert temp_db.exists()


def test_bench(tmp_path, capsys):
    source = tmp_path / "bench.txt"
    source.write_bytes(SAMPLE * 20)
    assert main(["bench", str(source), "--queries", "40", "--threads", "2",
                 "--no-record", "--tau", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p50" in out
    assert "bits/symbol" in out


def test_run_bench_records(tmp_path, temp_db):
    source = tmp_path / "bench.txt"
    source.write_bytes(SAMPLE * 10)
    summary, table = run_bench(str(source), queries=20, threads=1)
    assert summary["run_id"] >= 1
    assert summary["queries"] == 20
    assert set(table.columns) == {"p50", "p90", "p99"}
    assert set(table.index) <= {"sa", "isa", "count", "locate"}
