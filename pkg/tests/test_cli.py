import json

import pytest

from xbar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_build_text(capsys):
    code, out = run(capsys, "build", "--n", "7")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "0-1-2-3-4-5-0-2-4-0-3-6-1-3-5-1-4-6-2-5-6-0"
    assert lines[1] == "22 PEs, 21 crosspoints"


def test_build_json_schema(capsys):
    code, out = run(capsys, "build", "--n", "5", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"n", "slots", "provenance"}
    assert doc["n"] == 5 and len(doc["slots"]) == 11


def test_build_csv(capsys):
    code, out = run(capsys, "build", "--n", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "slot,class,provenance"
    assert len(out.strip().splitlines()) == 5


def test_sort_json_golden(capsys):
    code, out = run(capsys, "sort", "--n", "5", "--input", "8,6,9,5,7", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ranks"] == [3, 1, 4, 0, 2]
    assert doc["phase_count"] == 7
    assert doc["conflicts"] == []


def test_sort_text_even_case(capsys):
    code, out = run(capsys, "sort", "--n", "4", "--input", "6,7,8,5")
    assert code == 0
    assert out.startswith("0001\n1001\n1101\n0000\n")
    assert "R: 1 2 3 0" in out
    assert "conflict: T[2][1] slots 2,5" in out


def test_sort_trace_file(tmp_path, capsys):
    path = tmp_path / "trace.jsonl"
    code, _ = run(capsys, "sort", "--n", "4", "--input", "6,7,8,5", "--trace", str(path))
    assert code == 0
    lines = path.read_text().strip().splitlines()
    docs = [json.loads(line) for line in lines]
    assert docs[0]["phase"] == "clear"
    assert docs[-1]["phase"] == "rank"


def test_sort_csv_is_trace(capsys):
    code, out = run(capsys, "sort", "--n", "3", "--input", "2,1,3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "phase,slot,action,value,row,col"


def test_sort_input_file(tmp_path, capsys):
    path = tmp_path / "vals.txt"
    path.write_text("8\n6\n9\n5\n7\n")
    code, out = run(capsys, "sort", "--n", "5", "--input", str(path), "--format", "json")
    assert code == 0
    assert json.loads(out)["ranks"] == [3, 1, 4, 0, 2]


def test_sort_bad_input_file(tmp_path, capsys):
    path = tmp_path / "vals.txt"
    path.write_text("8\nnope\n")
    code, _ = run(capsys, "sort", "--n", "2", "--input", str(path))
    err = capsys.readouterr()
    assert code == 2


def test_sort_length_mismatch(capsys):
    code, _ = run(capsys, "sort", "--n", "4", "--input", "1,2,3")
    assert code == 2


def test_min_max_rank_search(capsys):
    code, out = run(capsys, "min", "--n", "4", "--input", "6,7,8,5")
    assert (code, out.strip()) == (0, "index 3")
    code, out = run(capsys, "max", "--n", "5", "--input", "8,6,9,5,7")
    assert (code, out.strip()) == (0, "index 2")
    code, out = run(capsys, "rank", "--n", "5", "--input", "8,6,9,5,7", "--r", "2")
    assert (code, out.strip()) == (0, "index 4")
    code, out = run(capsys, "search", "--n", "5", "--input", "8,6,9,5,7", "--key", "9")
    assert (code, out.strip()) == (0, "index 2")
    code, out = run(capsys, "search", "--n", "5", "--input", "8,6,9,5,7", "--key", "4",
                    "--format", "json")
    assert code == 0
    assert json.loads(out) == {"index": None, "exact": True}


def test_validate_clean_and_violations(tmp_path, capsys):
    code, out = run(capsys, "validate", "--n", "12", "--format", "json")
    assert code == 0
    assert json.loads(out)["violations"] == []

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "slots": [0, 0], "provenance": ["", ""]}))
    code, out = run(capsys, "validate", "--layout", str(bad), "--format", "json")
    assert code == 1
    assert json.loads(out)["violations"]


def test_validate_roundtrip_through_build(tmp_path, capsys):
    code, out = run(capsys, "build", "--n", "9", "--format", "json")
    layout_file = tmp_path / "layout.json"
    layout_file.write_text(out)
    code, out = run(capsys, "validate", "--layout", str(layout_file))
    assert code == 0
    assert "ok" in out


def test_depth_json(capsys):
    code, out = run(capsys, "depth", "--circuit", "min", "--n", "16", "--fanin", "2",
                    "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["depth"] == 7
    assert doc["fanin_limit"] == 2


def test_depth_unbounded_text(capsys):
    code, out = run(capsys, "depth", "--circuit", "threshold-rank", "--n", "8")
    assert code == 0
    assert out.startswith("depth 4 ")


def test_perm_commands(capsys):
    code, out = run(capsys, "perm", "--n", "12", "--j", "5")
    assert (code, out.strip()) == (0, "(0,5,10,3,8,1,6,11,4,9,2,7)")
    code, out = run(capsys, "perm", "--n", "6", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["sets"][2] == [[2, 5]]
    code, _ = run(capsys, "perm", "--n", "7")
    assert code == 2  # partition needs even n


def test_seeded_runs_are_byte_identical(capsys, monkeypatch):
    monkeypatch.delenv("XBAR_SEED", raising=False)
    _, first = run(capsys, "sort", "--n", "9", "--seed", "42", "--format", "json")
    _, second = run(capsys, "sort", "--n", "9", "--seed", "42", "--format", "json")
    assert first == second
    _, other = run(capsys, "sort", "--n", "9", "--seed", "43", "--format", "json")
    assert json.loads(other)["input"] != json.loads(first)["input"]


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("XBAR_SEED", "42")
    _, via_env = run(capsys, "sort", "--n", "9", "--format", "json")
    monkeypatch.delenv("XBAR_SEED")
    _, via_flag = run(capsys, "sort", "--n", "9", "--seed", "42", "--format", "json")
    assert via_env == via_flag


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["rank", "--n", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["depth", "--circuit", "min", "--n", "8", "--fanin", "1"])
    assert exc.value.code == 2


def test_rank_out_of_range(capsys):
    code, _ = run(capsys, "rank", "--n", "5", "--input", "8,6,9,5,7", "--r", "5")
    assert code == 2
