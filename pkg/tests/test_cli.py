import csv
import json

import pytest

import Main
from qkmismatch.matching.trials import BENCH_COLUMNS


def _lines(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]


def _gen(tmp_path, plant="match-at-distance-1@5", seed=4):
    out = tmp_path / "inst"
    code = Main.main(["gen", "--n", "64", "--m", "8", "-k", "2", "--eps", "1", "--plant", plant, "--seed", str(seed), "--out", str(out)])
    return code, out


def test_gen_writes_instance_files(tmp_path, capsys):
    code, out = _gen(tmp_path)

    assert code == Main.EXIT_OK
    sidecar = _lines(capsys)[-1]
    assert sidecar["plant"] == "match-at-distance-1@5"
    assert sidecar["seed"] == {"master": 4, "stream": 0}
    assert (tmp_path / "inst.text").stat().st_size == 64
    assert (tmp_path / "inst.pattern").stat().st_size == 8


def test_match_on_generated_instance(tmp_path, capsys):
    _, out = _gen(tmp_path)
    capsys.readouterr()

    code = Main.main([
        "match", "--text", f"{out}.text", "--pattern", f"{out}.pattern", "-k", "2", "--eps", "1",
        "--seed", "7", "--trials", "3",
    ])

    lines = _lines(capsys)
    assert code == Main.EXIT_OK
    assert len(lines) == 4
    assert all(line["backend"] == "analytic" for line in lines[:3])
    assert lines[-1]["aggregate"]["trials"] == 3


def test_match_is_deterministic(tmp_path, capsys):
    _, out = _gen(tmp_path)
    argv = ["match", "--text", f"{out}.text", "--pattern", f"{out}.pattern", "-k", "2", "--eps", "1", "--seed", "99"]
    capsys.readouterr()

    Main.main(argv)
    first = capsys.readouterr().out
    Main.main(argv)
    second = capsys.readouterr().out

    assert first == second


def test_decide(tmp_path, capsys):
    (tmp_path / "x").write_bytes(b"a" * 32)
    (tmp_path / "y").write_bytes(b"a" * 30 + b"bb")

    code = Main.main(["decide", "--x", str(tmp_path / "x"), "--y", str(tmp_path / "y"), "-k", "4", "--eps", "1/2", "--trials", "2"])

    lines = _lines(capsys)
    assert code == Main.EXIT_OK
    assert [line["distance"] for line in lines[:2]] == [2, 2]


def test_count_histogram(capsys):
    code = Main.main(["count", "--n", "16", "--t", "4", "--m-param", "16", "--trials", "200", "--backend", "exact"])

    report = _lines(capsys)[-1]
    assert code == Main.EXIT_OK
    assert report["rounds"] == 16
    assert sum(report["histogram"].values()) == 200
    assert report["within_bound"] >= 0.85


def test_bench(tmp_path):
    out = tmp_path / "bench.csv"

    code = Main.main(["bench", "--grid", "n=32;m=8;k=1,2;eps=1", "--trials", "2", "--out", str(out)])

    with open(out, newline="") as csvFile:
        content = list(csv.reader(csvFile))
    assert code == Main.EXIT_OK
    assert content[0] == BENCH_COLUMNS
    assert len(content) == 3


@pytest.mark.parametrize("argv", [
    ["count", "--n", "16", "--t", "17", "--m-param", "16"],
    ["count", "--n", "12", "--t", "1", "--m-param", "16", "--backend", "exact"],
    ["count", "--n", "16", "--t", "1", "--m-param", "16", "--trials", "0"],
    ["count", "--n", "16", "--t", "1", "--m-param", "16", "--seed", "-1"],
    ["bench", "--grid", "n=32;m=8", "--out", "unused.csv"],
    ["bench", "--grid", "n=10;m=20;k=1;eps=1", "--out", "unused.csv"],
    ["count", "--n", "0", "--t", "0", "--m-param", "4"],
])
def test_invalid_arguments(argv):
    assert Main.main(argv) == Main.EXIT_INVALID


def test_invalid_epsilon(tmp_path):
    (tmp_path / "t").write_bytes(b"abcdef")
    (tmp_path / "p").write_bytes(b"abc")

    argv = ["match", "--text", str(tmp_path / "t"), "--pattern", str(tmp_path / "p"), "-k", "1", "--eps", "1.5"]
    assert Main.main(argv) == Main.EXIT_INVALID


def test_missing_input_file(tmp_path):
    argv = ["match", "--text", str(tmp_path / "missing"), "--pattern", str(tmp_path / "missing"), "-k", "1", "--eps", "1"]
    assert Main.main(argv) == Main.EXIT_INVALID


def test_infeasible_plant(tmp_path):
    code, out = _gen(tmp_path, plant="none-above-distance-8")
    assert code == Main.EXIT_INVALID
    assert not (tmp_path / "inst.json").exists()


def test_qubit_cap_is_reported(capsys, tmp_path):
    settingsPath = tmp_path / "settings.json"
    settingsPath.write_text(json.dumps({"backend": {"qubitCap": 6}}))

    argv = ["--settings", str(settingsPath), "count", "--n", "16", "--t", "1", "--m-param", "16", "--backend", "exact"]
    assert Main.main(argv) == Main.EXIT_INVALID
