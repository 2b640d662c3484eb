import csv
import os
import signal
import subprocess
import time
from pathlib import Path

import pytest

BIN = os.environ.get("BEACONLOC_BIN", "beaconloc")

SCENARIO = """\
comm_range = 100
n_static = 100
anchor_pct = 4
max_time = 600
seed = 5
"""


def run(*args, **kw):
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, **kw)


def write(path, text):
    path.write_text(text)
    return path


def test_single_run_outputs(tmp_path):
    cfg = write(tmp_path / "s.cfg", SCENARIO)
    out = tmp_path / "out"
    r = run("--config", cfg, "--out", out)
    assert r.returncode == 0, r.stderr

    rows = list(csv.reader((out / "summary.csv").open()))
    assert rows[0] == "method,anchor_pct,seed,ale_m,alt_s,beacon_overhead,localized_fraction,runtime_s".split(",")
    assert len(rows) == 2
    assert rows[1][0] == "three_beacon" and rows[1][2] == "5"

    nodes = list(csv.DictReader((out / "nodes.csv").open()))
    assert len(nodes) == 100
    for n in nodes:
        if n["ambiguity"] == "unlocalized":
            assert n["est_x"] == "" and n["beacons_used"] == "0"
        else:
            assert n["beacons_used"] == "3"
            float(n["error_m"])


def test_rerun_is_byte_identical(tmp_path):
    cfg = write(tmp_path / "s.cfg", SCENARIO)
    for d in ("a", "b"):
        assert run("--config", cfg, "--out", tmp_path / d).returncode == 0
    for f in ("summary.csv", "nodes.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_seed_override(tmp_path):
    cfg = write(tmp_path / "s.cfg", SCENARIO)
    assert run("--config", cfg, "--out", tmp_path / "o", "--seed", 9).returncode == 0
    row = (tmp_path / "o" / "summary.csv").read_text().splitlines()[1]
    assert row.split(",")[2] == "9"


def test_missing_comm_range_exits_2(tmp_path):
    cfg = write(tmp_path / "s.cfg", "n_static = 10\n")
    r = run("--config", cfg, "--out", tmp_path / "o")
    assert r.returncode == 2
    assert "comm_range" in r.stderr


def test_parse_error_names_line(tmp_path):
    cfg = write(tmp_path / "s.cfg", "comm_range = 100\nn_static = many\n")
    r = run("--config", cfg, "--out", tmp_path / "o")
    assert r.returncode == 2
    assert "s.cfg:2:" in r.stderr


def test_needs_exactly_one_input(tmp_path):
    assert run("--out", tmp_path / "o").returncode == 2


def test_unwritable_output_exits_3(tmp_path):
    cfg = write(tmp_path / "s.cfg", SCENARIO)
    blocker = write(tmp_path / "file", "x")
    r = run("--config", cfg, "--out", blocker / "sub")
    assert r.returncode == 3


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_readonly_directory_exits_3(tmp_path):
    cfg = write(tmp_path / "s.cfg", SCENARIO)
    ro = tmp_path / "ro"
    ro.mkdir()
    ro.chmod(0o500)
    try:
        assert run("--config", cfg, "--out", ro).returncode == 3
    finally:
        ro.chmod(0o700)


def test_sweep_rows_and_aggregate(tmp_path):
    sweep = write(
        tmp_path / "g.sweep",
        "comm_range = 100\nn_static = 40\nmax_time = 60\n"
        "vary.method = three_beacon, four_beacon_chord, four_beacon_algebraic\n"
        "vary.anchor_pct = 5, 10, 15, 20, 25\n"
        "seeds = 1, 2, 3, 4, 5\n",
    )
    r = run("--sweep", sweep, "--out", tmp_path / "o", "--jobs", 2)
    assert r.returncode == 0, r.stderr
    summary = list(csv.DictReader((tmp_path / "o" / "summary.csv").open()))
    assert len(summary) == 75
    agg = list(csv.DictReader((tmp_path / "o" / "aggregate.csv").open()))
    assert len(agg) == 15
    first = [row for row in summary if row["method"] == "three_beacon" and row["anchor_pct"] == "5"]
    assert len(first) == 5
    mean = sum(float(row["alt_s"]) for row in first) / 5
    assert float(agg[0]["alt_s"]) == pytest.approx(mean)
    assert agg[0]["runs"] == "5"


def test_interrupted_sweep_leaves_valid_csv(tmp_path):
    sweep = write(
        tmp_path / "long.sweep",
        "comm_range = 100\nmax_time = 3000\n"
        "vary.anchor_pct = 1, 2, 3, 4, 5\n"
        "vary.method = three_beacon, four_beacon_chord, four_beacon_algebraic\n"
        "seeds = 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20\n",
    )
    out = tmp_path / "o"
    proc = subprocess.Popen([BIN, "--sweep", str(sweep), "--out", str(out), "--jobs", "1"])
    agg_path = out / "aggregate.csv"
    deadline = time.time() + 120
    while time.time() < deadline:
        if agg_path.exists() and len(agg_path.read_text().splitlines()) >= 2:
            break
        time.sleep(0.05)
    proc.send_signal(signal.SIGKILL)
    proc.wait()

    summary = (out / "summary.csv").read_text()
    aggregate = agg_path.read_text()
    assert summary.endswith("\n") and aggregate.endswith("\n")
    s_rows = list(csv.DictReader(summary.splitlines()))
    a_rows = list(csv.DictReader(aggregate.splitlines()))
    assert len(a_rows) >= 1
    assert len(s_rows) < 300
    assert len(s_rows) >= 20 * len(a_rows)
    for row in s_rows + a_rows:
        assert None not in row.values()
        float(row["alt_s"])
