import json
import subprocess
import sys

import pytest

from homwalk import cli
from homwalk.core import HeightFunction


def run_cli(args, env_extra=None, check=True):
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(
        [sys.executable, "-m", "homwalk.cli", *args],
        capture_output=True, text=True, env=env,
    )
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def test_count_line():
    proc = run_cli(["count", "--graph", "line", "--n", "3", "--n-max", "4", "--d", "1"])
    assert proc.stdout.splitlines() == ["n,d,count", "3,1,6", "4,1,10"]


def test_count_torus():
    proc = run_cli(["count", "--graph", "torus", "--n", "4", "--d", "1"])
    assert "4,1,6" in proc.stdout


def test_sample_dp_rejects_torus():
    proc = run_cli(["sample", "--graph", "torus", "--n", "8", "--d", "1",
                    "--method", "dp", "--reps", "1"], check=False)
    assert proc.returncode == 2


def test_glauber_requires_steps():
    proc = run_cli(["sample", "--graph", "line", "--n", "8", "--d", "1",
                    "--method", "glauber", "--reps", "1"], check=False)
    assert proc.returncode == 2


def test_sample_reproducible_digest(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    base = ["sample", "--graph", "line", "--n", "12", "--d", "1",
            "--method", "dp", "--reps", "20", "--seed", "7"]
    p1 = run_cli(base + ["--out", str(out1)])
    p2 = run_cli(base + ["--out", str(out2)])
    assert out1.read_text() == out2.read_text()
    m1 = json.loads(p1.stderr.strip().splitlines()[-1])
    m2 = json.loads(p2.stderr.strip().splitlines()[-1])
    assert list(m1["outputs"].values()) == list(m2["outputs"].values())
    manifest_file = json.loads((tmp_path / "a.jsonl.manifest.json").read_text())
    assert manifest_file["seed"] == 7
    for line in out1.read_text().splitlines():
        HeightFunction.from_json(line)


def test_cftp_sample_cli(tmp_path):
    out = tmp_path / "c.jsonl"
    run_cli(["sample", "--graph", "line", "--n", "12", "--d", "1",
             "--method", "cftp", "--reps", "5", "--seed", "7", "--out", str(out)])
    assert len(out.read_text().splitlines()) == 5


def test_env_seed_override(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    base = ["sample", "--graph", "line", "--n", "10", "--d", "1",
            "--method", "dp", "--reps", "5"]
    run_cli(base + ["--seed", "1", "--out", str(out1)], env_extra={"HOMWALK_SEED": "99"})
    run_cli(base + ["--seed", "99", "--out", str(out2)])
    assert out1.read_text() == out2.read_text()


def test_jobs_preserve_order(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    base = ["sample", "--graph", "line", "--n", "12", "--d", "1",
            "--method", "dp", "--reps", "30", "--seed", "3"]
    run_cli(base + ["--out", str(out1)])
    run_cli(base + ["--jobs", "2", "--out", str(out2)])
    assert out1.read_text() == out2.read_text()


def test_stats(tmp_path):
    sample = tmp_path / "s.jsonl"
    run_cli(["sample", "--graph", "line", "--n", "10", "--d", "1",
             "--method", "dp", "--reps", "50", "--seed", "2", "--out", str(sample)])
    proc = run_cli(["stats", "--in", str(sample)])
    assert "# range histogram" in proc.stdout
    var_lines = proc.stdout.split("# pointwise variance")[1].strip().splitlines()
    assert len(var_lines) == 1 + 11  # header plus n+1 vertices
    assert var_lines[1] == "0,0.0"

    prefix = tmp_path / "st"
    run_cli(["stats", "--in", str(sample), "--out-prefix", str(prefix)])
    assert (tmp_path / "st_range.csv").exists()
    assert (tmp_path / "st_variance.csv").exists()


def test_stats_flat_only(tmp_path):
    sample = tmp_path / "flat.jsonl"
    from homwalk.core import line_graph, zigzag

    with open(sample, "w") as fh:
        for sign in (1, -1):
            fh.write(zigzag(line_graph(6, 1), sign).to_json() + "\n")
    proc = run_cli(["stats", "--in", str(sample)])
    range_part = proc.stdout.split("# pointwise variance")[0]
    assert "2,2" in range_part  # point mass at range 2


def test_stats_empty_input(tmp_path):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    proc = run_cli(["stats", "--in", str(empty)], check=False)
    assert proc.returncode == 2


def test_locallimit_cli(tmp_path):
    out = tmp_path / "ll.jsonl"
    run_cli(["locallimit", "--d", "1", "--len", "9", "--reps", "4",
             "--seed", "5", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    for line in lines:
        f = HeightFunction.from_json(line)
        assert f.graph.n == 9


def test_verify_unknown_suite():
    proc = run_cli(["verify", "nonsense"], check=False)
    assert proc.returncode == 2
    assert "unknown suite" in proc.stderr


def test_verify_fast_suite():
    proc = run_cli(["verify", "counting", "--fast"])
    assert proc.stdout.startswith("PASS counting")


def test_usage_error_exit_code():
    proc = run_cli(["count", "--graph", "line"], check=False)
    assert proc.returncode == 2
