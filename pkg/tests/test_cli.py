"""End-to-end tests of the command-line interface.

Parsing and precedence are unit-tested in process; everything that
touches exit codes, streams, or byte-level determinism runs the real
``python -m rwrs`` in a subprocess.
"""

import os
import subprocess
import sys

import pytest

from rwrs import NumericalError, UsageError
from rwrs.cli import main, parse_config

_FAST_WALK = ["walk", "--n", "64", "--replicates", "10"]


def run_cli(*args, env_extra=None, cwd=None):
    env = {k: v for k, v in os.environ.items() if k != "RWRS_SEED"}
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "rwrs", *args],
        capture_output=True, text=True, env=env, cwd=cwd, timeout=300,
    )


# ---------------------------------------------------------------------------
# Configuration resolution (in process)
# ---------------------------------------------------------------------------


def test_defaults_resolve():
    cfg = parse_config(["walk"])
    assert cfg.command == "walk"
    assert cfg.hurst == 0.5
    assert cfg.beta == 2.0
    assert cfg.sigma == 1.0
    assert cfg.n == 2048
    assert cfg.cn == 32
    assert cfg.m == 4096
    assert cfg.bins == 512
    assert cfg.replicates == 500
    assert cfg.oracle_replicates == 2000
    assert cfg.times == (0.25, 0.5, 1.0)
    assert cfg.u == (0.5, 1.0, 2.0)
    assert cfg.seed == 0
    assert cfg.scenery == "stable"
    assert cfg.site_convention == "ceil"
    assert cfg.output is None
    assert cfg.jobs is None
    assert cfg.assert_mode is False


def test_missing_command_is_usage_error():
    with pytest.raises(UsageError):
        parse_config([])


def test_flag_parsing_and_validation():
    cfg = parse_config(["schema", "--times", "0.5,1", "--beta", "1.5", "--seed", "9"])
    assert cfg.times == (0.5, 1.0)
    assert cfg.beta == 1.5
    assert cfg.seed == 9
    for bad in (
        ["walk", "--hurst", "1.2"],
        ["walk", "--hurst", "0"],
        ["walk", "--beta", "2.5"],
        ["walk", "--sigma", "-1"],
        ["walk", "--replicates", "1"],
        ["walk", "--n", "0"],
        ["walk", "--bins", "1"],
        ["walk", "--seed", "-3"],
        ["walk", "--times", "1.0,0.5"],
        ["walk", "--times", "-1,1"],
        ["walk", "--jobs", "0"],
        ["ecf-check", "--oracle-replicates", "1"],
        ["schema", "--scenery", "pareto", "--beta", "2.0"],
        ["walk", "--unknown-flag"],
        ["not-a-command"],
    ):
        with pytest.raises(UsageError):
            parse_config(bad)


def test_env_seed_applies_and_flags_win(monkeypatch):
    monkeypatch.setenv("RWRS_SEED", "41")
    assert parse_config(["walk"]).seed == 41
    assert parse_config(["walk", "--seed", "5"]).seed == 5
    monkeypatch.setenv("RWRS_SEED", "not-an-int")
    with pytest.raises(UsageError):
        parse_config(["walk"])


def test_config_file_layering(tmp_path, monkeypatch):
    config = tmp_path / "run.cfg"
    config.write_text(
        "# experiment defaults\n"
        "hurst = 0.7\n"
        "beta = 1.5   # heavy tails\n"
        "times = 0.5,1\n"
        "seed = 17\n"
        "\n"
    )
    cfg = parse_config(["rwrs", "--config", str(config)])
    assert (cfg.hurst, cfg.beta, cfg.times, cfg.seed) == (0.7, 1.5, (0.5, 1.0), 17)
    # flags override the file
    cfg = parse_config(["rwrs", "--config", str(config), "--beta", "2.0", "--seed", "3"])
    assert (cfg.beta, cfg.seed) == (2.0, 3)
    # the file overrides the environment
    monkeypatch.setenv("RWRS_SEED", "99")
    assert parse_config(["rwrs", "--config", str(config)]).seed == 17


def test_config_file_errors(tmp_path):
    bad_key = tmp_path / "bad_key.cfg"
    bad_key.write_text("hurts = 0.7\n")
    with pytest.raises(UsageError, match="unknown key"):
        parse_config(["walk", "--config", str(bad_key)])

    bad_line = tmp_path / "bad_line.cfg"
    bad_line.write_text("just some words\n")
    with pytest.raises(UsageError, match="key = value"):
        parse_config(["walk", "--config", str(bad_line)])

    with pytest.raises(UsageError, match="cannot read"):
        parse_config(["walk", "--config", str(tmp_path / "missing.cfg")])


def test_main_maps_numerical_failures_to_exit_2(monkeypatch):
    from rwrs import cli as cli_mod

    def boom(cfg):
        raise NumericalError("synthetic failure")

    monkeypatch.setitem(cli_mod._RUNNERS, "walk", boom)
    assert main(_FAST_WALK) == 2


# ---------------------------------------------------------------------------
# Subprocess behavior: exit codes and stream layout
# ---------------------------------------------------------------------------


def test_cli_usage_errors_exit_1():
    assert run_cli().returncode == 1
    proc = run_cli("walk", "--hurst", "1.2")
    assert proc.returncode == 1
    assert "error" in proc.stderr
    assert run_cli("schema", "--scenery", "pareto", "--beta", "2.0").returncode == 1


def test_cli_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert proc.stdout.startswith("rwrs ")


def test_cli_walk_csv_layout():
    proc = run_cli(*_FAST_WALK)
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[0].startswith("# rwrs ")
    header = [line for line in lines if line.startswith("# ") and "=" in line]
    keys = [line[2:].split("=", 1)[0] for line in header]
    assert keys == [
        "command", "hurst", "beta", "sigma", "n", "cn", "m", "bins", "replicates",
        "oracle_replicates", "times", "u", "seed", "scenery", "site_convention",
    ]
    assert "# command=walk" in lines
    assert "# n=64" in lines
    # runtime knobs never reach the header
    assert not any(k in ("output", "jobs", "assert_mode") for k in keys)
    column_line = lines[len(header) + 1]
    assert column_line == "replicate,s_n"
    data = lines[len(header) + 2 :]
    assert len(data) == 10
    for row in data:
        index, value = row.split(",")
        int(index)
        float(value)
    # human summary goes to stderr, CSV to stdout
    assert "Var(S_n)" in proc.stderr


def test_cli_sample_commands_emit_time_value_rows():
    for command, extra in (
        ("rwrs", ["--n", "64"]),
        ("schema", ["--n", "32", "--cn", "2"]),
        ("delta", ["--m", "64", "--bins", "16"]),
        ("gamma", ["--m", "64", "--bins", "16", "--cn", "2"]),
    ):
        proc = run_cli(command, "--replicates", "4", "--times", "0.5,1", *extra)
        assert proc.returncode == 0, proc.stderr
        lines = [l for l in proc.stdout.splitlines() if not l.startswith("#")]
        assert lines[0] == "replicate,t,value"
        assert len(lines) == 1 + 4 * 2
        assert lines[1].startswith("0,0.5,")


def test_cli_ks_stat_smoke():
    proc = run_cli(
        "ks-stat", "--n", "256", "--m", "256", "--bins", "32", "--replicates", "20"
    )
    assert proc.returncode == 0, proc.stderr
    lines = [l for l in proc.stdout.splitlines() if not l.startswith("#")]
    assert lines[0] == "replicate,x_n,x_limit"
    assert len(lines) == 21
    assert "KS =" in proc.stderr


def test_cli_scaling_csv_and_assert_pass():
    proc = run_cli("scaling", "--replicates", "50", "--assert")
    assert proc.returncode == 0, proc.stderr
    lines = [l for l in proc.stdout.splitlines() if not l.startswith("#")]
    assert lines[0] == "n,mean_Vn,se_Vn,mean_Rn,se_Rn,median_Ln_scaled"
    ns = [int(row.split(",")[0]) for row in lines[1:]]
    assert ns == sorted(set([2**k for k in range(8, 14)] + [2**14]))


def test_cli_ecf_check_assert_exit_codes():
    # far from the limit on purpose: n = 2 with a single copy fails the
    # 3-SE window, a near-default small run passes it
    failing = run_cli(
        "ecf-check", "--hurst", "0.7", "--beta", "1.0", "--n", "2", "--cn", "1",
        "--m", "128", "--bins", "32", "--replicates", "200",
        "--oracle-replicates", "100", "--assert",
    )
    assert failing.returncode == 3, failing.stderr
    passing = run_cli(
        "ecf-check", "--n", "256", "--cn", "8", "--m", "256", "--bins", "64",
        "--replicates", "150", "--oracle-replicates", "200", "--u", "0.5,1", "--assert",
    )
    assert passing.returncode == 0, passing.stderr
    lines = [l for l in passing.stdout.splitlines() if not l.startswith("#")]
    assert lines[0] == "u,ecf_re,ecf_se,target,z"
    assert len(lines) == 3


def test_cli_seed_sources_agree():
    via_env = run_cli(*_FAST_WALK, env_extra={"RWRS_SEED": "7"})
    via_flag = run_cli(*_FAST_WALK, "--seed", "7")
    flag_beats_env = run_cli(*_FAST_WALK, "--seed", "9", env_extra={"RWRS_SEED": "7"})
    plain_nine = run_cli(*_FAST_WALK, "--seed", "9")
    assert via_env.stdout == via_flag.stdout
    assert flag_beats_env.stdout == plain_nine.stdout
    assert via_flag.stdout != plain_nine.stdout


def test_cli_output_file_matches_stdout_bytes(tmp_path):
    target = tmp_path / "out.csv"
    to_stdout = run_cli("schema", "--n", "32", "--cn", "2", "--replicates", "6")
    to_file = run_cli(
        "schema", "--n", "32", "--cn", "2", "--replicates", "6", "--output", str(target)
    )
    assert to_file.returncode == 0
    assert target.read_text() == to_stdout.stdout
    # with --output the summary moves to stdout
    assert "schema:" in to_file.stdout


def test_cli_byte_identical_across_jobs():
    one = run_cli("schema", "--n", "32", "--cn", "2", "--replicates", "8", "--jobs", "1")
    two = run_cli("schema", "--n", "32", "--cn", "2", "--replicates", "8", "--jobs", "2")
    assert one.returncode == two.returncode == 0
    assert one.stdout == two.stdout
