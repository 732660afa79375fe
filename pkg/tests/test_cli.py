"""End-to-end CLI contract: output formats round-trip the library values
bitwise, exit codes are stable, and checkpoint/resume equals the straight run."""

from __future__ import annotations

import json
import math
import os
import subprocess
import sys

import pytest

from zetacorr.correlation import (
    CorrKindPair,
    WeightedSumParams,
    correlation_checkpoints,
    weighted_theorem_sum,
)
from zetacorr.zeros import (
    EXPECTED_HEADER,
    load_zeros,
    reconstruct_liouville,
    reconstruct_mertens,
    sum_a,
    zero_sum_checkpoints,
    zero_sum_report,
)
from zetacorr.zeta import constants, k_series

MM = CorrKindPair.MOBIUS_MERTENS


def run_cli(*args, check=True, env=None, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "zetacorr.cli", *map(str, args)],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )
    if check:
        assert proc.returncode == 0, f"stderr: {proc.stderr}"
    return proc


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    lines = text.strip().split("\n")
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


@pytest.fixture(scope="module")
def subset_csv(zero_table, tmp_path_factory):
    """First 500 zeros re-serialized; %.17g round-trips every float."""
    path = tmp_path_factory.mktemp("zeros") / "zeros_500.csv"
    lines = [EXPECTED_HEADER]
    for i in range(500):
        zp = complex(zero_table.zeta_prime[i])
        lines.append(
            "%d,%.17g,%.17g,%.17g"
            % (i + 1, float(zero_table.gamma[i]), zp.real, zp.imag)
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# --- constants ----------------------------------------------------------------

def test_constants_output():
    proc = run_cli("constants")
    header, rows = parse_csv(proc.stdout)
    assert header == ["name", "value"]
    values = {name: float(text) for name, text in rows}
    c = constants()
    assert values["minus_three_over_pi_sq"] == c.minus_three_over_pi_sq
    assert values["zeta_half"] == c.zeta_half
    assert values["liouville_bias"] == c.liouville_bias
    assert values["k_series_1"] == c.k_series_1
    assert values["conditional_convergence_limit"] == 2.5 + c.k_series_1


# --- corr ----------------------------------------------------------------------

def test_corr_matches_engine_bitwise():
    proc = run_cli("corr", "--pair", "mobius-mertens", "--n-max", 1000,
                   "--stride", 200)
    header, rows = parse_csv(proc.stdout)
    assert header == ["n", "raw_sum", "normalized", "reference_line"]
    expected = list(correlation_checkpoints(MM, 1000, 200))
    assert len(rows) == len(expected)
    reference = constants().minus_three_over_pi_sq
    for row, cp in zip(rows, expected):
        assert int(row[0]) == cp.n
        assert float(row[1]) == cp.s_plain
        assert float(row[2]) == cp.normalized
        assert float(row[3]) == reference


def test_corr_kind_alias_and_bare_names():
    canonical = run_cli("corr", "--pair", "mobius-mertens", "--n-max", 500,
                        "--stride", 100)
    for flags in (("--pair", "mobius"), ("--kind", "mobius"),
                  ("--kind", "mobius-mertens")):
        proc = run_cli("corr", *flags, "--n-max", 500, "--stride", 100)
        assert proc.stdout == canonical.stdout


def test_corr_liouville_reference_line():
    proc = run_cli("corr", "--pair", "liouville", "--n-max", 300,
                   "--stride", 300)
    _, rows = parse_csv(proc.stdout)
    assert float(rows[0][3]) == constants().liouville_bias


def test_corr_reference_line_with_zero_table(zero_table, zeros_path):
    proc = run_cli("corr", "--pair", "mobius", "--n-max", 200, "--stride", 200,
                   "--zeros", zeros_path)
    _, rows = parse_csv(proc.stdout)
    expected = constants().minus_three_over_pi_sq + sum_a(
        zero_table, float(zero_table.gamma[-1]) + 1.0
    )
    assert float(rows[0][3]) == expected
    assert float(rows[0][3]) == pytest.approx(-0.28944795350030422, abs=1e-15)


def test_corr_json_mirrors_csv():
    args = ("corr", "--pair", "liouville", "--n-max", 600, "--stride", 200)
    csv_proc = run_cli(*args)
    json_proc = run_cli(*args, "--format", "json")
    _, rows = parse_csv(csv_proc.stdout)
    objects = json.loads(json_proc.stdout)
    assert len(objects) == len(rows)
    for obj, row in zip(objects, rows):
        assert list(obj) == ["n", "raw_sum", "normalized", "reference_line"]
        assert obj["n"] == int(row[0])
        assert obj["raw_sum"] == float(row[1])
        assert obj["normalized"] == float(row[2])
        assert obj["reference_line"] == float(row[3])


def test_corr_normalized_is_nan_at_one():
    proc = run_cli("corr", "--pair", "mobius", "--n-max", 3, "--stride", 1)
    _, rows = parse_csv(proc.stdout)
    assert int(rows[0][0]) == 1
    assert math.isnan(float(rows[0][2]))
    assert not math.isnan(float(rows[1][2]))


def test_corr_weighted_stderr_line():
    proc = run_cli("corr", "--pair", "mobius", "--n-max", 100, "--stride", 100,
                   "--delta", 0.5)
    line = [l for l in proc.stderr.splitlines() if l.startswith("weighted sum:")]
    assert len(line) == 1
    assert "(delta=0.5, n_max=100)" in line[0]
    reported = float(line[0].split("weighted sum:")[1].split("(")[0])
    assert reported == weighted_theorem_sum(MM, WeightedSumParams(100, 0.5))


def test_corr_derived_parameters():
    proc = run_cli("corr", "--pair", "mobius", "--c", 0.5,
                   "--t-height", 1000000)
    _, rows = parse_csv(proc.stdout)
    assert int(rows[-1][0]) == 1000
    line = [l for l in proc.stderr.splitlines() if l.startswith("weighted sum:")]
    assert len(line) == 1
    assert "(delta=0.001, n_max=1000)" in line[0]
    reported = float(line[0].split("weighted sum:")[1].split("(")[0])
    assert reported == weighted_theorem_sum(
        MM, WeightedSumParams.from_height(0.5, 1e6)
    )


def test_corr_output_file_matches_stdout(tmp_path):
    args = ("corr", "--pair", "liouville", "--n-max", 400, "--stride", 100)
    direct = run_cli(*args)
    out = tmp_path / "corr.csv"
    filed = run_cli(*args, "--out", out)
    assert filed.stdout == ""
    assert out.read_text() == direct.stdout


# --- corr usage errors ----------------------------------------------------------

@pytest.mark.parametrize(
    "args, needle",
    [
        (("corr", "--pair", "mobius"), "need --n-max"),
        (("corr", "--pair", "mobius", "--n-max", "1"),
         "normalization is undefined"),
        (("corr", "--pair", "mobius", "--c", "0.5"), "given together"),
        (("corr", "--pair", "mobius", "--c", "0.5", "--t-height", "100",
          "--n-max", "50"), "conflicts"),
        (("corr", "--pair", "mobius", "--n-max", "100", "--resume"),
         "needs --checkpoint"),
        (("reconstruct", "--zeros", "x.csv", "--which", "mertens",
          "--n-min", "0"), "1 <= n-min"),
    ],
)
def test_usage_errors_exit_two(args, needle):
    proc = run_cli(*args, check=False)
    assert proc.returncode == 2
    assert needle in proc.stderr


def test_argparse_errors_exit_two():
    assert run_cli("frobnicate", check=False).returncode == 2
    assert run_cli("corr", "--pair", "bogus", "--n-max", "10",
                   check=False).returncode == 2


def test_missing_zero_table_exits_one(tmp_path):
    missing = tmp_path / "nope.csv"
    proc = run_cli("zerosums", "--zeros", missing, check=False)
    assert proc.returncode == 1
    proc = run_cli("corr", "--pair", "mobius", "--n-max", 100, "--stride", 100,
                   "--zeros", missing, check=False)
    assert proc.returncode == 1


def test_malformed_zero_table_exits_one(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("index,gamma\n1,14.1\n")
    proc = run_cli("zerosums", "--zeros", bad, check=False)
    assert proc.returncode == 1
    assert "unexpected header" in proc.stderr


# --- zerosums --------------------------------------------------------------------

def test_zerosums_single_height(zero_table, zeros_path):
    proc = run_cli("zerosums", "--zeros", zeros_path, "--t", 1000)
    header, rows = parse_csv(proc.stdout)
    assert header == ["t", "count", "sum_A", "sum_B", "sum_C", "J_minus_1"]
    assert len(rows) == 1
    report = zero_sum_report(zero_table, 1000.0)
    row = rows[0]
    assert float(row[0]) == report.t
    assert int(row[1]) == report.count
    assert float(row[2]) == report.sum_a
    assert float(row[3]) == report.sum_b
    assert float(row[4]) == report.sum_c
    assert float(row[5]) == report.j_minus_1
    assert f"100000 records, fnv1a64 {zero_table.source_digest}" in proc.stderr


def test_zerosums_checkpoint_grid(subset_csv):
    proc = run_cli("zerosums", "--zeros", subset_csv, "--every", 200)
    _, rows = parse_csv(proc.stdout)
    table = load_zeros(subset_csv)
    expected = list(zero_sum_checkpoints(table, every=200))
    assert [int(r[1]) for r in rows] == [e.count for e in expected] == [
        200, 400, 500
    ]
    for row, rep in zip(rows, expected):
        assert float(row[0]) == rep.t
        assert float(row[2]) == rep.sum_a
        assert float(row[3]) == rep.sum_b
        assert float(row[4]) == rep.sum_c
        assert float(row[5]) == rep.j_minus_1


def test_zerosums_json_field_names(subset_csv):
    proc = run_cli("zerosums", "--zeros", subset_csv, "--t", 100,
                   "--format", "json")
    objects = json.loads(proc.stdout)
    assert len(objects) == 1
    assert list(objects[0]) == ["t", "count", "sum_A", "sum_B", "sum_C",
                                "J_minus_1"]


def test_zeros_search_root_environment(subset_csv, tmp_path):
    env = {**os.environ, "ZETACORR_DATA_DIR": str(subset_csv.parent)}
    proc = run_cli("zerosums", "--zeros", subset_csv.name, "--t", 100,
                   env=env, cwd=tmp_path)
    assert str(subset_csv) in proc.stderr
    # without the variable the bare name cannot resolve
    bare_env = {k: v for k, v in os.environ.items() if k != "ZETACORR_DATA_DIR"}
    proc = run_cli("zerosums", "--zeros", subset_csv.name, "--t", 100,
                   env=bare_env, cwd=tmp_path, check=False)
    assert proc.returncode == 1


# --- reconstruct ------------------------------------------------------------------

def test_reconstruct_mertens_cli(zero_table, zeros_path):
    proc = run_cli("reconstruct", "--zeros", zeros_path, "--which", "mertens",
                   "--n-min", 2, "--n-max", 12, "--t", 1000)
    header, rows = parse_csv(proc.stdout)
    assert header == ["n", "reconstructed", "exact", "abs_err"]
    mertens = {1: 1, 2: 0, 3: -1, 4: -1, 5: -2, 6: -1, 7: -2, 8: -2, 9: -2,
               10: -1, 11: -2}
    for row in rows:
        n = int(row[0])
        value = reconstruct_mertens(n, zero_table, 1000.0)
        assert float(row[1]) == value
        assert int(row[2]) == mertens[n - 1]
        assert float(row[3]) == abs(value - mertens[n - 1])


def test_reconstruct_liouville_cli(subset_csv):
    proc = run_cli("reconstruct", "--zeros", subset_csv, "--which", "liouville",
                   "--n-min", 2, "--n-max", 8)
    _, rows = parse_csv(proc.stdout)
    table = load_zeros(subset_csv)
    t_default = float(table.gamma[-1]) + 1.0
    liouville = {1: 1, 2: 0, 3: -1, 4: 0, 5: -1, 6: 0, 7: -1}
    for row in rows:
        n = int(row[0])
        assert float(row[1]) == reconstruct_liouville(n, table, t_default)
        assert int(row[2]) == liouville[n - 1]


# --- sieve -----------------------------------------------------------------------

def test_sieve_cli_values():
    proc = run_cli("sieve", "--kind", "mobius", "--n-max", 10, "--stride", 1)
    header, rows = parse_csv(proc.stdout)
    assert header == ["n", "value", "summatory"]
    values = [int(r[1]) for r in rows]
    assert values == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    sums = [int(r[2]) for r in rows]
    assert sums == [1, 0, -1, -1, -2, -1, -2, -2, -2, -1]


# --- selftest ----------------------------------------------------------------------

def test_selftest_passes():
    proc = run_cli("selftest")
    assert "selftest passed" in proc.stdout
    assert all(
        line.startswith("ok ")
        for line in proc.stdout.splitlines()
        if line and not line.startswith("selftest")
    )


# --- checkpoint / resume -------------------------------------------------------------

def test_checkpoint_resume_matches_straight_run(tmp_path):
    base = ("corr", "--pair", "mobius-mertens", "--stride", 250000)
    full = run_cli(*base, "--n-max", 2000000)
    cp_file = tmp_path / "state.json"
    head = run_cli(*base, "--n-max", 1000000, "--checkpoint", cp_file)
    state = json.loads(cp_file.read_text())
    assert state["schema"] == "zetacorr-corr-checkpoint-1"
    assert state["n"] == 1000000
    assert state["pair"] == "mobius-mertens"
    tail = run_cli(*base, "--n-max", 2000000, "--checkpoint", cp_file,
                   "--resume")
    _, full_rows = parse_csv(full.stdout)
    _, head_rows = parse_csv(head.stdout)
    _, tail_rows = parse_csv(tail.stdout)
    assert head_rows + tail_rows == full_rows
    assert json.loads(cp_file.read_text())["n"] == 2000000


def test_checkpoint_config_mismatch_refuses(tmp_path):
    cp_file = tmp_path / "state.json"
    run_cli("corr", "--pair", "mobius", "--n-max", 100000, "--stride", 50000,
            "--checkpoint", cp_file)
    proc = run_cli("corr", "--pair", "mobius", "--n-max", 200000, "--stride",
                   25000, "--checkpoint", cp_file, "--resume", check=False)
    assert proc.returncode == 1
    assert "different configuration" in proc.stderr


def test_thread_count_does_not_change_output():
    base = ("corr", "--pair", "liouville", "--n-max", 1000000,
            "--stride", 250000)
    one = run_cli(*base, "--threads", 1)
    eight = run_cli(*base, "--threads", 8)
    assert one.stdout == eight.stdout
