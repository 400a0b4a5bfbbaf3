import json
import subprocess
import sys

import pytest

from qarith.circuit import clear_block_cache
from qarith.cli import CSV_HEADER, main
from qarith.analysis import log_grid


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_list_contains_expected_entries(capsys):
    code, out, _ = run_cli(["list"], capsys)
    assert code == 0
    assert "inplace_adder/TTK" in out
    assert "divider/NonRestoring+Gidney" in out
    code2, out2, _ = run_cli(["list"], capsys)
    assert out2 == out  # stable ordering


def test_verify_pass(capsys):
    code, out, _ = run_cli(
        ["verify", "--op-class", "inplace_adder", "--algo", "TTK", "--n-max", "4"],
        capsys,
    )
    assert code == 0
    assert out.count("PASS") == 4
    assert "FAIL" not in out


def test_verify_divider_and_modexp(capsys):
    code, out, _ = run_cli(
        ["verify", "--op-class", "divider", "--algo", "Restoring+TTK", "--n-max", "3"],
        capsys,
    )
    assert code == 0
    code, out, _ = run_cli(
        ["verify", "--op-class", "modexp", "--algo", "LYYWindowed(2)", "--n-max", "3"],
        capsys,
    )
    assert code == 0


def test_verify_unknown_algorithm_exits_2(capsys):
    code, _, err = run_cli(
        ["verify", "--op-class", "inplace_adder", "--algo", "Nope", "--n-max", "3"],
        capsys,
    )
    assert code == 2
    assert "error:" in err


def test_sweep_csv_schema(tmp_path, capsys):
    clear_block_cache()
    out_file = tmp_path / "adders.csv"
    code, _, _ = run_cli(
        [
            "sweep", "--op-class", "inplace_adder", "--algo", "TTK",
            "--n-min", "3", "--n-max", "16", "--out", str(out_file),
        ],
        capsys,
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) - 1 == len(log_grid(3, 16))
    # t_count non-decreasing in n for a ripple-carry adder
    tvals = [int(line.split(",")[4]) for line in lines[1:]]
    assert tvals == sorted(tvals)


def test_sweep_json_mirrors_csv(tmp_path, capsys):
    code, out, _ = run_cli(
        [
            "sweep", "--op-class", "inplace_adder", "--algo", "Gidney",
            "--n-min", "3", "--n-max", "8", "--format", "json",
        ],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert len(data) == len(log_grid(3, 8))
    assert list(data[0]) == CSV_HEADER.split(",")


def test_sweep_deterministic(tmp_path, capsys):
    args = [
        "sweep", "--op-class", "multiplier", "--algo", "Schoolbook",
        "--n-min", "3", "--n-max", "8",
    ]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2


def test_pareto_schema_and_frontier(capsys):
    code, out, _ = run_cli(
        ["pareto", "--op-class", "multiplier", "--algo", "Schoolbook", "--n", "16"],
        capsys,
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) >= 2
    runtimes = [float(line.split(",")[12]) for line in lines[1:]]
    qubits = [int(line.split(",")[11]) for line in lines[1:]]
    assert runtimes == sorted(runtimes)
    assert qubits == sorted(qubits, reverse=True)


def test_fit_slope_on_exact_power_law(tmp_path, capsys):
    csv_file = tmp_path / "exact.csv"
    rows = [CSV_HEADER]
    for n in (2, 4, 8, 16):
        rows.append(f"multiplier,Fake,{n},1,{n*n},0,0,0,1,1,3,1,1.0,1")
    csv_file.write_text("\n".join(rows) + "\n")
    code, out, _ = run_cli(["fit", "--input", str(csv_file), "--mode", "slope"], capsys)
    assert code == 0
    assert "slope=2.000000" in out


def test_fit_tipping(tmp_path, capsys):
    csv_file = tmp_path / "tip.csv"
    rows = [CSV_HEADER]
    for n, v in ((4, 100), (8, 400), (16, 1600)):
        rows.append(f"multiplier,A,{n},1,{v},0,0,0,1,1,3,1,1.0,1")
    for n, v in ((4, 200), (8, 390), (16, 900)):
        rows.append(f"multiplier,B,{n},1,{v},0,0,0,1,1,3,1,1.0,1")
    csv_file.write_text("\n".join(rows) + "\n")
    code, out, _ = run_cli(["fit", "--input", str(csv_file), "--mode", "tipping"], capsys)
    assert code == 0
    assert "n=8" in out


def test_fit_window_roundtrip_from_sweep(tmp_path, capsys):
    clear_block_cache()
    csv_file = tmp_path / "window.csv"
    code, _, _ = run_cli(
        [
            "sweep", "--op-class", "modexp",
            "--algo", "LYYWindowed(2)", "--algo", "LYYWindowed(4)",
            "--algo", "LYYWindowed(6)",
            "--n-min", "8", "--n-max", "16", "--out", str(csv_file),
        ],
        capsys,
    )
    assert code == 0
    code, out, _ = run_cli(["fit", "--input", str(csv_file), "--mode", "window"], capsys)
    assert code == 0
    assert "window model: c1=" in out
    assert "predicted optimal w=" in out


def test_fit_malformed_csv_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    code, _, err = run_cli(["fit", "--input", str(bad), "--mode", "slope"], capsys)
    assert code == 2
    assert "error:" in err


def test_verify_failure_exits_1(capsys, monkeypatch):
    from qarith import catalog as cat
    from qarith.catalog import VerifyReport

    def fake_verify_range(op, algo, n_max, seed):
        return [
            VerifyReport(op, algo, 2, 16, True),
            VerifyReport(op, algo, 3, 64, False, "register b = 0, want 1"),
        ]

    monkeypatch.setattr(cat, "verify_range", fake_verify_range)
    code, out, _ = run_cli(
        ["verify", "--op-class", "inplace_adder", "--algo", "TTK", "--n-max", "3"],
        capsys,
    )
    assert code == 1
    assert "FAIL inplace_adder/TTK n=3: register b = 0, want 1" in out


def test_cli_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "qarith.cli", "list"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "modexp/LYYWindowedOpt" in proc.stdout
