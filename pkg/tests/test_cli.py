"""Command-line interface: subcommands, formats, exit codes, determinism."""

import json
import os

import numpy as np
import pytest

import diffmag.cli as cli
from diffmag.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bounds_json(capsys):
    code, out, _ = run_cli(
        capsys, "bounds", "--na", "4", "--nb", "4", "--state", "flipped-dicke"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["na"] == 4 and payload["nb"] == 4
    assert abs(payload["bound_b1"] - 40.0) < 1e-10


def test_table1_json_and_csv(capsys):
    code, out, _ = run_cli(capsys, "table1", "--na", "2", "--nb", "4")
    assert code == EXIT_OK
    payload = json.loads(out)
    rows = payload["rows"]
    assert len(rows) == 16
    assert payload["max_abs_diff"] < 1e-10
    for row in rows:
        assert row["abs_diff"] < 1e-10

    code, out, _ = run_cli(capsys, "table1", "--na", "2", "--nb", "4", "--format", "csv")
    assert code == EXIT_OK
    header = out.splitlines()[0].split(",")
    assert "state" in header


def test_polytope_payload_schema(capsys):
    code, out, _ = run_cli(
        capsys, "polytope", "--na", "4", "--nb", "4", "--state", "flipped-dicke"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["state"] == "flipped-dicke"
    assert len(payload["halfspaces"]) == 13
    assert payload["saturated"] == ["plane:xy|z"]
    assert len(payload["state_point"]) == 3
    assert all(len(v) == 3 for v in payload["vertices"])


def test_optmeas_block_payload(capsys):
    code, out, _ = run_cli(capsys, "optmeas", "--na", "2", "--nb", "2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["block_diagonal"] is True
    assert abs(payload["precision"] - 12.0) < 1e-8
    assert [b["size"] for b in payload["blocks"]] == [1, 2, 3, 2, 1]


def test_optmeas_uneven_split_reports_no_blocks(capsys):
    code, out, _ = run_cli(capsys, "optmeas", "--na", "2", "--nb", "4")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["block_diagonal"] is False
    assert payload["blocks"] == []
    assert abs(payload["precision"] - 32.0 / 3.0) < 1e-8


def test_montecarlo_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "montecarlo",
        "--na", "2", "--nb", "2",
        "--b1", "0.01",
        "--nu", "2000",
        "--seed", "7",
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["rng"] == "pcg64"
    assert abs(payload["empirical_inv_var"] - 12.0) < 2.0


def test_moments_sweep(capsys):
    code, out, _ = run_cli(capsys, "moments", "--max-n", "8")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert [(r["na"], r["nb"]) for r in rows] == [(2, 2), (3, 3), (4, 4)]
    assert abs(rows[-1]["ratio"] - 25.0 / 49.0) < 1e-12


def test_verify_passes(capsys):
    code, out, err = run_cli(capsys, "verify", "--max-n", "6")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["pass"] is True
    assert payload["max_discrepancy"] < 1e-9
    assert "checks" in err


def test_verify_mismatch_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "suite_max_discrepancy", lambda checks: 1.0)
    code, _, err = run_cli(capsys, "verify", "--max-n", "4")
    assert code == EXIT_MISMATCH
    assert "consistency" in err


def test_figures_writes_all_payloads(capsys, tmp_path):
    out_dir = tmp_path / "figs"
    code, _, err = run_cli(capsys, "figures", "--out-dir", str(out_dir))
    assert code == EXIT_OK
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == [
        "fig1a.json",
        "fig1b.json",
        "fig1c.json",
        "fig1d.json",
        "fig3a.json",
        "fig3b.json",
    ]
    fig3b = json.loads((out_dir / "fig3b.json").read_text())
    assert fig3b["na"] == 4 and fig3b["nb"] == 4
    assert len(fig3b["blocks"]) == 9
    fig1c = json.loads((out_dir / "fig1c.json").read_text())
    assert fig1c["state"] == "flipped-dicke"


def test_output_dir_env_redirects_relative_paths(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("DIFFMAG_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run_cli(
        capsys,
        "bounds", "--na", "2", "--nb", "2", "--state", "dicke", "--out", "bounds.json",
    )
    assert code == EXIT_OK
    assert out == ""
    payload = json.loads((tmp_path / "bounds.json").read_text())
    assert payload["na"] == 2


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bounds", "--na", "2", "--nb", "2"])  # missing --state
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == EXIT_USAGE


def test_domain_errors_exit_one(capsys):
    code, _, err = run_cli(capsys, "bounds", "--na", "0", "--nb", "2", "--state", "dicke")
    assert code == EXIT_USAGE
    assert "error" in err


def test_repeated_runs_are_byte_identical(capsys):
    _, out1, _ = run_cli(capsys, "table1", "--na", "4", "--nb", "4")
    _, out2, _ = run_cli(capsys, "table1", "--na", "4", "--nb", "4")
    assert out1 == out2
    _, out3, _ = run_cli(
        capsys,
        "montecarlo", "--na", "2", "--nb", "2", "--b1", "0.01", "--nu", "500", "--seed", "3",
    )
    _, out4, _ = run_cli(
        capsys,
        "montecarlo", "--na", "2", "--nb", "2", "--b1", "0.01", "--nu", "500", "--seed", "3",
    )
    assert out3 == out4
