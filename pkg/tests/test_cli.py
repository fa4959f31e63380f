"""Command-line interface: subcommands, exit codes, output files."""

from __future__ import annotations

import numpy as np

from ddr2d.cli import main


def test_usage_error_exit_code(capsys):
    assert main(["mesh"]) == 2 or main(["bogus"]) == 2
    capsys.readouterr()


def test_missing_required_flag_is_usage_error(capsys):
    assert main(["mesh", "gen", "--family", "cartesian"]) == 2
    capsys.readouterr()


def test_dofs_table(capsys):
    assert main(["dofs", "table", "--shape", "triangle", "--k", "1"]) == 0
    out = capsys.readouterr().out
    assert "15/14" in out          # middle space on a triangle at k=1


def test_mesh_gen_writes_file(tmp_path, capsys):
    out = tmp_path / "mesh.json"
    assert main(["mesh", "gen", "--family", "cartesian", "--n", "2",
                 "--out", str(out)]) == 0
    assert out.exists()
    assert "n_elements=4" in capsys.readouterr().out


def test_verify_exactness_passes(capsys):
    assert main(["verify", "exactness", "--family", "cartesian",
                 "--n", "1", "--k", "0"]) == 0
    capsys.readouterr()


def test_verify_commutation_passes(capsys):
    assert main(["verify", "commutation", "--family", "triangular",
                 "--n", "2", "--k", "0"]) == 0
    capsys.readouterr()


def test_convergence_writes_csv_and_rates(tmp_path, capsys):
    out = tmp_path / "run.csv"
    assert main(["convergence", "--family", "cartesian", "--k", "0",
                 "--n", "2,4", "--out", str(out)]) == 0
    capsys.readouterr()
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 3
    rates = (tmp_path / "run.csv.rates").read_text().strip().split("\n")
    assert len(rates) == 2


def test_thread_flag_determinism(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["--threads", "1", "convergence", "--family", "cartesian",
                 "--k", "0", "--n", "1,2", "--out", str(a)]) == 0
    assert main(["--threads", "4", "convergence", "--family", "cartesian",
                 "--k", "0", "--n", "1,2", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
