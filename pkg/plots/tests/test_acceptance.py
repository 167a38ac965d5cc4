"""End-to-end check against a real sweep produced by the rigepi CLI."""

import csv
import subprocess
import sys

import pytest

from rigplots.cli import main


@pytest.fixture(scope="module")
def sweep_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    proc = subprocess.run(
        [sys.executable, "-m", "rigepi", "sweep", "--mu", "4",
         "--p", "0.2,0.3,0.5", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out


def test_figure1_from_real_sweep(sweep_dir, tmp_path):
    out = tmp_path / "fig1.png"
    assert main(["figure1", str(sweep_dir / "figure1.csv"), "-o", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0

    with open(sweep_dir / "figure1.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    p_values = {row["p"] for row in rows}
    assert len(p_values) == 3  # three curves per panel
    mu = float(rows[0]["mu"])
    for p in p_values:
        series = [r for r in rows if r["p"] == p]
        right_edge = max(series, key=lambda r: float(r["c"]))
        assert abs(float(right_edge["R0"]) - mu) <= 0.02 * mu


def test_malformed_csv_nonzero_exit(tmp_path, capsys):
    bad = tmp_path / "figure1.csv"
    bad.write_text("c,p\n")
    assert main(["figure1", str(bad), "-o", str(tmp_path / "x.png")]) != 0
    assert capsys.readouterr().err.startswith("error:")
