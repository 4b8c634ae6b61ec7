"""Figure scripts run from the shipped sample tables without touching physics."""
import os
import subprocess
import sys

import pytest

HERE = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCRIPT = os.path.join(HERE, "render_figures.py")
SAMPLES = os.path.join(HERE, "sample_data")


def render(figure, input_dir, output_path):
    return subprocess.run(
        [sys.executable, SCRIPT, figure, input_dir, str(output_path)],
        capture_output=True, text=True)


@pytest.mark.parametrize("figure,sample", [
    ("dtc", "dtc_fine_tuned"),
    ("dtc", "dtc_generic"),
    ("braid", "braid_fine_tuned"),
    ("braid", "braid_deformed"),
    ("sweep", "sweep_mu2"),
    ("sweep", "sweep_bonds"),
])
def test_panels_render_from_shipped_samples(figure, sample, tmp_path):
    out = tmp_path / ("%s_%s.png" % (figure, sample))
    proc = render(figure, os.path.join(SAMPLES, sample), out)
    assert proc.returncode == 0, proc.stderr
    assert out.exists() and out.stat().st_size > 5000


def test_missing_column_is_reported(tmp_path):
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "z_series.tsv").write_text("n\tnot_Z\n0\t1.0\n")
    (bad / "power_spectrum.tsv").write_text("omega_T\tmagnitude_sq\n0\t1.0\n")
    proc = render("dtc", str(bad), tmp_path / "x.png")
    assert proc.returncode != 0
    assert "Z" in proc.stderr


def test_empty_table_is_reported(tmp_path):
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "correlations.tsv").write_text("")
    proc = render("braid", str(bad), tmp_path / "x.png")
    assert proc.returncode != 0
    assert "correlations.tsv" in proc.stderr


def test_missing_file_is_reported(tmp_path):
    proc = render("sweep", str(tmp_path), tmp_path / "x.png")
    assert proc.returncode != 0
    assert "spectrum.tsv" in proc.stderr


def test_rendering_identical_data_twice(tmp_path):
    # read-only over inputs; plotted data identical across invocations
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    src = os.path.join(SAMPLES, "dtc_fine_tuned")
    before = sorted(os.listdir(src))
    assert render("dtc", src, a).returncode == 0
    assert render("dtc", src, b).returncode == 0
    assert sorted(os.listdir(src)) == before
    assert a.stat().st_size > 0 and b.stat().st_size > 0
