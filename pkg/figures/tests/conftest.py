import subprocess
import sys
from pathlib import Path

import pytest

FIGDIR = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(FIGDIR))


@pytest.fixture(scope="session")
def figure_data(tmp_path_factory) -> Path:
    """Figure CSVs produced through the CLI (the only interface the
    figure scripts depend on), at smoke scale."""
    out = tmp_path_factory.mktemp("figdata")
    cmd = [
        sys.executable, "-m", "fbm2d.cli", "figures-data",
        "--out", str(out), "--n", "256", "--num-traj", "64", "--seed", "20250809",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out


def run_script(name: str, argv: list[str]) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, str(FIGDIR / name), *argv], capture_output=True, text=True
    )
