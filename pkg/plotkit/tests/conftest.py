import subprocess
import sys

import pytest

# plotkit consumes the robot toolkit only through its command line and the
# CSV files it writes; nothing here imports pipir


def emit(args, path):
    proc = subprocess.run([sys.executable, "-m", "pipir", *args, "--out", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return path


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("maps")
    emit(["jsmap", "--mode", "1", "--res", "64"], root / "js1.csv")
    emit(["jsmap", "--mode", "2", "--res", "128"], root / "js2.csv")
    emit(["wsmap", "--mode", "3", "--res", "96"], root / "ws3.csv")
    emit(["wsmap", "--mode", "4", "--res", "96"], root / "ws4.csv")
    emit(["transitions", "--res", "96"], root / "transitions.csv")
    return root
