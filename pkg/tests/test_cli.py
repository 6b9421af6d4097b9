import math
import subprocess
import sys

import pytest

from pipir.cli import load_config, run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ik_home_line(capsys):
    code, out, err = invoke(capsys, "ik", "--mode", "1", "--pose", "0,0,0,0", "--wm", "+++")
    assert code == 0
    assert out == "0.988686,0.988686,0.600000\n"


def test_ik_all_working_modes(capsys):
    code, out, _ = invoke(capsys, "ik", "--mode", "1", "--pose", "0,0,0,0", "--wm", "all")
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 8
    assert lines[0].startswith("---,")
    assert lines[-1].startswith("+++,")


def test_ik_unreachable_exit_code(capsys):
    code, out, err = invoke(capsys, "ik", "--mode", "1", "--pose", "2,0,0,0")
    assert code == 3
    assert out == ""
    assert "unreachable" in err


def test_usage_errors(capsys):
    assert invoke(capsys, "ik", "--mode", "7", "--pose", "0,0,0,0")[0] == 2
    code, _, err = invoke(capsys, "ik", "--mode", "1", "--pose", "a,b,c,d")
    assert code == 2 and "malformed" in err
    assert invoke(capsys, "ik", "--mode", "1", "--pose", "0,0,0")[0] == 2
    assert invoke(capsys, "ik", "--mode", "1", "--pose", "0,0,0,0", "--wm", "++")[0] == 2
    assert invoke(capsys, "nonsense")[0] == 2
    # inactive coordinate moved
    assert invoke(capsys, "ik", "--mode", "2", "--pose", "0,0,0.5,0")[0] == 2


def test_fk_round_trip_through_text(capsys):
    code, out, _ = invoke(capsys, "ik", "--mode", "2", "--pose", "0.1,0.2,0,0.4",
                          "--wm", "+-+", "--digits", "12")
    assert code == 0
    joints = out.strip()
    code, out, _ = invoke(capsys, "fk", "--mode", "2", "--joints", joints, "--digits", "12")
    assert code == 0
    rows = [line.split(",") for line in out.strip().split("\n")]
    poses = [(float(r[1]), float(r[2]), float(r[3]), float(r[4])) for r in rows]
    hit = min(poses, key=lambda p: abs(p[0] - 0.1) + abs(p[1] - 0.2) + abs(p[3] - 0.4))
    assert hit[0] == pytest.approx(0.1, abs=1e-8)
    assert hit[1] == pytest.approx(0.2, abs=1e-8)
    assert hit[3] == pytest.approx(0.4, abs=1e-8)
    sigma = [r[0] for r in rows if (float(r[1]), float(r[2]), float(r[3]), float(r[4])) == hit]
    assert sigma == ["+-+"]


def test_fk_empty_exit_code(capsys):
    code, _, err = invoke(capsys, "fk", "--mode", "3", "--joints", "10,-10,0")
    assert code == 3
    assert "no assembly" in err


def test_degrees_flag(capsys):
    _, out_rad, _ = invoke(capsys, "ik", "--mode", "2", "--pose", f"0.1,0,0,{math.pi/4}")
    _, out_deg, _ = invoke(capsys, "ik", "--mode", "2", "--pose", "0.1,0,0,45", "--degrees")
    assert out_rad == out_deg


def test_singular_output(capsys):
    code, out, _ = invoke(capsys, "singular", "--mode", "1", "--pose", "0,0,0,0")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "kind: regular"
    assert lines[1].startswith("detA: 1.898277")
    assert lines[2].startswith("B: 1.977371993,1.977371993,1.2")


def test_singular_serial(capsys):
    # working modes with a leading minus need the --wm=... spelling
    code, out, _ = invoke(capsys, "singular", "--mode", "1", "--pose", "0.45,0,0.8,0",
                          "--wm=-++")
    assert code == 0
    assert "kind: serial" in out
    assert "serial legs: 1" in out


def test_jsmap_csv_shape(capsys):
    code, out, _ = invoke(capsys, "jsmap", "--mode", "1", "--res", "16")
    assert code == 0
    lines = out.strip().split("\n")
    header = [ln for ln in lines if not ln.startswith("#")]
    assert header[0] == "rho2,rho3,n_fk"
    assert len(header) - 1 == 256
    assert any(ln == "# mode=1" for ln in lines)
    assert any(ln.startswith("# res1=16") for ln in lines)


def test_wsmap_csv_schema_and_determinism(capsys):
    code, out1, _ = invoke(capsys, "wsmap", "--mode", "2", "--res", "32")
    assert code == 0
    code, out2, _ = invoke(capsys, "wsmap", "--mode", "2", "--res", "32")
    assert out1 == out2
    code, out4, _ = invoke(capsys, "wsmap", "--mode", "2", "--res", "32", "--threads", "4")
    assert out1 == out4
    lines = out1.strip().split("\n")
    data = [ln for ln in lines if not ln.startswith("#")]
    assert data[0] == "coord1,coord2,feasible,detA_sign,aspect_id"
    assert len(data) - 1 == 32 * 32
    assert any(ln == "# sigma=+++" for ln in lines)


def test_transitions_text_and_csv(capsys, tmp_path):
    out_csv = tmp_path / "transitions.csv"
    code = run(["transitions", "--res", "128", "--out", str(out_csv)])
    captured = capsys.readouterr()
    assert code == 0
    assert "mode 2: boundary x = -0.2250000000" in captured.out
    assert "mode 3: no boundary on the home line" in captured.out
    assert "mode 4: boundary z = 0.3977243258" in captured.out
    text = out_csv.read_text()
    assert "# mode2_boundaries=-0.2250000000" in text
    assert "mode,axis,t,aspect_id" in text


def test_transitions_compat_preset(capsys):
    code, out, _ = invoke(capsys, "transitions", "--res", "128", "--preset", "paper-ik-mode4")
    assert code == 0
    assert "mode 4: boundary z = 0.4054484815" in out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out" / "map.csv"
    code = run(["jsmap", "--mode", "1", "--res", "8", "--out", str(path)])
    capsys.readouterr()
    assert code == 0
    assert path.exists()
    assert path.read_text().strip().split("\n")[-1].count(",") == 2


def test_config_file_and_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "robot.cfg"
    cfg.write_text("# comment line\nd1 = 0.5\npreset = paper-ik-mode4\njs_res = 8\n")
    loaded = load_config(cfg)
    assert loaded.preset == "paper-ik-mode4"
    assert loaded.js_res == 8
    monkeypatch.setenv("PIPIR_CONFIG", str(cfg))
    code, out, _ = invoke(capsys, "jsmap", "--mode", "1")
    assert code == 0
    assert "# preset=paper-ik-mode4" in out
    assert "# res1=8" in out


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nope = 3\n")
    with pytest.raises(Exception):
        load_config(cfg)
    code, _, err = invoke(capsys, "--config", str(cfg), "ik", "--mode", "1",
                          "--pose", "0,0,0,0")
    assert code == 2
    assert "unknown config key" in err


def test_config_outdir(tmp_path, capsys):
    cfg = tmp_path / "robot.cfg"
    cfg.write_text(f"outdir = {tmp_path / 'maps'}\n")
    code = run(["--config", str(cfg), "jsmap", "--mode", "1", "--res", "8"])
    capsys.readouterr()
    assert code == 0
    assert (tmp_path / "maps" / "jsmap-mode1.csv").exists()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pipir", "ik", "--mode", "1", "--pose", "0,0,0,0"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "0.988686,0.988686,0.600000\n"
