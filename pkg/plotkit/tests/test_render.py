import numpy as np
import pytest
from PIL import Image

from plotkit.cli import run
from plotkit.render import (ASPECT_PALETTE, JS_COLORS, render_jointspace,
                            render_transitions, render_workspace)


def pixels(path):
    return np.asarray(Image.open(path).convert("RGB"))


def color_mask(img, color):
    return (img == np.array(color, dtype=np.uint8)).all(axis=-1)


def test_jointspace_render_colors(csv_dir, tmp_path):
    out = tmp_path / "js2.png"
    render_jointspace(csv_dir / "js2.csv", out)
    img = pixels(out)
    assert color_mask(img, JS_COLORS[2]).sum() > 500
    assert color_mask(img, JS_COLORS[4]).sum() > 500


def test_jointspace_mode1_single_color_class(csv_dir, tmp_path):
    out = tmp_path / "js1.png"
    render_jointspace(csv_dir / "js1.csv", out)
    img = pixels(out)
    assert color_mask(img, JS_COLORS[2]).sum() > 500
    assert color_mask(img, JS_COLORS[4]).sum() == 0


def test_workspace_render_aspect_colors(csv_dir, tmp_path):
    out = tmp_path / "ws3.png"
    render_workspace(csv_dir / "ws3.csv", out)
    img = pixels(out)
    # mode 3 has two aspects: the first two palette entries must both appear
    assert color_mask(img, ASPECT_PALETTE[0]).sum() > 500
    assert color_mask(img, ASPECT_PALETTE[1]).sum() > 500
    assert color_mask(img, ASPECT_PALETTE[2]).sum() == 0


def test_workspace_fallback_to_det_sign(tmp_path, csv_dir):
    # strip the aspect column: the renderer falls back to det-sign shading
    text = (csv_dir / "ws4.csv").read_text()
    lines = text.strip().split("\n")
    out_lines = []
    for line in lines:
        if line.startswith("#"):
            out_lines.append(line)
        elif line.startswith("coord1"):
            out_lines.append("coord1,coord2,feasible,detA_sign")
        else:
            out_lines.append(line.rsplit(",", 1)[0])
    stripped = tmp_path / "ws4-stripped.csv"
    stripped.write_text("\n".join(out_lines) + "\n")
    out = tmp_path / "ws4.png"
    render_workspace(stripped, out)
    img = pixels(out)
    assert color_mask(img, ASPECT_PALETTE[0]).sum() > 500
    assert color_mask(img, ASPECT_PALETTE[1]).sum() > 500


def test_transitions_render(csv_dir, tmp_path):
    out = tmp_path / "transitions.png"
    render_transitions(csv_dir / "transitions.csv", out)
    img = pixels(out)
    assert color_mask(img, ASPECT_PALETTE[0]).sum() > 100


def test_schema_mismatch(csv_dir, tmp_path):
    with pytest.raises(Exception):
        render_jointspace(csv_dir / "ws3.csv", tmp_path / "x.png")
    with pytest.raises(Exception):
        render_workspace(csv_dir / "js1.csv", tmp_path / "x.png")


def test_empty_jointspace_warns(tmp_path, capsys):
    lines = ["# kind=jointspace", "# mode=1", "# res1=4", "# res2=4",
             "# min1=-1", "# max1=1", "# min2=-1", "# max2=1",
             "rho2,rho3,n_fk"]
    step = 0.5
    for i in range(4):
        for j in range(4):
            lines.append(f"{-1 + (i + 0.5) * step},{-1 + (j + 0.5) * step},0")
    src = tmp_path / "empty.csv"
    src.write_text("\n".join(lines) + "\n")
    out = tmp_path / "empty.png"
    render_jointspace(src, out)
    assert out.exists()
    assert "no reachable cells" in capsys.readouterr().err


def test_cli_usage_and_errors(tmp_path, capsys):
    assert run([]) == 2
    assert run(["nope", "a", "b"]) == 2
    missing = tmp_path / "missing.csv"
    assert run(["jointspace", str(missing), str(tmp_path / "x.png")]) == 1
    empty = tmp_path / "empty.csv"
    empty.write_text("# kind=transitions\nmode,axis,t,aspect_id\n")
    assert run(["transitions", str(empty), str(tmp_path / "x.png")]) == 1
    capsys.readouterr()


def test_cli_renders(csv_dir, tmp_path):
    out = tmp_path / "cli.png"
    assert run(["workspace", str(csv_dir / "ws4.csv"), str(out)]) == 0
    assert out.exists()
