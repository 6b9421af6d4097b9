"""Secondary acceptance: the rendered mode-2 joint-space figure reproduces
the published region structure, and rendering is deterministic."""

import numpy as np
from PIL import Image
from scipy import ndimage

from plotkit.render import JS_COLORS, render_jointspace

S8 = np.ones((3, 3), dtype=bool)
S4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def _pixel_regions_and_holes(img: np.ndarray):
    """Count 8-connected regions of the solution-count color classes and the
    non-class components they fully enclose (4-connected background)."""
    classes = np.zeros(img.shape[:2], dtype=bool)
    for color in (JS_COLORS[2], JS_COLORS[4]):
        classes |= (img == np.array(color, dtype=np.uint8)).all(axis=-1)
    _, n_regions = ndimage.label(classes, structure=S8)
    background, n_bg = ndimage.label(~classes, structure=S4)
    border = set()
    for edge in (background[0, :], background[-1, :],
                 background[:, 0], background[:, -1]):
        border.update(int(v) for v in np.unique(edge) if v != 0)
    holes = sum(1 for k in range(1, n_bg + 1) if k not in border)
    return n_regions, holes


def test_c9_mode2_figure_structure_and_determinism(csv_dir, tmp_path):
    out1 = tmp_path / "js2-a.png"
    out2 = tmp_path / "js2-b.png"
    render_jointspace(csv_dir / "js2.csv", out1)
    render_jointspace(csv_dir / "js2.csv", out2)

    assert out1.read_bytes() == out2.read_bytes(), "re-render is not pixel-identical"

    img = np.asarray(Image.open(out1).convert("RGB"))
    regions, holes = _pixel_regions_and_holes(img)
    ok = regions == 4 and holes == 2
    print(f"[criterion 9] {'PASS' if ok else 'FAIL'}: rendered mode-2 joint space has "
          f"{regions} regions and {holes} holes; re-render byte-identical")
    assert regions == 4
    assert holes == 2
