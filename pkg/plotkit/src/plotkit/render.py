"""Renderers for the three map kinds.

Rendering is a pure function of file content: styles, sizes and colors are
fixed, no timestamps are embedded, and data pixels use exact flat colors
(nearest-neighbor resampling) so that region structure survives into the
image.  Numeric content always comes from the file, never from a
recomputation.
"""

from __future__ import annotations

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .mapfile import MapFile, SchemaError, TransitionsFile, load_map, load_transitions

#: exact color classes for joint-space maps, keyed by solution count
JS_COLORS = {0: (255, 255, 255), 2: (44, 123, 182), 4: (215, 48, 39)}
JS_ODD = (150, 150, 150)   # tangency cells; normally absent

#: aspect palette, keyed by aspect id order (stable across resolutions)
ASPECT_PALETTE = (
    (31, 119, 180), (214, 39, 40), (44, 160, 44), (255, 127, 14),
    (148, 103, 189), (140, 86, 75), (227, 119, 194), (23, 190, 207),
    (188, 189, 34), (127, 127, 127),
)
SINGULAR_COLOR = (0, 0, 0)
UNLABELED_COLOR = (221, 221, 221)
BACKGROUND = (255, 255, 255)

_SAVE_KW = dict(dpi=100, metadata={"Software": None})


def _new_axes(title: str):
    fig = plt.figure(figsize=(6.0, 6.0), dpi=100)
    ax = fig.add_axes((0.12, 0.10, 0.83, 0.83))
    ax.set_title(title)
    return fig, ax


def _axis_label(name: str) -> str:
    if name == "alpha":
        return "alpha (rad, periodic)"
    if name.startswith("rho"):
        return name + "'"
    return name


def _show(ax, rgb: np.ndarray, mapfile: MapFile) -> None:
    lo1, hi1, lo2, hi2 = mapfile.extent
    # rows of the grid are axis 1; transpose so axis 1 runs along x
    ax.imshow(np.transpose(rgb, (1, 0, 2)), origin="lower",
              extent=(lo1, hi1, lo2, hi2), interpolation="nearest", aspect="auto")
    ax.set_xlabel(_axis_label(mapfile.axes[0]))
    ax.set_ylabel(_axis_label(mapfile.axes[1]))


def render_jointspace(csv_path: str | Path, out_path: str | Path) -> None:
    """Two-color solution-count map of a joint-space slice."""
    mapfile = load_map(csv_path)
    if mapfile.kind != "jointspace" or "n_fk" not in mapfile.columns:
        raise SchemaError(f"{csv_path}: not a joint-space map")
    n_fk = mapfile.grid("n_fk").astype(int)
    if not (n_fk > 0).any():
        print(f"warning: {csv_path} has no reachable cells", file=sys.stderr)
    rgb = np.empty(n_fk.shape + (3,), dtype=np.uint8)
    rgb[:] = JS_ODD
    for value, color in JS_COLORS.items():
        rgb[n_fk == value] = color
    fig, ax = _new_axes(f"joint space, mode {mapfile.mode} (rho1 = "
                        f"{mapfile.header.get('rho1', '0')})")
    _show(ax, rgb, mapfile)
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def render_workspace(csv_path: str | Path, out_path: str | Path) -> None:
    """Aspect-colored workspace section; singular cells drawn black."""
    mapfile = load_map(csv_path)
    if mapfile.kind != "workspace" or "detA_sign" not in mapfile.columns:
        raise SchemaError(f"{csv_path}: not a workspace map")
    feasible = mapfile.grid("feasible") > 0.5
    sign = mapfile.grid("detA_sign").astype(int)
    rgb = np.empty(feasible.shape + (3,), dtype=np.uint8)
    rgb[:] = BACKGROUND
    have_aspects = "aspect_id" in mapfile.columns
    if have_aspects:
        aspect = mapfile.grid("aspect_id").astype(int)
        have_aspects = bool((aspect >= 0).any())
    if have_aspects:
        rgb[feasible] = UNLABELED_COLOR
        for aid in np.unique(aspect[aspect >= 0]):
            rgb[aspect == aid] = ASPECT_PALETTE[aid % len(ASPECT_PALETTE)]
    else:
        # no labeling available: shade by determinant sign
        rgb[feasible & (sign > 0)] = ASPECT_PALETTE[0]
        rgb[feasible & (sign < 0)] = ASPECT_PALETTE[1]
    rgb[feasible & (sign == 0)] = SINGULAR_COLOR
    sigma = mapfile.header.get("sigma", "?")
    fig, ax = _new_axes(f"workspace, mode {mapfile.mode} (sigma {sigma})")
    _show(ax, rgb, mapfile)
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def render_transitions(csv_path: str | Path, out_path: str | Path) -> None:
    """Home-line strip diagram per mode with boundary abscissae annotated."""
    tf: TransitionsFile = load_transitions(csv_path)
    modes = tf.modes
    fig, axes = plt.subplots(len(modes), 1, figsize=(7.0, 1.9 * len(modes)),
                             dpi=100, squeeze=False)
    for row, mode in enumerate(modes):
        ax = axes[row][0]
        samples = tf.samples(mode)
        ts = [t for t, _ in samples]
        step = (ts[-1] - ts[0]) / max(len(ts) - 1, 1)
        for t, aid in samples:
            if aid < 0:
                continue
            color = tuple(v / 255 for v in ASPECT_PALETTE[aid % len(ASPECT_PALETTE)])
            ax.barh(0, step * 1.001, left=t - step / 2, height=1.0,
                    color=color, linewidth=0)
        for b in tf.boundaries(mode):
            ax.axvline(b, color="black", linestyle="--", linewidth=1.2)
            ax.annotate(f"{tf.axis(mode)} = {b:.6f}", xy=(b, 0.52),
                        xytext=(b, 0.62), ha="center", fontsize=8)
        reachable = sorted({aid for _, aid in samples if aid >= 0})
        ax.set_xlim(ts[0] - step, ts[-1] + step)
        ax.set_ylim(-0.6, 0.9)
        ax.set_yticks([])
        ax.set_xlabel(tf.axis(mode))
        ax.set_title(f"mode {mode}: {len(reachable)} reachable aspect(s)", fontsize=10)
    fig.tight_layout()
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)
