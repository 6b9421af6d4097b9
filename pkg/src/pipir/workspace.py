"""Grid-sampled workspace and joint-space maps, aspect labeling, transitions.

Exact algebraic decomposition of the singularity loci is out of scope;
instead each map rasterizes a 2-D section at cell centers:

* workspace maps fix a working mode and record, per cell, inverse-kinematics
  feasibility and the sign of det A at the resulting configuration;
* joint-space maps fix the slice rho1 = 0 (the model is invariant under a
  uniform shift of y and all actuators, so this loses nothing) and record
  the number of forward-kinematics solutions pooled over all branches.

Aspects are flood-filled over feasible cells with barriers wherever det A
changes sign or vanishes; the alpha axis is periodic and wraps.  The
operation-mode transition analysis sweeps the home line through each
rotation mode's aspect map and locates the aspect boundaries by bisection
on the factorized parallel-singularity expressions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .model import (BOUNDARY_TOL, ConstraintSystem, DesignParams, Pose,
                    build_system, operation_mode)
from .kinematics import WorkingMode, inverse_kinematics, leg_quadratics
from .singularity import PARALLEL_TOL, det3, jacobian_value_rows, parallel_factor_values

_ALPHA_RANGE = (-math.pi, math.pi)

#: section axes per mode: the two coordinates that vary in the plotted plane
SECTION_AXES = {1: ("x", "z"), 2: ("x", "alpha"), 3: ("x", "alpha"), 4: ("z", "alpha")}

#: default workspace section ranges; linear axes enclose the reachable set
#: with at least 5% margin, alpha spans the full circle
WORKSPACE_RANGES = {
    1: ((-1.2, 1.2), (-1.2, 1.2)),
    2: ((-0.66, 0.66), _ALPHA_RANGE),
    3: ((-0.66, 0.66), _ALPHA_RANGE),
    4: ((-0.26, 1.05), _ALPHA_RANGE),
}

#: default joint-space ranges for the (rho2, rho3) slice at rho1 = 0
JOINTSPACE_RANGES = {
    1: ((-2.0, 2.0), (-2.0, 2.0)),
    2: ((-2.2, 2.2), (-2.2, 2.2)),
    3: ((-2.2, 2.2), (-2.2, 2.2)),
    4: ((-2.2, 2.2), (-2.2, 2.2)),
}

_CONNECT4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class NoSignChangeError(ValueError):
    """Bisection bracket endpoints have the same sign."""


@dataclass(frozen=True)
class GridSpec:
    """Geometry of one rasterized section.

    Cells are sampled at their centers; axis 2 wraps when it is alpha.
    """

    mode_id: int
    kind: str                       # "workspace" | "jointspace"
    axes: tuple[str, str]
    range1: tuple[float, float]
    range2: tuple[float, float]
    res1: int
    res2: int
    fixed: tuple[tuple[str, float], ...] = (("y", 0.0),)
    sigma: WorkingMode | None = None
    rho1: float = 0.0

    def __post_init__(self) -> None:
        if self.res1 < 2 or self.res2 < 2:
            raise ValueError("grid resolution must be at least 2 per axis")

    @property
    def wraps(self) -> bool:
        return self.axes[1] == "alpha"

    def centers(self, axis: int) -> np.ndarray:
        lo, hi = (self.range1, self.range2)[axis]
        n = (self.res1, self.res2)[axis]
        step = (hi - lo) / n
        return lo + (np.arange(n) + 0.5) * step

    def cell_index(self, v1: float, v2: float) -> tuple[int, int]:
        """Indices of the cell containing (v1, v2), clipped to the grid."""
        i = int((v1 - self.range1[0]) / (self.range1[1] - self.range1[0]) * self.res1)
        j = int((v2 - self.range2[0]) / (self.range2[1] - self.range2[0]) * self.res2)
        return (min(max(i, 0), self.res1 - 1), min(max(j, 0), self.res2 - 1))


def workspace_spec(mode_id: int, res: int = 512,
                   sigma: WorkingMode | str = "+++",
                   ranges=None, y: float = 0.0) -> GridSpec:
    if isinstance(sigma, str):
        sigma = WorkingMode.from_string(sigma)
    r1, r2 = ranges if ranges is not None else WORKSPACE_RANGES[mode_id]
    return GridSpec(mode_id, "workspace", SECTION_AXES[mode_id], tuple(r1), tuple(r2),
                    res, res, (("y", y),), sigma)


def jointspace_spec(mode_id: int, res: int = 256, ranges=None,
                    rho1: float = 0.0) -> GridSpec:
    r1, r2 = ranges if ranges is not None else JOINTSPACE_RANGES[mode_id]
    return GridSpec(mode_id, "jointspace", ("rho2", "rho3"), tuple(r1), tuple(r2),
                    res, res, (), None, rho1)


@dataclass
class GridMap:
    """Per-cell results over a GridSpec.  Arrays are indexed [axis1, axis2].

    Workspace maps fill feasible/det_sign/serial/min_abs_b (and aspect after
    labeling); joint-space maps fill feasible/n_fk.
    """

    spec: GridSpec
    feasible: np.ndarray
    det_sign: np.ndarray | None = None
    serial: np.ndarray | None = None
    min_abs_b: np.ndarray | None = None
    n_fk: np.ndarray | None = None
    aspect: np.ndarray | None = None


def home_pose(mode_id: int) -> Pose:
    """The switching pose: every active coordinate at zero."""
    operation_mode(mode_id)
    return Pose()


# ---------------------------------------------------------------------------
# grid evaluation


def _grid_fields(spec: GridSpec, rows: slice):
    c1 = spec.centers(0)[rows][:, None]
    c2 = spec.centers(1)[None, :]
    vals = {"x": 0.0, "y": 0.0, "z": 0.0, "alpha": 0.0}
    vals.update(dict(spec.fixed))
    vals[spec.axes[0]] = c1
    vals[spec.axes[1]] = c2
    alpha = vals.pop("alpha")
    return vals["x"], vals["y"], vals["z"], np.cos(alpha), np.sin(alpha)


def _workspace_block(system: ConstraintSystem, spec: GridSpec, rows: slice,
                     parallel_tol: float):
    x, y, z, ca, sa = _grid_fields(spec, rows)
    signs = spec.sigma.signs
    discs = []
    rhos = []
    for leg, s in zip(system.legs, signs):
        g = leg.rho_free_value(x, y, z, ca, sa)
        d = leg.discriminant(x, y, z, ca, sa)
        discs.append(d)
        rhos.append(g + s * np.sqrt(np.clip(d, 0.0, None)))
    feasible = (discs[0] >= -BOUNDARY_TOL) & (discs[1] >= -BOUNDARY_TOL) \
        & (discs[2] >= -BOUNDARY_TOL)
    serial = feasible & ((np.abs(discs[0]) <= BOUNDARY_TOL)
                         | (np.abs(discs[1]) <= BOUNDARY_TOL)
                         | (np.abs(discs[2]) <= BOUNDARY_TOL))
    min_disc = np.minimum(np.minimum(np.clip(discs[0], 0.0, None),
                                     np.clip(discs[1], 0.0, None)),
                          np.clip(discs[2], 0.0, None))
    min_abs_b = 2.0 * np.sqrt(min_disc)

    a_rows = jacobian_value_rows(system, x, y, z, ca, sa, rhos)
    det = det3(a_rows)
    scale = np.ones_like(det)
    for row in a_rows:
        scale = scale * np.sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2])
    det_sign = np.where(np.abs(det) <= parallel_tol * scale, 0,
                        np.sign(det)).astype(np.int8)
    det_sign[~feasible] = 0
    shape = np.broadcast_shapes(feasible.shape, det_sign.shape)
    return (np.broadcast_to(feasible, shape).copy(),
            np.broadcast_to(det_sign, shape).copy(),
            np.broadcast_to(serial, shape).copy(),
            np.broadcast_to(min_abs_b, shape).copy())


def _row_blocks(n: int, threads: int) -> list[slice]:
    threads = max(1, int(threads))
    if threads == 1:
        return [slice(0, n)]
    size = -(-n // threads)
    return [slice(i, min(i + size, n)) for i in range(0, n, size)]


def workspace_map(system: ConstraintSystem, spec: GridSpec, *,
                  parallel_tol: float = PARALLEL_TOL, threads: int = 1) -> GridMap:
    """Rasterize feasibility and det-A sign for the spec's working mode.

    Cells whose discriminants sit inside the boundary band stay feasible and
    are flagged serial (they are the workspace boundary).  Cell values do not
    depend on the thread count.
    """
    if spec.kind != "workspace":
        raise ValueError("expected a workspace GridSpec")
    if spec.mode_id != system.mode.id:
        raise ValueError(f"spec is for mode {spec.mode_id}, system is mode {system.mode.id}")
    if spec.sigma is None:
        raise ValueError("workspace maps need a working mode")
    blocks = _row_blocks(spec.res1, threads)
    if len(blocks) == 1:
        parts = [_workspace_block(system, spec, blocks[0], parallel_tol)]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(
                lambda b: _workspace_block(system, spec, b, parallel_tol), blocks))
    feasible = np.concatenate([p[0] for p in parts], axis=0)
    det_sign = np.concatenate([p[1] for p in parts], axis=0)
    serial = np.concatenate([p[2] for p in parts], axis=0)
    min_abs_b = np.concatenate([p[3] for p in parts], axis=0)
    return GridMap(spec, feasible, det_sign, serial, min_abs_b)


# ---------------------------------------------------------------------------
# forward-kinematics solution counts on the rho1 = 0 slice


def _trig_count(leg, rho, coords) -> np.ndarray:
    from .kinematics import orientation_equation
    a, b, d = orientation_equation(leg, rho, coords)
    r = np.hypot(a, b)
    diff = r - np.abs(d)
    count = np.where(diff > BOUNDARY_TOL, 2, np.where(diff >= -BOUNDARY_TOL, 1, 0))
    return np.where(r == 0.0, 0, count)


def _jointspace_block(system: ConstraintSystem, spec: GridSpec, rows: slice) -> np.ndarray:
    from .kinematics import leg_circle, leg_sphere
    rho2 = spec.centers(0)[rows][:, None]
    rho3 = spec.centers(1)[None, :]
    rho1 = spec.rho1
    rhos = (rho1, rho2, rho3)
    mode = system.mode

    with np.errstate(invalid="ignore", divide="ignore"):
        if not mode.has_rotation:
            centers = []
            radii = []
            for leg, rho in zip(system.legs, rhos):
                (cx, cy, cz), r_sq = leg_sphere(leg, rho)
                centers.append((cx, cy, cz))
                radii.append(math.sqrt(r_sq))
            (x1, y1, z1), (x2, y2, z2), (x3, y3, z3) = centers
            r1, r2, r3 = radii
            exx, exy, exz = x2 - x1, y2 - y1, z2 - z1
            d = np.sqrt(exx * exx + exy * exy + exz * exz)
            exx, exy, exz = exx / d, exy / d, exz / d
            kx, ky, kz = x3 - x1, y3 - y1, z3 - z1
            i = exx * kx + exy * ky + exz * kz
            eyx, eyy, eyz = kx - i * exx, ky - i * exy, kz - i * exz
            j = np.sqrt(eyx * eyx + eyy * eyy + eyz * eyz)
            xx = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
            yy = (r1 * r1 - r3 * r3 + i * i + j * j - 2.0 * i * xx) / (2.0 * j)
            h_sq = r1 * r1 - xx * xx - yy * yy
            count = np.where(h_sq > BOUNDARY_TOL, 2,
                             np.where(h_sq >= -BOUNDARY_TOL, 1, 0))
            count = np.where((d > 0) & (j > 0), count, 0)
            return np.broadcast_to(count, (rho2.shape[0], rho3.shape[1])).astype(np.int16)

        axes = mode.translation_axes
        free = [(leg, rho) for leg, rho in zip(system.legs, rhos) if leg.is_alpha_free]
        rot_leg, rot_rho = next((leg, rho) for leg, rho in zip(system.legs, rhos)
                                if not leg.is_alpha_free)
        (a1, a2), ra_sq = leg_circle(free[0][0], free[0][1], axes)
        (b1, b2), rb_sq = leg_circle(free[1][0], free[1][1], axes)
        ra, rb = math.sqrt(ra_sq), math.sqrt(rb_sq)
        dx, dy = b1 - a1, b2 - a2
        d = np.sqrt(dx * dx + dy * dy)
        tangent = (np.abs(d - (ra + rb)) <= BOUNDARY_TOL) \
            | (np.abs(d - abs(ra - rb)) <= BOUNDARY_TOL)
        aa = (d * d + ra * ra - rb * rb) / (2.0 * d)
        h_sq = ra * ra - aa * aa
        h = np.where(tangent, 0.0, np.sqrt(np.clip(h_sq, 0.0, None)))
        ok = tangent | (h_sq >= 0.0)
        ux, uy = dx / d, dy / d
        bx, by = a1 + aa * ux, a2 + aa * uy
        total = np.zeros(np.broadcast_shapes(bx.shape, by.shape), dtype=np.int16)
        for sgn, needed in ((-1, ~tangent), (1, np.ones_like(tangent))):
            t1 = bx - sgn * h * uy
            t2 = by + sgn * h * ux
            cnt = _trig_count(rot_leg, rot_rho, {axes[0]: t1, axes[1]: t2})
            total = total + np.where(ok & needed & (d > 0), cnt, 0)
        return np.broadcast_to(total, (rho2.shape[0], rho3.shape[1])).astype(np.int16)


def jointspace_map(system: ConstraintSystem, spec: GridSpec, *, threads: int = 1) -> GridMap:
    """Count forward-kinematics solutions per (rho2, rho3) cell on the rho1 slice.

    Counts pool every working mode, matching len(forward_kinematics(...)),
    and are 0, 2 or 4 away from tangency loci.
    """
    if spec.kind != "jointspace":
        raise ValueError("expected a jointspace GridSpec")
    if spec.mode_id != system.mode.id:
        raise ValueError(f"spec is for mode {spec.mode_id}, system is mode {system.mode.id}")
    blocks = _row_blocks(spec.res1, threads)
    if len(blocks) == 1:
        parts = [_jointspace_block(system, spec, blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(lambda b: _jointspace_block(system, spec, b), blocks))
    n_fk = np.concatenate(parts, axis=0)
    return GridMap(spec, n_fk > 0, n_fk=n_fk)


# ---------------------------------------------------------------------------
# aspects


@dataclass(frozen=True)
class AspectLabeling:
    """Summary of the aspect decomposition of a workspace map."""

    count: int
    sizes: tuple[int, ...]
    bounding_boxes: tuple[tuple[int, int, int, int], ...]   # i0, i1, j0, j1 inclusive
    touches_serial: tuple[bool, ...]
    touches_parallel: tuple[bool, ...]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def label_aspects(gmap: GridMap, *, min_cells: int | None = None) -> AspectLabeling:
    """Flood-fill aspects: maximal 4-connected runs of feasible cells with one
    det-A sign.  Sign-zero cells join no aspect and act as barriers; the alpha
    axis wraps.  Fills gmap.aspect (-1 outside aspects) and returns a summary.

    Regions thinner than a cell cannot be certified at the grid resolution;
    components smaller than min_cells (default: 0.01% of the feasible area)
    are treated as rasterization slivers and left unlabeled.  Pass
    min_cells=0 to keep everything.
    """
    if gmap.det_sign is None:
        raise ValueError("aspect labeling needs det_sign; run workspace_map first")
    if min_cells is None:
        min_cells = max(1, int(math.ceil(1e-4 * int(gmap.feasible.sum()))))
    sign = gmap.det_sign
    wrap = gmap.spec.wraps
    pos = gmap.feasible & (sign == 1)
    neg = gmap.feasible & (sign == -1)
    lab_pos, n_pos = ndimage.label(pos, structure=_CONNECT4)
    lab_neg, n_neg = ndimage.label(neg, structure=_CONNECT4)
    prov = lab_pos + np.where(neg, lab_neg + n_pos, 0)

    uf = _UnionFind(n_pos + n_neg + 1)
    if wrap and gmap.spec.res2 > 1:
        left = prov[:, 0]
        right = prov[:, -1]
        same = (left > 0) & (right > 0) & (sign[:, 0] == sign[:, -1])
        for a, b in zip(left[same].tolist(), right[same].tolist()):
            uf.union(a, b)

    roots = np.array([uf.find(k) for k in range(n_pos + n_neg + 1)])
    merged = roots[prov]
    merged[prov == 0] = 0
    root_sizes = np.bincount(merged.ravel(), minlength=n_pos + n_neg + 1)

    order: dict[int, int] = {}
    remap = np.full(n_pos + n_neg + 1, -1, dtype=np.int32)
    for v in prov.ravel():
        if v == 0:
            continue
        r = int(roots[v])
        if root_sizes[r] < min_cells:
            continue
        if r not in order:
            order[r] = len(order)
        remap[v] = order[r]
    aspect = remap[prov]
    aspect[prov == 0] = -1
    gmap.aspect = aspect

    count = len(order)
    barrier = gmap.feasible & (sign == 0)
    blocked = ~gmap.feasible
    if gmap.serial is not None:
        blocked = blocked | gmap.serial
    near_blocked = np.zeros_like(blocked)
    near_barrier = np.zeros_like(blocked)
    near_opposite = np.zeros_like(blocked)
    for axis, shift in ((0, 1), (0, -1), (1, 1), (1, -1)):
        w = wrap and axis == 1
        near_blocked |= _shifted(blocked, axis, shift, w)
        near_barrier |= _shifted(barrier, axis, shift, w)
        nb_sign = _shifted_values(sign, axis, shift, w)
        near_opposite |= (nb_sign != 0) & (nb_sign == -sign)

    sizes = []
    boxes = []
    t_serial = []
    t_parallel = []
    for k in range(count):
        cells = aspect == k
        ii, jj = np.nonzero(cells)
        sizes.append(int(cells.sum()))
        boxes.append((int(ii.min()), int(ii.max()), int(jj.min()), int(jj.max())))
        t_serial.append(bool((cells & near_blocked).any()))
        t_parallel.append(bool((cells & (near_barrier | near_opposite)).any()))
    return AspectLabeling(count, tuple(sizes), tuple(boxes),
                          tuple(t_serial), tuple(t_parallel))


def _shifted(mask: np.ndarray, axis: int, shift: int, wrap: bool) -> np.ndarray:
    """Boolean mask moved one cell along axis; out-of-range is False unless wrapping."""
    out = np.roll(mask, shift, axis=axis)
    if not wrap:
        if axis == 0:
            if shift == 1:
                out[0, :] = False
            else:
                out[-1, :] = False
        else:
            if shift == 1:
                out[:, 0] = False
            else:
                out[:, -1] = False
    return out


def _shifted_values(arr: np.ndarray, axis: int, shift: int, wrap: bool) -> np.ndarray:
    out = np.roll(arr, shift, axis=axis)
    if not wrap:
        if axis == 0:
            if shift == 1:
                out[0, :] = 0
            else:
                out[-1, :] = 0
        else:
            if shift == 1:
                out[:, 0] = 0
            else:
                out[:, -1] = 0
    return out


# ---------------------------------------------------------------------------
# region/hole utilities (used by the joint-space structure checks)


_CONNECT8 = np.ones((3, 3), dtype=bool)


def region_labels(mask: np.ndarray, connectivity: int = 8) -> tuple[np.ndarray, int]:
    """Connected components of a boolean mask (no wrap).

    Regions default to 8-connectivity so that strips thinner than a cell do
    not fragment along diagonals; the aspect labeling deliberately stays
    4-connected instead (see label_aspects).
    """
    structure = _CONNECT8 if connectivity == 8 else _CONNECT4
    return ndimage.label(mask, structure=structure)


def count_regions(mask: np.ndarray, connectivity: int = 8) -> int:
    return region_labels(mask, connectivity)[1]


def holes_by_region(n_fk: np.ndarray) -> dict[int, int]:
    """Map region label (1-based) to the number of fully enclosed zero-holes.

    Regions use 8-connectivity and the zero background its topological dual,
    4-connectivity; a zero component is a hole when it touches no map border.
    """
    nonzero = n_fk > 0
    regions, _ = region_labels(nonzero, 8)
    zero_lab, n_zero = ndimage.label(~nonzero, structure=_CONNECT4)
    border = set()
    for edge in (zero_lab[0, :], zero_lab[-1, :], zero_lab[:, 0], zero_lab[:, -1]):
        border.update(int(v) for v in np.unique(edge) if v != 0)
    out: dict[int, int] = {}
    for k in range(1, n_zero + 1):
        if k in border:
            continue
        hole = zero_lab == k
        ring = ndimage.binary_dilation(hole, structure=_CONNECT8) & nonzero
        owners = {int(v) for v in np.unique(regions[ring]) if v != 0}
        for owner in owners:
            out[owner] = out.get(owner, 0) + 1
    return out


# ---------------------------------------------------------------------------
# transitions along the home line


#: working mode swept per target mode.  Mode 4's reachable-aspect split only
#: exists on branches whose second and third signs differ, so the sweep uses
#: (+,+,-) there; modes 2 and 3 split on the all-plus branch.
TRANSITION_SIGMA = {2: "+++", 3: "+++", 4: "++-"}

#: the line coordinate swept per target mode (the other coordinates stay at
#: the home values)
TRANSITION_AXIS = {2: "x", 3: "x", 4: "z"}


def home_line_pose(mode_id: int, t: float) -> Pose:
    """Point of the switching line of a rotation mode (alpha = 0 throughout)."""
    if mode_id in (2, 3):
        return Pose(x=t)
    if mode_id == 4:
        return Pose(z=t)
    raise ValueError("the home line is defined for modes 2-4")


def find_boundary_root(system: ConstraintSystem, wm: WorkingMode, line,
                       bracket: tuple[float, float], *, factor: int = 1,
                       tol: float = 1e-10, max_iter: int = 200) -> float:
    """Bisect one parallel-singularity factor along a 1-D family of poses.

    `line` maps a scalar to a Pose; `factor` indexes the expressions returned
    by parallel_factor_values (1-based).  The factor must change sign across
    the bracket.
    """
    def f(t: float) -> float:
        pose = line(t)
        joints = inverse_kinematics(system, pose, wm)
        return parallel_factor_values(system, pose, joints)[factor - 1]

    lo, hi = float(bracket[0]), float(bracket[1])
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NoSignChangeError(f"no sign change of factor {factor} over [{lo}, {hi}]")
    lo_pos = f_lo > 0.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == lo_pos:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _feasible_on_line(system: ConstraintSystem, mode_id: int, t: float) -> bool:
    quads = leg_quadratics(system, home_line_pose(mode_id, t))
    return all(d >= -BOUNDARY_TOL for _, d in quads)


def _min_disc_on_line(system: ConstraintSystem, mode_id: int, t: float) -> float:
    quads = leg_quadratics(system, home_line_pose(mode_id, t))
    return min(d for _, d in quads)


def _bisect_scalar(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    f_lo = f(lo)
    lo_pos = f_lo > 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0.0) == lo_pos:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ModeTransition:
    """Aspect structure met along the switching line of one target mode."""

    mode_id: int
    sigma: WorkingMode
    axis: str
    constraints: tuple[tuple[str, float], ...]
    feasible_span: tuple[float, float]
    boundaries: tuple[float, ...]
    reachable_aspects: tuple[int, ...]
    samples: tuple[tuple[float, int], ...]   # (line coordinate, aspect id or -1)


@dataclass(frozen=True)
class TransitionReport:
    preset: str
    params: DesignParams
    resolution: int
    modes: tuple[ModeTransition, ...]


def transition_report(params: DesignParams | None = None, resolution: int = 512, *,
                      preset: str = "consistent",
                      map_resolution: int | None = None) -> TransitionReport:
    """Sweep the home line through each rotation mode's aspect decomposition.

    Switching happens at poses with z = 0 and alpha = 0 (modes 2-3, sweeping
    x) or x = 0 and alpha = 0 (mode 4, sweeping z).  Boundary coordinates
    are bisected on the factor whose sign flips, to 1e-10.
    """
    if params is None:
        params = DesignParams()
    map_res = map_resolution or resolution
    entries = []
    for mode_id in (2, 3, 4):
        system = build_system(mode_id, params, preset)
        wm = WorkingMode.from_string(TRANSITION_SIGMA[mode_id])
        spec = workspace_spec(mode_id, map_res, sigma=wm)
        gmap = workspace_map(system, spec)
        label_aspects(gmap)

        axis = TRANSITION_AXIS[mode_id]
        lo, hi = spec.range1
        step = (hi - lo) / resolution
        ts = [lo + (k + 0.5) * step for k in range(resolution)]
        feas = [_feasible_on_line(system, mode_id, t) for t in ts]

        # refine the feasible span against the discriminant sign
        t_first = next((t for t, ok in zip(ts, feas) if ok), None)
        if t_first is None:
            entries.append(ModeTransition(mode_id, wm, axis, _line_constraints(mode_id),
                                          (math.nan, math.nan), (), (), ()))
            continue
        t_last = next(t for t, ok in zip(reversed(ts), reversed(feas)) if ok)
        span_lo = _bisect_scalar(lambda t: _min_disc_on_line(system, mode_id, t),
                                 t_first - step, t_first) if t_first - step >= lo else t_first
        span_hi = _bisect_scalar(lambda t: _min_disc_on_line(system, mode_id, t),
                                 t_last, t_last + step) if t_last + step <= hi else t_last

        factors = {}
        for t, ok in zip(ts, feas):
            if not ok:
                continue
            joints = inverse_kinematics(system, home_line_pose(mode_id, t), wm)
            factors[t] = parallel_factor_values(
                system, home_line_pose(mode_id, t), joints)

        roots: list[float] = []
        feasible_ts = [t for t in ts if t in factors]
        n_factors = len(next(iter(factors.values()))) if factors else 0
        for idx in range(n_factors):
            prev_t = None
            for t in feasible_ts:
                if prev_t is not None and t - prev_t <= 1.5 * step:
                    v0, v1 = factors[prev_t][idx], factors[t][idx]
                    if v0 == 0.0 or (v0 > 0.0) != (v1 > 0.0):
                        roots.append(find_boundary_root(
                            system, wm, lambda u: home_line_pose(mode_id, u),
                            (prev_t, t), factor=idx + 1))
                prev_t = t
        roots.sort()

        samples = []
        line_fixed_axis_value = 0.0
        for t, ok in zip(ts, feas):
            if not ok:
                samples.append((t, -1))
                continue
            i, j = spec.cell_index(t, line_fixed_axis_value)
            samples.append((t, int(gmap.aspect[i, j])))
        reachable = []
        for _, aid in samples:
            if aid >= 0 and aid not in reachable:
                reachable.append(aid)

        entries.append(ModeTransition(mode_id, wm, axis, _line_constraints(mode_id),
                                      (span_lo, span_hi), tuple(roots),
                                      tuple(reachable), tuple(samples)))
    return TransitionReport(preset, params, resolution, tuple(entries))


def _line_constraints(mode_id: int) -> tuple[tuple[str, float], ...]:
    if mode_id in (2, 3):
        return (("z", 0.0), ("alpha", 0.0))
    return (("x", 0.0), ("alpha", 0.0))
