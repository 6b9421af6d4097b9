"""Closed-form inverse and forward kinematics for all four operation modes.

Inverse kinematics: each leg constraint is a monic quadratic in its own
actuator value, rho_i = g_i +/- sqrt(D_i).  A working mode picks one branch
sign per leg, so a pose admits up to eight joint solutions.

Forward kinematics: in the pure-translation mode the platform point is the
intersection of three spheres.  In the rotation modes exactly two legs are
independent of alpha; their constraints are circles in the two active
translation coordinates, and for each of the (up to two) position
candidates the remaining leg reduces to a*cos(alpha) + b*sin(alpha) = d,
giving up to four solutions in total.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .model import (BASIS, BOUNDARY_TOL, ConstraintSystem, JointInput, Pose,
                    normalize_angle, validate_pose)

#: solutions closer than this (per active coordinate, angles on the circle)
#: are considered the same assembly
DEDUP_TOL = 1e-8

#: forward-kinematics candidates must close the constraints this tightly
RESIDUAL_TOL = 1e-9


class UnreachablePoseError(ValueError):
    """Some leg cannot reach the requested pose (negative discriminant)."""

    def __init__(self, legs: tuple[int, ...], pose: Pose):
        self.legs = tuple(legs)
        self.pose = pose
        names = ", ".join(str(i) for i in self.legs)
        super().__init__(f"pose out of reach for leg(s) {names}: {pose}")


class CollinearCentersError(ValueError):
    """Trilateration requires the three sphere centers to span a plane."""


class ConcentricCirclesError(ValueError):
    """Circle intersection is undefined for (near-)concentric circles."""


class DegenerateEquationError(ValueError):
    """a*cos + b*sin = d with a = b = 0 and d != 0 has no solution."""


class IndeterminateAngleError(ValueError):
    """a = b = d = 0 leaves the angle completely free."""


@dataclass(frozen=True, order=True)
class WorkingMode:
    """An inverse-kinematics branch: one sign per leg.

    The sign of leg i equals the sign of the serial-Jacobian diagonal entry
    B_ii = 2*(rho_i - g_i) on that branch.
    """

    signs: tuple[int, int, int]

    def __post_init__(self) -> None:
        if len(self.signs) != 3 or any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signs must be three values in {{-1, +1}}, got {self.signs!r}")

    @classmethod
    def from_string(cls, text: str) -> "WorkingMode":
        if len(text) != 3 or any(c not in "+-" for c in text):
            raise ValueError(f"working mode must look like '+-+', got {text!r}")
        return cls(tuple(1 if c == "+" else -1 for c in text))

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


def all_working_modes() -> tuple[WorkingMode, ...]:
    """All eight branches, in ascending lexicographic order of the sign triple."""
    return tuple(WorkingMode(s) for s in itertools.product((-1, 1), repeat=3))


def leg_quadratics(system: ConstraintSystem, pose: Pose) -> list[tuple[float, float]]:
    """Per leg, the branch point g and discriminant D with rho = g +/- sqrt(D)."""
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    out = []
    for leg in system.legs:
        g = leg.rho_free_value(pose.x, pose.y, pose.z, ca, sa)
        d = leg.discriminant(pose.x, pose.y, pose.z, ca, sa)
        out.append((g, d))
    return out


def boundary_legs(system: ConstraintSystem, pose: Pose,
                  tol: float = BOUNDARY_TOL) -> tuple[int, ...]:
    """1-based legs whose discriminant sits in the branch-collapse band |D| <= tol."""
    return tuple(i + 1 for i, (_, d) in enumerate(leg_quadratics(system, pose))
                 if abs(d) <= tol)


def inverse_kinematics(system: ConstraintSystem, pose: Pose,
                       wm: WorkingMode) -> JointInput:
    """Actuator values reaching `pose` on the branch `wm`.

    Discriminants inside [-BOUNDARY_TOL, BOUNDARY_TOL] collapse both branches
    onto the double root rho = g (the leg is at a workspace boundary there);
    anything more negative raises UnreachablePoseError.
    """
    validate_pose(system.mode, pose)
    quads = leg_quadratics(system, pose)
    bad = tuple(i + 1 for i, (_, d) in enumerate(quads) if d < -BOUNDARY_TOL)
    if bad:
        raise UnreachablePoseError(bad, pose)
    roots = []
    for (g, d), s in zip(quads, wm.signs):
        roots.append(g if abs(d) <= BOUNDARY_TOL else g + s * math.sqrt(d))
    return JointInput(*roots)


def enumerate_ik(system: ConstraintSystem, pose: Pose) -> list[tuple[WorkingMode, JointInput]]:
    """All distinct joint solutions for a pose, ordered lexicographically by sign triple.

    Branches that collapse at a discriminant boundary are reported once, under
    the first sign triple that produces them.  Returns [] when the pose is out
    of reach.
    """
    validate_pose(system.mode, pose)
    quads = leg_quadratics(system, pose)
    if any(d < -BOUNDARY_TOL for _, d in quads):
        return []
    out: list[tuple[WorkingMode, JointInput]] = []
    seen: set[tuple[float, float, float]] = set()
    for wm in all_working_modes():
        roots = tuple(g if abs(d) <= BOUNDARY_TOL else g + s * math.sqrt(d)
                      for (g, d), s in zip(quads, wm.signs))
        if roots in seen:
            continue
        seen.add(roots)
        out.append((wm, JointInput(*roots)))
    return out


# ---------------------------------------------------------------------------
# geometric subsolvers


def intersect_circles(c1, c2, r1: float, r2: float) -> list[tuple[float, float]]:
    """Intersection points of two circles in the plane (0, 1 or 2 points).

    Tangency (internal or external) within BOUNDARY_TOL of the critical
    center distance yields a single point.  Raises ConcentricCirclesError
    when the centers coincide.
    """
    dx = c2[0] - c1[0]
    dy = c2[1] - c1[1]
    d = math.hypot(dx, dy)
    if d <= BOUNDARY_TOL:
        raise ConcentricCirclesError(f"circle centers coincide: {c1}, {c2}")
    tangent = (abs(d - (r1 + r2)) <= BOUNDARY_TOL
               or abs(d - abs(r1 - r2)) <= BOUNDARY_TOL)
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h_sq = r1 * r1 - a * a
    if not tangent and h_sq < 0.0:
        return []
    h = 0.0 if tangent else math.sqrt(max(h_sq, 0.0))
    ux, uy = dx / d, dy / d
    bx, by = c1[0] + a * ux, c1[1] + a * uy
    if tangent:
        return [(bx, by)]
    return [(bx - h * uy, by + h * ux), (bx + h * uy, by - h * ux)]


def trilaterate(c1, c2, c3, r1: float, r2: float, r3: float) -> list[tuple[float, float, float]]:
    """Intersection points of three spheres (0, 1 or 2 points).

    Raises CollinearCentersError when the centers do not span a plane; a
    radical-axis discriminant within BOUNDARY_TOL of zero gives the single
    tangent point.
    """
    ex = tuple(c2[k] - c1[k] for k in range(3))
    d = math.sqrt(sum(v * v for v in ex))
    scale = max(1.0, d)
    if d <= 1e-12 * scale:
        raise CollinearCentersError("first two centers coincide")
    ex = tuple(v / d for v in ex)
    k3 = tuple(c3[k] - c1[k] for k in range(3))
    i = sum(ex[k] * k3[k] for k in range(3))
    ey = tuple(k3[k] - i * ex[k] for k in range(3))
    j = math.sqrt(sum(v * v for v in ey))
    if j <= 1e-12 * max(1.0, math.sqrt(sum(v * v for v in k3))):
        raise CollinearCentersError("sphere centers are collinear")
    ey = tuple(v / j for v in ey)
    ez = (ex[1] * ey[2] - ex[2] * ey[1],
          ex[2] * ey[0] - ex[0] * ey[2],
          ex[0] * ey[1] - ex[1] * ey[0])

    x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    y = (r1 * r1 - r3 * r3 + i * i + j * j - 2.0 * i * x) / (2.0 * j)
    h_sq = r1 * r1 - x * x - y * y
    if h_sq < -BOUNDARY_TOL:
        return []
    base = tuple(c1[k] + x * ex[k] + y * ey[k] for k in range(3))
    if abs(h_sq) <= BOUNDARY_TOL:
        return [base]
    h = math.sqrt(h_sq)
    return [tuple(base[k] + h * ez[k] for k in range(3)),
            tuple(base[k] - h * ez[k] for k in range(3))]


def solve_linear_trig(a: float, b: float, d: float) -> list[float]:
    """Angles in (-pi, pi] with a*cos(angle) + b*sin(angle) = d, ascending.

    |d| within BOUNDARY_TOL of sqrt(a^2 + b^2) gives the single tangent
    solution.  a = b = 0 raises DegenerateEquationError for d != 0 and
    IndeterminateAngleError for d = 0 (any angle works).
    """
    if a == 0.0 and b == 0.0:
        if d == 0.0:
            raise IndeterminateAngleError("a = b = d = 0: the angle is free")
        raise DegenerateEquationError(f"a = b = 0 with d = {d!r} has no solution")
    r = math.hypot(a, b)
    if abs(d) - r > BOUNDARY_TOL:
        return []
    base = math.atan2(b, a)
    if abs(abs(d) - r) <= BOUNDARY_TOL:
        phi = 0.0 if d >= 0.0 else math.pi
        return [normalize_angle(base + phi)]
    phi = math.acos(max(-1.0, min(1.0, d / r)))
    angles = {normalize_angle(base + phi), normalize_angle(base - phi)}
    return sorted(angles)


# ---------------------------------------------------------------------------
# structure extraction from the coefficient tables


def _variable_offsets(leg, axes: tuple[str, ...], rho: float):
    """Map each axis in `axes` to the offset c of its form (axis + c - [rho]).

    Returns (offsets, residual_r_sq) where residual_r_sq is r_sq minus the
    squares of any constant-only forms.
    """
    idx = {name: BASIS.index(name) for name in axes}
    offsets: dict[str, float] = {}
    r_sq = leg.r_sq
    for k, row in enumerate(leg.rows):
        var = [name for name in axes if row[idx[name]] != 0.0]
        if not var:
            if any(row[i] != 0.0 for i in (0, 1, 2, 3, 4)):
                raise ValueError("form mixes coordinates outside the active axes")
            const = row[6] + row[5] * rho if row[5] != 0.0 else row[6]
            r_sq = r_sq - const * const
            continue
        if len(var) != 1 or row[idx[var[0]]] != 1.0:
            raise ValueError("form must carry a single active axis with coefficient 1")
        name = var[0]
        if name in offsets:
            raise ValueError(f"axis {name} appears in two forms of one leg")
        offsets[name] = row[6] + row[5] * rho
    return offsets, r_sq


def leg_sphere(leg, rho: float):
    """Center and squared radius of an alpha-free leg seen as a sphere in (x, y, z)."""
    offsets, r_sq = _variable_offsets(leg, ("x", "y", "z"), rho)
    center = tuple(-offsets.get(name, 0.0) for name in ("x", "y", "z"))
    return center, r_sq


def leg_circle(leg, rho: float, axes: tuple[str, str]):
    """Center and squared radius of an alpha-free leg in the two active axes."""
    offsets, r_sq = _variable_offsets(leg, axes, rho)
    center = (-offsets.get(axes[0], 0.0), -offsets.get(axes[1], 0.0))
    return center, r_sq


def orientation_equation(leg, rho, coords: dict):
    """Reduce an alpha-bearing leg to a*cos(alpha) + b*sin(alpha) = d.

    coords supplies the translation coordinates (floats or arrays); the
    reduction relies on the structural identities sum q_k*s_k = 0 and
    sum q_k^2 = sum s_k^2 that hold for every leg of the four modes.
    """
    vals = {"x": coords.get("x", 0.0), "y": coords.get("y", 0.0), "z": coords.get("z", 0.0)}
    a = 0.0
    b = 0.0
    p_sq = 0.0
    q_sq = 0.0
    s_sq = 0.0
    qs = 0.0
    for k, row in enumerate(leg.rows):
        p = row[0] * vals["x"] + row[1] * vals["y"] + row[2] * vals["z"] \
            + row[5] * rho + row[6]
        q, s = row[3], row[4]
        a = a + 2.0 * q * p
        b = b + 2.0 * s * p
        p_sq = p_sq + p * p
        q_sq += q * q
        s_sq += s * s
        qs += q * s
    if qs != 0.0 or q_sq != s_sq:
        raise ValueError("leg does not reduce to a linear trigonometric equation")
    d = leg.r_sq - p_sq - q_sq
    return a, b, d


# ---------------------------------------------------------------------------
# forward kinematics


@dataclass(frozen=True)
class FkSolution:
    pose: Pose
    working_mode: WorkingMode
    max_residual: float


@dataclass(frozen=True)
class FkSolutionSet:
    """Deduplicated forward-kinematics solutions, ordered by sign triple then coordinates."""

    solutions: tuple[FkSolution, ...]

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, idx):
        return self.solutions[idx]

    @property
    def poses(self) -> tuple[Pose, ...]:
        return tuple(s.pose for s in self.solutions)


def _recover_working_mode(system: ConstraintSystem, pose: Pose,
                          joints: JointInput) -> WorkingMode:
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    signs = []
    for leg, rho in zip(system.legs, joints.as_tuple()):
        g = leg.rho_free_value(pose.x, pose.y, pose.z, ca, sa)
        signs.append(1 if rho - g >= 0.0 else -1)
    return WorkingMode(tuple(signs))


def _poses_close(mode, p1: Pose, p2: Pose, tol: float) -> bool:
    d_sq = 0.0
    for name in mode.active:
        if name == "alpha":
            delta = math.remainder(p1.alpha - p2.alpha, 2.0 * math.pi)
        else:
            delta = p1.coord(name) - p2.coord(name)
        d_sq += delta * delta
    return math.sqrt(d_sq) <= tol


def forward_kinematics(system: ConstraintSystem, joints: JointInput) -> FkSolutionSet:
    """All platform poses compatible with the given actuator values.

    At most two solutions exist in the translation mode and at most four in
    the rotation modes.  Returns an empty set when no assembly closes; does
    not raise on unreachable inputs.
    """
    mode = system.mode
    rhos = joints.as_tuple()
    candidates: list[Pose] = []

    if not mode.has_rotation:
        spheres = [leg_sphere(leg, rho) for leg, rho in zip(system.legs, rhos)]
        radii = [math.sqrt(max(r_sq, 0.0)) for _, r_sq in spheres]
        if all(r_sq >= 0.0 for _, r_sq in spheres):
            try:
                pts = trilaterate(spheres[0][0], spheres[1][0], spheres[2][0], *radii)
            except CollinearCentersError:
                pts = []
            candidates = [Pose(x=p[0], y=p[1], z=p[2]) for p in pts]
    else:
        axes = mode.translation_axes
        free = [(leg, rho) for leg, rho in zip(system.legs, rhos) if leg.is_alpha_free]
        rot = [(leg, rho) for leg, rho in zip(system.legs, rhos) if not leg.is_alpha_free]
        if len(free) != 2 or len(rot) != 1:
            raise ValueError("expected exactly one alpha-bearing leg in a rotation mode")
        (c_a, ra_sq), (c_b, rb_sq) = (leg_circle(leg, rho, axes) for leg, rho in free)
        if ra_sq >= 0.0 and rb_sq >= 0.0:
            try:
                pts = intersect_circles(c_a, c_b, math.sqrt(ra_sq), math.sqrt(rb_sq))
            except ConcentricCirclesError:
                pts = []
        else:
            pts = []
        rot_leg, rot_rho = rot[0]
        for pt in pts:
            coords = {axes[0]: pt[0], axes[1]: pt[1]}
            a, b, d = orientation_equation(rot_leg, rot_rho, coords)
            try:
                angles = solve_linear_trig(a, b, d)
            except (DegenerateEquationError, IndeterminateAngleError):
                continue
            for alpha in angles:
                candidates.append(Pose(alpha=alpha, **coords))

    solutions: list[FkSolution] = []
    for pose in candidates:
        res = max(abs(v) for v in system.residuals(pose, joints))
        if res >= RESIDUAL_TOL:
            continue
        if any(_poses_close(mode, pose, s.pose, DEDUP_TOL) for s in solutions):
            continue
        solutions.append(FkSolution(pose, _recover_working_mode(system, pose, joints), res))

    solutions.sort(key=lambda s: (s.working_mode.signs, s.pose.x, s.pose.y,
                                  s.pose.z, s.pose.alpha))
    return FkSolutionSet(tuple(solutions))
