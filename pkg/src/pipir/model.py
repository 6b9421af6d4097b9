"""Robot geometry and per-operation-mode constraint systems.

The mechanism is a three-legged parallel robot (prismatic actuators along
the y-axis) whose platform motion pattern is selected by locking or
releasing joints.  Four operation modes exist:

    mode  translation   rotation   locked / released
    1     x, y, z       none       P1, P2  / R1, R2, R3
    2     x, y          about z    R1, R2, P2 / R3, P1
    3     x, y          about x    R1, R2, P1 / R3, P2
    4     y, z          about z    R3, P2  / R1, R2, P1

Each leg contributes one scalar constraint of the form

    L1^2 + L2^2 + L3^2 = r^2

where every L_k is linear over the basis (x, y, z, cos(alpha), sin(alpha),
rho, 1) and the actuator value rho enters exactly one form, with
coefficient -1.  Everything downstream (closed-form IK, analytic
Jacobians, the forward-kinematics reduction to circle intersection plus a
linear trigonometric equation) is read off this coefficient table, so the
four modes share a single code path.

All evaluation methods are plain arithmetic over their inputs and accept
floats or numpy arrays alike; the workspace module exploits this for grid
evaluation.  Every object here is immutable and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BASIS = ("x", "y", "z", "cos_a", "sin_a", "rho", "one")
TWO_PI = 2.0 * math.pi

#: discriminant / tangency magnitudes below this are treated as exact zeros
BOUNDARY_TOL = 1e-12

PRESETS = ("consistent", "paper-ik-mode4")


class ConfigurationError(ValueError):
    """Unknown mode or preset, or invalid robot parameters."""


def normalize_angle(alpha: float) -> float:
    """Reduce an angle to the half-open interval (-pi, pi]."""
    a = math.remainder(alpha, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class DesignParams:
    """Link lengths of the robot, in normalized (dimensionless) units."""

    d1: float = 0.5
    d2: float = 1.0
    d3: float = 0.1
    d4: float = 0.1
    l: float = 1.0

    def __post_init__(self) -> None:
        for name in ("d1", "d2", "d3", "d4", "l"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigurationError(f"{name} must be a positive finite length, got {v!r}")


@dataclass(frozen=True)
class OperationMode:
    """One motion pattern of the platform, selected by locking/releasing joints."""

    id: int
    locked: frozenset[str]
    released: frozenset[str]
    active: tuple[str, str, str]
    rotation_axis: str | None

    @property
    def has_rotation(self) -> bool:
        return "alpha" in self.active

    @property
    def translation_axes(self) -> tuple[str, ...]:
        return tuple(c for c in self.active if c != "alpha")

    @property
    def inactive(self) -> tuple[str, ...]:
        return tuple(c for c in ("x", "y", "z", "alpha") if c not in self.active)


OPERATION_MODES: dict[int, OperationMode] = {
    1: OperationMode(1, frozenset({"P1", "P2"}), frozenset({"R1", "R2", "R3"}),
                     ("x", "y", "z"), None),
    2: OperationMode(2, frozenset({"R1", "R2", "P2"}), frozenset({"R3", "P1"}),
                     ("x", "y", "alpha"), "z"),
    3: OperationMode(3, frozenset({"R1", "R2", "P1"}), frozenset({"R3", "P2"}),
                     ("x", "y", "alpha"), "x"),
    4: OperationMode(4, frozenset({"R3", "P2"}), frozenset({"R1", "R2", "P1"}),
                     ("y", "z", "alpha"), "z"),
}


def operation_mode(mode_id: int) -> OperationMode:
    try:
        return OPERATION_MODES[mode_id]
    except KeyError:
        raise ConfigurationError(f"unknown operation mode {mode_id!r}; expected 1..4") from None


@dataclass(frozen=True)
class Pose:
    """Platform coordinates.  Coordinates a mode does not actuate are held at 0.

    alpha is normalized to (-pi, pi] on construction.
    """

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    alpha: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", normalize_angle(self.alpha))

    def coord(self, name: str) -> float:
        return getattr(self, name)

    def replace(self, **kw) -> "Pose":
        d = {"x": self.x, "y": self.y, "z": self.z, "alpha": self.alpha}
        d.update(kw)
        return Pose(**d)


def validate_pose(mode: OperationMode, pose: Pose) -> None:
    """Reject poses that move a coordinate the mode holds at zero."""
    for name in mode.inactive:
        if pose.coord(name) != 0.0:
            raise ValueError(
                f"mode {mode.id} holds {name} at 0, got {name}={pose.coord(name)!r}")


@dataclass(frozen=True)
class JointInput:
    """Prismatic actuator positions along the y-axis.  No joint limits apply."""

    rho1: float
    rho2: float
    rho3: float

    def __post_init__(self) -> None:
        for name in ("rho1", "rho2", "rho3"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite real, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.rho1, self.rho2, self.rho3)

    def shifted(self, delta: float) -> "JointInput":
        return JointInput(self.rho1 + delta, self.rho2 + delta, self.rho3 + delta)


Row = tuple[float, float, float, float, float, float, float]


def _row(x=0.0, y=0.0, z=0.0, cos_a=0.0, sin_a=0.0, rho=0.0, one=0.0) -> Row:
    return (float(x), float(y), float(z), float(cos_a), float(sin_a), float(rho), float(one))


@dataclass(frozen=True)
class LegConstraint:
    """One leg's constraint: the sum of three squared linear forms equals r_sq.

    rows holds the coefficients of the three forms over BASIS; rho_row is
    the index of the single form that carries the actuator (coefficient -1).
    """

    rows: tuple[Row, Row, Row]
    r_sq: float
    rho_row: int

    def __post_init__(self) -> None:
        carriers = [k for k in range(3) if self.rows[k][5] != 0.0]
        if carriers != [self.rho_row] or self.rows[self.rho_row][5] != -1.0:
            raise ConfigurationError(
                "the actuator must appear in exactly one form, with coefficient -1")

    def form_values(self, x, y, z, ca, sa, rho):
        """Values of the three linear forms; inputs may be floats or arrays.

        y and rho are combined first: the platform height and the actuators
        only couple through their difference, and grouping them keeps that
        cancellation exact in floating point.
        """
        out = []
        for c in self.rows:
            out.append((c[1] * y + c[5] * rho) + c[0] * x + c[2] * z
                       + c[3] * ca + c[4] * sa + c[6])
        return tuple(out)

    def residual(self, x, y, z, ca, sa, rho):
        f1, f2, f3 = self.form_values(x, y, z, ca, sa, rho)
        return f1 * f1 + f2 * f2 + f3 * f3 - self.r_sq

    def rho_free_value(self, x, y, z, ca, sa):
        """Value g of the actuator-bearing form at rho = 0 (the form is g - rho)."""
        c = self.rows[self.rho_row]
        return c[0] * x + c[1] * y + c[2] * z + c[3] * ca + c[4] * sa + c[6]

    def discriminant(self, x, y, z, ca, sa):
        """r_sq minus the squared actuator-free forms; >= 0 iff the leg can reach.

        The two roots of the leg constraint are rho = g +/- sqrt(discriminant).
        """
        d = self.r_sq
        for k in range(3):
            if k == self.rho_row:
                continue
            c = self.rows[k]
            v = c[0] * x + c[1] * y + c[2] * z + c[3] * ca + c[4] * sa + c[6]
            d = d - v * v
        return d

    @property
    def is_alpha_free(self) -> bool:
        return all(c[3] == 0.0 and c[4] == 0.0 for c in self.rows)


def _leg(rows: tuple[Row, Row, Row], r_sq: float) -> LegConstraint:
    carriers = [k for k in range(3) if rows[k][5] != 0.0]
    if len(carriers) != 1:
        raise ConfigurationError("leg must have exactly one actuator-bearing form")
    return LegConstraint(rows, float(r_sq), carriers[0])


@dataclass(frozen=True)
class ConstraintSystem:
    """A full operation mode: three leg constraints plus the mode descriptor."""

    mode: OperationMode
    legs: tuple[LegConstraint, LegConstraint, LegConstraint]
    params: DesignParams
    preset: str

    def residuals(self, pose: Pose, joints: JointInput) -> tuple[float, float, float]:
        ca = math.cos(pose.alpha)
        sa = math.sin(pose.alpha)
        rs = joints.as_tuple()
        return tuple(leg.residual(pose.x, pose.y, pose.z, ca, sa, rs[i])
                     for i, leg in enumerate(self.legs))


def build_system(mode: OperationMode | int,
                 params: DesignParams | None = None,
                 preset: str = "consistent") -> ConstraintSystem:
    """Assemble the constraint system of one operation mode.

    preset "consistent" uses the leg constants that make all four modes agree
    on the home-pose actuator values.  preset "paper-ik-mode4" swaps in an
    alternate calibration of mode 4 (leg-1 offset d1 instead of d1/2, reduced
    leg-2/leg-3 rod lengths) kept for cross-checking reported boundary
    values; modes 1-3 are identical under both presets.
    """
    if isinstance(mode, int):
        mode = operation_mode(mode)
    elif mode.id not in OPERATION_MODES:
        raise ConfigurationError(f"unknown operation mode {mode!r}")
    if params is None:
        params = DesignParams()
    if preset not in PRESETS:
        raise ConfigurationError(f"unknown preset {preset!r}; expected one of {PRESETS}")

    d1, d2, d3, d4, l = params.d1, params.d2, params.d3, params.d4, params.l
    a = d1 / 2 - d3          # x-offset between actuator rails and platform anchors
    c3z = d2 - 2 * d4        # z-offset of the vertical leg's sphere center
    l_sq = l * l

    if mode.id == 1:
        legs = (
            _leg((_row(x=1, one=+a), _row(y=1, rho=-1), _row(z=1)), l_sq),
            _leg((_row(x=1, one=-a), _row(y=1, rho=-1), _row(z=1)), l_sq),
            _leg((_row(x=1), _row(y=1, rho=-1), _row(z=1, one=-c3z)), l_sq),
        )
    elif mode.id == 2:
        legs = (
            _leg((_row(x=1, cos_a=-d3, one=d1 / 2), _row(y=1, sin_a=-d3, rho=-1), _row()), l_sq),
            _leg((_row(x=1, one=-a), _row(y=1, rho=-1), _row()), l_sq),
            _leg((_row(x=1), _row(y=1, rho=-1), _row()), l_sq - c3z * c3z),
        )
    elif mode.id == 3:
        legs = (
            _leg((_row(x=1, one=+a), _row(y=1, rho=-1), _row()), l_sq),
            _leg((_row(x=1, one=-a), _row(y=1, rho=-1), _row()), l_sq),
            _leg((_row(x=1), _row(y=1, sin_a=d4, rho=-1), _row(cos_a=d4, one=-(d2 - d4))), l_sq),
        )
    else:
        if preset == "paper-ik-mode4":
            leg1_const = d1
            r2_sq = l_sq - d3 * d3
            r3_sq = l_sq - (d1 / 2) ** 2
        else:
            leg1_const = d1 / 2
            r2_sq = l_sq - a * a
            r3_sq = l_sq
        legs = (
            _leg((_row(cos_a=-d3, one=leg1_const), _row(y=1, sin_a=-d3, rho=-1), _row(z=1)), l_sq),
            _leg((_row(), _row(y=1, rho=-1), _row(z=1)), r2_sq),
            _leg((_row(), _row(y=1, rho=-1), _row(z=1, one=-c3z)), r3_sq),
        )
    return ConstraintSystem(mode, legs, params, preset)


def residuals(system: ConstraintSystem, pose: Pose, joints: JointInput) -> tuple[float, float, float]:
    """Per-leg constraint violation; all three are zero iff the configuration closes."""
    return system.residuals(pose, joints)


Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class PointSet:
    """Characteristic points of one configuration, for rendering and diagnostics.

    The constraint systems are authoritative; these points are not used to
    re-derive them.
    """

    a: tuple[Vec3, Vec3, Vec3]
    b: tuple[Vec3, Vec3, Vec3]
    c: tuple[Vec3, Vec3, Vec3]
    p: Vec3


def leg_points(mode: OperationMode | int, pose: Pose, joints: JointInput,
               params: DesignParams | None = None) -> PointSet:
    """Base anchors A_i, slider positions B_i, platform anchors C_i and tool point P."""
    if isinstance(mode, int):
        mode = operation_mode(mode)
    if params is None:
        params = DesignParams()
    d1, d2, d3, d4 = params.d1, params.d2, params.d3, params.d4
    x, y, z = pose.x, pose.y, pose.z
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)

    a1: Vec3 = (-d1 / 2, 0.0, 0.0)
    a2: Vec3 = (d1 / 2 - d3, 0.0, 0.0)
    a3: Vec3 = (0.0, 0.0, d2 - d4)
    b = tuple((ax, ay + r, az) for (ax, ay, az), r in
              zip((a1, a2, a3), joints.as_tuple()))

    if mode.id == 1:
        c = ((x - d3, y, z), (x + d3, y, z), (x, y, z + d4))
        p: Vec3 = (x, y, z)
    elif mode.id == 2:
        c = ((x - d3 * ca, y - d3 * sa, 0.0), (x + d3 * ca, y + d3 * sa, 0.0), (x, y, d4))
        p = (x, y, 0.0)
    elif mode.id == 3:
        c = ((x - d3, y, 0.0), (x + d3, y, 0.0), (x, y + d4 * sa, d4 * ca))
        p = (x, y, 0.0)
    else:
        c = ((-d3 * ca, y - d3 * sa, z), (d3 * ca, y + d3 * sa, z), (0.0, y, z + d4))
        p = (0.0, y, z)
    return PointSet((a1, a2, a3), b, c, p)
