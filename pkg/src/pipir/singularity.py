"""Analytic Jacobians and serial/parallel singularity classification.

Differentiating the leg constraints along a motion gives

    A * d(pose)/dt + B * d(rho)/dt = 0

with A the 3x3 matrix of partials with respect to the mode's active pose
coordinates and B diagonal (each residual involves exactly one actuator),
B_ii = 2*(rho_i - g_i).

A serial singularity (det B = 0) means some leg sits at a workspace
boundary; a parallel singularity (det A = 0) means the platform gains
uncontrolled motion and splits the workspace into aspects.  det A is the
ground truth here; the factorized loci returned by
`parallel_factor_values` are cross-checks valid for the default geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BASIS, ConstraintSystem, JointInput, Pose

OFF_MANIFOLD_TOL = 1e-6
PARALLEL_TOL = 1e-9
SERIAL_TOL = 1e-9

_COORD_COLUMN = {name: BASIS.index(name) for name in ("x", "y", "z")}


class OffManifoldError(ValueError):
    """The configuration does not satisfy the constraints closely enough."""


def det3(rows):
    """Determinant of a 3x3 given as nested sequences; entries may be arrays."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def jacobian_value_rows(system: ConstraintSystem, x, y, z, ca, sa, rhos):
    """Rows of A as nested lists (legs x active coordinates); array-friendly.

    The alpha column applies the chain rule d(cos a) = -sin a, d(sin a) = cos a.
    """
    rows = []
    for leg, rho in zip(system.legs, rhos):
        forms = leg.form_values(x, y, z, ca, sa, rho)
        row = []
        for coord in system.mode.active:
            total = 0.0
            for k in range(3):
                c = leg.rows[k]
                if coord == "alpha":
                    dk = -c[3] * sa + c[4] * ca
                else:
                    dk = c[_COORD_COLUMN[coord]]
                    if dk == 0.0:
                        continue
                total = total + 2.0 * forms[k] * dk
            row.append(total)
        rows.append(row)
    return rows


def b_diagonal(system: ConstraintSystem, x, y, z, ca, sa, rhos):
    """Diagonal of B: 2*(rho_i - g_i); array-friendly."""
    out = []
    for leg, rho in zip(system.legs, rhos):
        g = leg.rho_free_value(x, y, z, ca, sa)
        out.append(2.0 * (rho - g))
    return out


@dataclass(frozen=True)
class JacobianPair:
    """A (pose side) and B (actuator side), rows/entries ordered by leg.

    Columns of `a` follow `active`.
    """

    a: np.ndarray
    b: np.ndarray
    active: tuple[str, str, str]

    @property
    def det_a(self) -> float:
        return float(det3(self.a))

    @property
    def b_diag(self) -> tuple[float, float, float]:
        return (float(self.b[0, 0]), float(self.b[1, 1]), float(self.b[2, 2]))

    @property
    def det_scale(self) -> float:
        """Product of the row norms of A; the natural magnitude for det A."""
        return float(np.prod(np.sqrt((np.asarray(self.a) ** 2).sum(axis=1))))


def jacobians(system: ConstraintSystem, pose: Pose, joints: JointInput) -> JacobianPair:
    """Analytic A and B at a configuration on the constraint manifold."""
    res = system.residuals(pose, joints)
    worst = max(abs(v) for v in res)
    if worst >= OFF_MANIFOLD_TOL:
        raise OffManifoldError(
            f"configuration violates the constraints by {worst:.3e} (limit {OFF_MANIFOLD_TOL:g})")
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    rhos = joints.as_tuple()
    a = np.array(jacobian_value_rows(system, pose.x, pose.y, pose.z, ca, sa, rhos))
    b = np.diag(b_diagonal(system, pose.x, pose.y, pose.z, ca, sa, rhos))
    return JacobianPair(a, b, system.mode.active)


@dataclass(frozen=True)
class SingularityVerdict:
    """Outcome of the serial/parallel classification at one configuration."""

    kind: str                      # "regular" | "serial" | "parallel" | "serial+parallel"
    serial_legs: tuple[int, ...]   # 1-based legs with |B_ii| below tolerance
    det_a: float
    det_scale: float
    b_diag: tuple[float, float, float]

    @property
    def is_serial(self) -> bool:
        return "serial" in self.kind

    @property
    def is_parallel(self) -> bool:
        return "parallel" in self.kind


def classify(system: ConstraintSystem, pose: Pose, joints: JointInput, *,
             parallel_tol: float = PARALLEL_TOL,
             serial_tol: float = SERIAL_TOL) -> SingularityVerdict:
    """Classify a configuration.

    Serial detection is absolute on the B diagonal; parallel detection is
    relative, |det A| <= parallel_tol * (product of row norms), since det A
    scales with the configuration while the B entries stay O(1).
    """
    pair = jacobians(system, pose, joints)
    b_diag = pair.b_diag
    serial = tuple(i + 1 for i, v in enumerate(b_diag) if abs(v) <= serial_tol)
    det_a = pair.det_a
    scale = pair.det_scale
    parallel = abs(det_a) <= parallel_tol * scale
    if serial and parallel:
        kind = "serial+parallel"
    elif serial:
        kind = "serial"
    elif parallel:
        kind = "parallel"
    else:
        kind = "regular"
    return SingularityVerdict(kind, serial, det_a, scale, b_diag)


def parallel_factor_values(system: ConstraintSystem, pose: Pose,
                           joints: JointInput) -> tuple[float, ...]:
    """Factorized parallel-singularity expressions, evaluated numerically.

    Modes 2-4 factor det A into a position part and an orientation part;
    their product has a constant nonzero ratio to det A.  Mode 1 does not
    factor, so the single value returned is det A itself.  The expressions
    are calibrated for the default link lengths.

    Two derivation fixes are baked in relative to commonly quoted forms:
    the mode-2 position factor ends in 3*(rho3 - y), and mode 1 is handled
    by the determinant only.  Mode 2's orientation factor is also negated so
    that the factor product carries the sign of det A in every mode (the
    constant ratios are -1/100 for the quoted form, +1/250 and +1/25 for
    modes 3 and 4); a zero set does not care about overall sign.
    """
    mode_id = system.mode.id
    x, y, z = pose.x, pose.y, pose.z
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    r1, r2, r3 = joints.as_tuple()
    if mode_id == 1:
        return (jacobians(system, pose, joints).det_a,)
    if mode_id == 2:
        f1 = 20.0 * x * (r2 - r3) + 3.0 * (r3 - y)
        f2 = 4.0 * x * sa + 4.0 * ca * r1 - 4.0 * y * ca + sa
        return (f1, f2)
    if mode_id == 3:
        f1 = 20.0 * r1 * x - 20.0 * r2 * x - 3.0 * r1 - 3.0 * r2 + 6.0 * y
        f2 = -10.0 * ca * r3 + 10.0 * y * ca + 9.0 * sa
        return (f1, f2)
    f1 = 5.0 * r2 * z - 5.0 * z * r3 - 4.0 * r2 + 4.0 * y
    f2 = -4.0 * ca * r1 + 4.0 * y * ca - sa
    return (f1, f2)


def serial_condition_values(system: ConstraintSystem, pose: Pose,
                            joints: JointInput) -> tuple[float, float, float]:
    """Per-leg boundary expressions rho_i - g_i; zero exactly at a serial singularity.

    These match the published per-mode conditions up to constant scale
    (e.g. -10*y + sin(alpha) + 10*rho1 for legs whose anchor rides the
    platform rotation).
    """
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    out = []
    for leg, rho in zip(system.legs, joints.as_tuple()):
        g = leg.rho_free_value(pose.x, pose.y, pose.z, ca, sa)
        out.append(rho - g)
    return tuple(out)
