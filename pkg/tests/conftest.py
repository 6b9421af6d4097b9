import math

import numpy as np
import pytest

from pipir import JointInput, Pose, build_system, leg_quadratics, residuals

#: sampling boxes per mode for random feasible poses: (coord, lo, hi)
POSE_BOXES = {
    1: (("x", -1.2, 1.2), ("y", -1.0, 1.0), ("z", -1.2, 1.2)),
    2: (("x", -0.7, 0.7), ("y", -1.0, 1.0), ("alpha", -math.pi, math.pi)),
    3: (("x", -0.7, 0.7), ("y", -1.0, 1.0), ("alpha", -math.pi, math.pi)),
    4: (("y", -1.0, 1.0), ("z", -0.3, 1.1), ("alpha", -math.pi, math.pi)),
}


def sample_feasible_pose(system, rng, margin=1e-6, max_tries=200):
    """Rejection-sample a pose with every leg discriminant above `margin`."""
    box = POSE_BOXES[system.mode.id]
    for _ in range(max_tries):
        coords = {name: float(rng.uniform(lo, hi)) for name, lo, hi in box}
        pose = Pose(**coords)
        if all(d > margin for _, d in leg_quadratics(system, pose)):
            return pose
    raise RuntimeError("could not sample a feasible pose")


def fd_jacobians(system, pose, joints, h=1e-6):
    """Central finite-difference A and B; oracle independent of the analytic path."""
    active = system.mode.active
    a = np.zeros((3, 3))
    for col, name in enumerate(active):
        hi = residuals(system, pose.replace(**{name: pose.coord(name) + h}), joints)
        lo = residuals(system, pose.replace(**{name: pose.coord(name) - h}), joints)
        for row in range(3):
            a[row, col] = (hi[row] - lo[row]) / (2 * h)
    b = np.zeros((3, 3))
    for k in range(3):
        r = list(joints.as_tuple())
        r[k] += h
        hi = residuals(system, pose, JointInput(*r))
        r[k] -= 2 * h
        lo = residuals(system, pose, JointInput(*r))
        b[k, k] = (hi[k] - lo[k]) / (2 * h)
    return a, b


@pytest.fixture(scope="session")
def systems():
    return {m: build_system(m) for m in (1, 2, 3, 4)}


@pytest.fixture(scope="session")
def compat_system_4():
    return build_system(4, preset="paper-ik-mode4")
