import math

import numpy as np
import pytest

from pipir import (JointInput, OffManifoldError, Pose, WorkingMode,
                   classify, enumerate_ik, inverse_kinematics, jacobians,
                   parallel_factor_values, residuals, serial_condition_values)

from conftest import fd_jacobians, sample_feasible_pose

PPP = WorkingMode.from_string("+++")
S391 = math.sqrt(391)


def test_jacobian_home_pose_hand_values(systems):
    joints = inverse_kinematics(systems[1], Pose(), PPP)
    pair = jacobians(systems[1], Pose(), joints)
    expect_a = 2 * np.array([
        [3 / 20, -S391 / 20, 0.0],
        [-3 / 20, -S391 / 20, 0.0],
        [0.0, -3 / 5, -4 / 5],
    ])
    assert pair.a == pytest.approx(expect_a, abs=1e-12)
    assert pair.det_a == pytest.approx(0.096 * S391, abs=1e-12)
    assert pair.det_a == pytest.approx(1.8982, abs=1e-4)
    assert pair.b_diag == pytest.approx((S391 / 10, S391 / 10, 1.2), abs=1e-12)


def test_b_is_diagonal(systems):
    rng = np.random.default_rng(3)
    for system in systems.values():
        pose = sample_feasible_pose(system, rng)
        joints = inverse_kinematics(system, pose, PPP)
        b = jacobians(system, pose, joints).b
        assert b == pytest.approx(np.diag(np.diag(b)))


def test_jacobians_match_finite_differences(systems):
    rng = np.random.default_rng(17)
    for mode_id, system in systems.items():
        for _ in range(50):
            pose = sample_feasible_pose(system, rng)
            wm = WorkingMode(tuple(int(s) for s in rng.choice([-1, 1], size=3)))
            joints = inverse_kinematics(system, pose, wm)
            pair = jacobians(system, pose, joints)
            fd_a, fd_b = fd_jacobians(system, pose, joints)
            for got, want in ((pair.a, fd_a), (pair.b, fd_b)):
                err = np.abs(got - want)
                scale = np.maximum(1.0, np.maximum(np.abs(got), np.abs(want)))
                assert (err <= 1e-6 * scale).all()


def test_velocity_relation(systems):
    # a pose rate v and the matching joint rate -B^-1 A v must keep the
    # residuals stationary to first order
    rng = np.random.default_rng(29)
    eps = 1e-6
    for system in systems.values():
        pose = sample_feasible_pose(system, rng, margin=1e-3)
        joints = inverse_kinematics(system, pose, PPP)
        pair = jacobians(system, pose, joints)
        v = rng.uniform(-1, 1, size=3)
        rho_dot = -np.linalg.solve(pair.b, pair.a @ v)
        stepped_pose = pose.replace(**{c: pose.coord(c) + eps * v[k]
                                       for k, c in enumerate(system.mode.active)})
        stepped = JointInput(*(np.array(joints.as_tuple()) + eps * rho_dot))
        res = residuals(system, stepped_pose, stepped)
        assert max(abs(r) for r in res) < 1e-10


def test_off_manifold_rejected(systems):
    with pytest.raises(OffManifoldError):
        jacobians(systems[1], Pose(), JointInput(0.0, 0.0, 0.0))


def test_classify_regular_at_home(systems):
    joints = inverse_kinematics(systems[1], Pose(), PPP)
    verdict = classify(systems[1], Pose(), joints)
    assert verdict.kind == "regular"
    assert verdict.det_a == pytest.approx(1.8982, abs=1e-4)
    assert min(abs(v) for v in verdict.b_diag) == pytest.approx(1.2, abs=1e-12)


def test_classify_serial_on_collapsed_branch(systems):
    # leg 1 at its reach boundary: rho1 = y and B_11 = 0
    pose = Pose(x=0.45, z=0.8)
    wm, joints = enumerate_ik(systems[1], pose)[0]
    verdict = classify(systems[1], pose, joints)
    assert verdict.is_serial
    assert verdict.serial_legs == (1,)
    assert joints.rho1 == pytest.approx(pose.y, abs=1e-12)


def test_classify_serial_matches_printed_condition_mode3(systems):
    # leg 3 of mode 3 is serial where -10 y - sin(alpha) + 10 rho3 = 0
    system = systems[3]
    pose = Pose(x=3 / 5, y=0.2)
    joints = inverse_kinematics(system, pose, PPP)
    assert -10 * pose.y - math.sin(pose.alpha) + 10 * joints.rho3 == pytest.approx(0, abs=1e-9)
    verdict = classify(system, pose, joints)
    assert verdict.is_serial and 3 in verdict.serial_legs


def test_serial_condition_values_scale(systems):
    rng = np.random.default_rng(41)
    system = systems[2]
    pose = sample_feasible_pose(system, rng)
    joints = inverse_kinematics(system, pose, PPP)
    vals = serial_condition_values(system, pose, joints)
    # leg 1 of mode 2: rho1 - (y - sin(alpha)/10), printed as -10y + sin + 10rho1
    printed = (-10 * pose.y + math.sin(pose.alpha) + 10 * joints.rho1) / 10
    assert vals[0] == pytest.approx(printed, abs=1e-12)


def test_parallel_factor_zero_mode2(systems):
    system = systems[2]
    pose = Pose(x=-9 / 40)
    joints = inverse_kinematics(system, pose, PPP)
    f = parallel_factor_values(system, pose, joints)
    assert abs(f[0]) < 1e-9
    verdict = classify(system, pose, joints)
    assert verdict.is_parallel


def test_parallel_factor_zero_mode4_leg1(systems):
    # alpha = 0 and rho1 = y zeroes the orientation factor -4cos*rho1 + 4y*cos - sin
    system = systems[4]
    pose = Pose(y=0.3, z=S391 / 20)
    joints = inverse_kinematics(system, pose, WorkingMode.from_string("-++"))
    assert joints.rho1 == pytest.approx(pose.y, abs=1e-9)
    f = parallel_factor_values(system, pose, joints)
    assert abs(f[1]) < 1e-9


def test_parallel_factor_zero_mode3_leg3(systems):
    # alpha = 0 and rho3 = y zeroes -10cos*rho3 + 10y*cos + 9sin
    system = systems[3]
    pose = Pose(x=3 / 5, y=0.4)
    joints = inverse_kinematics(system, pose, PPP)
    assert joints.rho3 == pytest.approx(pose.y, abs=1e-9)
    f = parallel_factor_values(system, pose, joints)
    assert abs(f[1]) < 1e-9


def test_mode1_single_factor_is_det(systems):
    joints = inverse_kinematics(systems[1], Pose(), PPP)
    f = parallel_factor_values(systems[1], Pose(), joints)
    assert len(f) == 1
    assert f[0] == pytest.approx(jacobians(systems[1], Pose(), joints).det_a)


def test_factor_product_tracks_det_sign(systems):
    rng = np.random.default_rng(53)
    for mode_id in (2, 3, 4):
        system = systems[mode_id]
        ratios = []
        for _ in range(300):
            pose = sample_feasible_pose(system, rng)
            wm = WorkingMode(tuple(int(s) for s in rng.choice([-1, 1], size=3)))
            joints = inverse_kinematics(system, pose, wm)
            det = jacobians(system, pose, joints).det_a
            f1, f2 = parallel_factor_values(system, pose, joints)
            if abs(f1 * f2) > 1e-9:
                assert det * f1 * f2 > 0.0
                ratios.append(det / (f1 * f2))
        ratios = np.array(ratios)
        assert ratios.std() / abs(ratios.mean()) < 1e-9  # constant ratio


def test_factor_zero_sets_lie_inside_det_zero_set(systems):
    # configurations sitting on either factor's zero set must be parallel
    # singular under the scaled determinant tolerance
    cases = [
        (2, Pose(x=-9 / 40), PPP),
        (3, Pose(x=3 / 5, y=0.4), PPP),
        (4, Pose(y=0.3, z=S391 / 20), WorkingMode.from_string("-++")),
    ]
    for mode_id, pose, wm in cases:
        system = systems[mode_id]
        joints = inverse_kinematics(system, pose, wm)
        factors = parallel_factor_values(system, pose, joints)
        assert min(abs(f) for f in factors) < 1e-10
        pair = jacobians(system, pose, joints)
        assert abs(pair.det_a) < 1e-8 * pair.det_scale


def test_min_b_vanishes_approaching_boundary(systems):
    # shrink toward the leg-3 reach boundary of mode 1 along the x-axis
    system = systems[1]
    values = []
    for x in (0.55, 0.59, 0.599, 0.5999):
        joints = inverse_kinematics(system, Pose(x=x), PPP)
        verdict = classify(system, Pose(x=x), joints)
        values.append(min(abs(v) for v in verdict.b_diag))
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 0.06
