"""Command-line front end: analyses as subcommands, CSV/report emission.

Exit codes: 0 success, 2 usage/configuration error, 3 unreachable pose or
empty result.  Output formatting is fixed so identical invocations produce
byte-identical output; CSV floats use 10 significant digits.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .model import (ConfigurationError, DesignParams, JointInput, Pose,
                    build_system, operation_mode, validate_pose)
from .kinematics import (UnreachablePoseError, WorkingMode, enumerate_ik,
                         forward_kinematics, inverse_kinematics)
from .singularity import classify
from .workspace import (GridMap, jointspace_map, jointspace_spec,
                        label_aspects, transition_report, workspace_map,
                        workspace_spec)

CONFIG_ENV = "PIPIR_CONFIG"

_CONFIG_KEYS = ("d1", "d2", "d3", "d4", "l", "preset", "tol_parallel",
                "tol_serial", "ws_res", "js_res", "threads", "outdir")


class UsageError(ValueError):
    pass


@dataclass
class Config:
    params: DesignParams = field(default_factory=DesignParams)
    preset: str = "consistent"
    tol_parallel: float = 1e-9
    tol_serial: float = 1e-9
    ws_res: int = 512
    js_res: int = 256
    threads: int = 1
    outdir: Path | None = None


def load_config(path: str | Path) -> Config:
    """Parse a `key = value` file ('#' starts a comment); unknown keys are errors."""
    values: dict[str, str] = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    cfg = Config()
    try:
        lengths = {k: float(values[k]) for k in ("d1", "d2", "d3", "d4", "l") if k in values}
        if lengths:
            base = {"d1": 0.5, "d2": 1.0, "d3": 0.1, "d4": 0.1, "l": 1.0}
            base.update(lengths)
            cfg.params = DesignParams(**base)
        if "preset" in values:
            cfg.preset = values["preset"]
        if "tol_parallel" in values:
            cfg.tol_parallel = float(values["tol_parallel"])
        if "tol_serial" in values:
            cfg.tol_serial = float(values["tol_serial"])
        if "ws_res" in values:
            cfg.ws_res = int(values["ws_res"])
        if "js_res" in values:
            cfg.js_res = int(values["js_res"])
        if "threads" in values:
            cfg.threads = int(values["threads"])
        if "outdir" in values:
            cfg.outdir = Path(values["outdir"])
    except (ValueError, ConfigurationError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    return cfg


def _fmt(value: float) -> str:
    """CSV float format: 10 significant digits."""
    return format(float(value), ".10g")


def _parse_floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"malformed number in {what}: {text!r}") from None
    if any(not math.isfinite(v) for v in vals):
        raise UsageError(f"non-finite value in {what}: {text!r}")
    return vals


def _parse_pose(text: str, mode_id: int, degrees: bool) -> Pose:
    x, y, z, alpha = _parse_floats(text, 4, "--pose")
    if degrees:
        alpha = math.radians(alpha)
    try:
        pose = Pose(x=x, y=y, z=z, alpha=alpha)
        validate_pose(operation_mode(mode_id), pose)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return pose


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="pipir", description=__doc__, add_help=True)
    p.add_argument("--config", help="config file (overrides $PIPIR_CONFIG)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, pose=False, joints=False, wm=None, res=False):
        sp.add_argument("--mode", type=int, required=True, choices=(1, 2, 3, 4))
        sp.add_argument("--preset", default=None)
        if pose:
            sp.add_argument("--pose", required=True, metavar="x,y,z,alpha")
            sp.add_argument("--degrees", action="store_true",
                            help="angles in degrees at the interface")
        if joints:
            sp.add_argument("--joints", required=True, metavar="r1,r2,r3")
        if wm is not None:
            sp.add_argument("--wm", default=wm)
        if res:
            sp.add_argument("--res", type=int, default=None)
            sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--out", default=None, help="write to file instead of stdout")

    sp = sub.add_parser("ik", help="inverse kinematics at a pose")
    common(sp, pose=True, wm="+++")
    sp.add_argument("--digits", type=int, default=6)

    sp = sub.add_parser("fk", help="forward kinematics at joint values")
    common(sp, joints=True)
    sp.add_argument("--degrees", action="store_true")
    sp.add_argument("--digits", type=int, default=6)

    sp = sub.add_parser("singular", help="singularity verdict at a pose")
    common(sp, pose=True, wm="+++")

    sp = sub.add_parser("wsmap", help="workspace section map (CSV)")
    common(sp, wm="+++", res=True)

    sp = sub.add_parser("jsmap", help="joint-space slice map (CSV)")
    common(sp, res=True)

    sp = sub.add_parser("transitions", help="operation-mode transition report")
    sp.add_argument("--preset", default=None)
    sp.add_argument("--res", type=int, default=None)
    sp.add_argument("--out", default=None, help="also write the report as CSV")
    return p


def _emit(text: str, out: str | None, cfg: Config, default_name: str) -> None:
    if out is None and cfg.outdir is not None:
        out = str(cfg.outdir / default_name)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _header_lines(kind: str, spec, cfg: Config, preset: str, extra=()) -> list[str]:
    lines = [f"# kind={kind}", f"# mode={spec.mode_id}", f"# preset={preset}"]
    if spec.sigma is not None:
        lines.append(f"# sigma={spec.sigma}")
    if spec.kind == "jointspace":
        lines.append(f"# rho1={_fmt(spec.rho1)}")
    lines += [
        f"# axis1={spec.axes[0]}",
        f"# axis2={spec.axes[1]}",
        f"# min1={_fmt(spec.range1[0])}",
        f"# max1={_fmt(spec.range1[1])}",
        f"# min2={_fmt(spec.range2[0])}",
        f"# max2={_fmt(spec.range2[1])}",
        f"# res1={spec.res1}",
        f"# res2={spec.res2}",
    ]
    for name, value in spec.fixed:
        lines.append(f"# {name}={_fmt(value)}")
    p = cfg.params
    lines += [f"# d1={_fmt(p.d1)}", f"# d2={_fmt(p.d2)}", f"# d3={_fmt(p.d3)}",
              f"# d4={_fmt(p.d4)}", f"# l={_fmt(p.l)}"]
    lines.extend(extra)
    return lines


def _workspace_csv(gmap: GridMap, cfg: Config, preset: str) -> str:
    spec = gmap.spec
    c1 = spec.centers(0)
    c2 = spec.centers(1)
    lines = _header_lines("workspace", spec, cfg, preset,
                          extra=[f"# tol_parallel={_fmt(cfg.tol_parallel)}"])
    lines.append("coord1,coord2,feasible,detA_sign,aspect_id")
    aspect = gmap.aspect
    for i in range(spec.res1):
        v1 = _fmt(c1[i])
        for j in range(spec.res2):
            lines.append(f"{v1},{_fmt(c2[j])},{int(gmap.feasible[i, j])},"
                         f"{int(gmap.det_sign[i, j])},{int(aspect[i, j])}")
    return "\n".join(lines) + "\n"


def _jointspace_csv(gmap: GridMap, cfg: Config, preset: str) -> str:
    spec = gmap.spec
    c1 = spec.centers(0)
    c2 = spec.centers(1)
    lines = _header_lines("jointspace", spec, cfg, preset)
    lines.append("rho2,rho3,n_fk")
    for i in range(spec.res1):
        v1 = _fmt(c1[i])
        for j in range(spec.res2):
            lines.append(f"{v1},{_fmt(c2[j])},{int(gmap.n_fk[i, j])}")
    return "\n".join(lines) + "\n"


def _transitions_text(report) -> str:
    lines = [f"transition analysis (preset={report.preset}, resolution={report.resolution})"]
    for entry in report.modes:
        m = entry.mode_id
        cons = ", ".join(f"{k} = {v:g}" for k, v in entry.constraints)
        lines.append(f"mode {m}: home line {cons}; sigma={entry.sigma}")
        lo, hi = entry.feasible_span
        if math.isnan(lo):
            lines.append(f"mode {m}: home line infeasible")
            continue
        lines.append(f"mode {m}: feasible {entry.axis} in [{lo:.10f}, {hi:.10f}]")
        for b in entry.boundaries:
            lines.append(f"mode {m}: boundary {entry.axis} = {b:.10f}")
        if not entry.boundaries:
            lines.append(f"mode {m}: no boundary on the home line")
        ids = ", ".join(str(a) for a in entry.reachable_aspects)
        lines.append(f"mode {m}: reachable aspects: {len(entry.reachable_aspects)} (ids {ids})")
    return "\n".join(lines) + "\n"


def _transitions_csv(report) -> str:
    lines = [f"# kind=transitions", f"# preset={report.preset}",
             f"# resolution={report.resolution}"]
    p = report.params
    lines += [f"# d1={_fmt(p.d1)}", f"# d2={_fmt(p.d2)}", f"# d3={_fmt(p.d3)}",
              f"# d4={_fmt(p.d4)}", f"# l={_fmt(p.l)}"]
    for entry in report.modes:
        m = entry.mode_id
        lines.append(f"# mode{m}_sigma={entry.sigma}")
        lines.append(f"# mode{m}_axis={entry.axis}")
        lines.append(f"# mode{m}_boundaries=" +
                     ";".join(f"{b:.10f}" for b in entry.boundaries))
    lines.append("mode,axis,t,aspect_id")
    for entry in report.modes:
        for t, aid in entry.samples:
            lines.append(f"{entry.mode_id},{entry.axis},{_fmt(t)},{aid}")
    return "\n".join(lines) + "\n"


def run(argv: list[str]) -> int:
    """Entry point; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        config_path = args.config or os.environ.get(CONFIG_ENV)
        cfg = load_config(config_path) if config_path else Config()
        preset = getattr(args, "preset", None) or cfg.preset

        if args.command == "ik":
            return _cmd_ik(args, cfg, preset)
        if args.command == "fk":
            return _cmd_fk(args, cfg, preset)
        if args.command == "singular":
            return _cmd_singular(args, cfg, preset)
        if args.command == "wsmap":
            return _cmd_wsmap(args, cfg, preset)
        if args.command == "jsmap":
            return _cmd_jsmap(args, cfg, preset)
        return _cmd_transitions(args, cfg, preset)
    except (UsageError, ConfigurationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _cmd_ik(args, cfg: Config, preset: str) -> int:
    system = build_system(args.mode, cfg.params, preset)
    pose = _parse_pose(args.pose, args.mode, args.degrees)
    fmt = f"{{:.{args.digits}f}}"
    lines = []
    if args.wm == "all":
        solutions = enumerate_ik(system, pose)
        if not solutions:
            print("no reachable working mode for this pose", file=sys.stderr)
            return 3
        for wm, joints in solutions:
            lines.append(f"{wm}," + ",".join(fmt.format(v) for v in joints.as_tuple()))
    else:
        try:
            wm = WorkingMode.from_string(args.wm)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        try:
            joints = inverse_kinematics(system, pose, wm)
        except UnreachablePoseError as exc:
            print(f"unreachable: {exc}", file=sys.stderr)
            return 3
        lines.append(",".join(fmt.format(v) for v in joints.as_tuple()))
    _emit("\n".join(lines) + "\n", args.out, cfg, "ik.txt")
    return 0


def _cmd_fk(args, cfg: Config, preset: str) -> int:
    system = build_system(args.mode, cfg.params, preset)
    r1, r2, r3 = _parse_floats(args.joints, 3, "--joints")
    solutions = forward_kinematics(system, JointInput(r1, r2, r3))
    if len(solutions) == 0:
        print("no assembly closes for these joint values", file=sys.stderr)
        return 3
    fmt = f"{{:.{args.digits}f}}"
    lines = []
    for sol in solutions:
        p = sol.pose
        alpha = math.degrees(p.alpha) if args.degrees else p.alpha
        coords = ",".join(fmt.format(v) for v in (p.x, p.y, p.z, alpha))
        lines.append(f"{sol.working_mode},{coords},{sol.max_residual:.3e}")
    _emit("\n".join(lines) + "\n", args.out, cfg, "fk.txt")
    return 0


def _cmd_singular(args, cfg: Config, preset: str) -> int:
    system = build_system(args.mode, cfg.params, preset)
    pose = _parse_pose(args.pose, args.mode, args.degrees)
    try:
        wm = WorkingMode.from_string(args.wm)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        joints = inverse_kinematics(system, pose, wm)
    except UnreachablePoseError as exc:
        print(f"unreachable: {exc}", file=sys.stderr)
        return 3
    verdict = classify(system, pose, joints,
                       parallel_tol=cfg.tol_parallel, serial_tol=cfg.tol_serial)
    lines = [f"kind: {verdict.kind}",
             f"detA: {_fmt(verdict.det_a)}",
             "B: " + ",".join(_fmt(v) for v in verdict.b_diag)]
    if verdict.serial_legs:
        lines.append("serial legs: " + ",".join(str(i) for i in verdict.serial_legs))
    _emit("\n".join(lines) + "\n", args.out, cfg, "singular.txt")
    return 0


def _cmd_wsmap(args, cfg: Config, preset: str) -> int:
    system = build_system(args.mode, cfg.params, preset)
    try:
        wm = WorkingMode.from_string(args.wm)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = args.res or cfg.ws_res
    threads = args.threads or cfg.threads
    spec = workspace_spec(args.mode, res, sigma=wm)
    gmap = workspace_map(system, spec, parallel_tol=cfg.tol_parallel, threads=threads)
    label_aspects(gmap)
    _emit(_workspace_csv(gmap, cfg, preset), args.out, cfg,
          f"wsmap-mode{args.mode}.csv")
    return 0


def _cmd_jsmap(args, cfg: Config, preset: str) -> int:
    system = build_system(args.mode, cfg.params, preset)
    res = args.res or cfg.js_res
    threads = args.threads or cfg.threads
    spec = jointspace_spec(args.mode, res)
    gmap = jointspace_map(system, spec, threads=threads)
    _emit(_jointspace_csv(gmap, cfg, preset), args.out, cfg,
          f"jsmap-mode{args.mode}.csv")
    return 0


def _cmd_transitions(args, cfg: Config, preset: str) -> int:
    res = args.res or cfg.ws_res
    report = transition_report(cfg.params, res, preset=preset)
    sys.stdout.write(_transitions_text(report))
    if args.out is not None:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(_transitions_csv(report))
    elif cfg.outdir is not None:
        path = cfg.outdir / "transitions.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_transitions_csv(report))
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
