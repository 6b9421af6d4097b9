"""Parsing and validation of the CSV map files emitted by the pipir CLI.

Files carry `# key=value` comment lines (mode, ranges, resolution, ...),
one header row and one data row per grid cell in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

REQUIRED_KEYS = ("mode", "res1", "res2", "min1", "max1", "min2", "max2")


class SchemaError(ValueError):
    """The file does not match the expected map schema."""


@dataclass(frozen=True)
class MapFile:
    header: dict[str, str]
    columns: dict[str, np.ndarray]

    @property
    def kind(self) -> str:
        return self.header.get("kind", "")

    @property
    def mode(self) -> int:
        return int(self.header["mode"])

    @property
    def res(self) -> tuple[int, int]:
        return (int(self.header["res1"]), int(self.header["res2"]))

    @property
    def extent(self) -> tuple[float, float, float, float]:
        h = self.header
        return (float(h["min1"]), float(h["max1"]), float(h["min2"]), float(h["max2"]))

    @property
    def axes(self) -> tuple[str, str]:
        return (self.header.get("axis1", "axis1"), self.header.get("axis2", "axis2"))

    def grid(self, column: str) -> np.ndarray:
        """Column reshaped to (res1, res2), matching the row-major cell order."""
        if column not in self.columns:
            raise SchemaError(f"no column {column!r} in map file")
        r1, r2 = self.res
        return self.columns[column].reshape(r1, r2)


def _split_header(text: str):
    header: dict[str, str] = {}
    rows: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                header[key.strip()] = value.strip()
            continue
        rows.append(line)
    return header, rows


def load_map(path: str | Path) -> MapFile:
    """Read and validate a workspace or joint-space map CSV."""
    header, rows = _split_header(Path(path).read_text())
    missing = [k for k in REQUIRED_KEYS if k not in header]
    if missing:
        raise SchemaError(f"{path}: missing header keys {missing}")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    names = rows[0].split(",")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: bad data row ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(names):
        raise SchemaError(f"{path}: ragged rows")
    r1, r2 = int(header["res1"]), int(header["res2"])
    if data.shape[0] != r1 * r2:
        raise SchemaError(
            f"{path}: {data.shape[0]} rows but resolution {r1}x{r2} needs {r1 * r2}")
    columns = {name: data[:, k] for k, name in enumerate(names)}
    return MapFile(header, columns)


@dataclass(frozen=True)
class TransitionsFile:
    header: dict[str, str]
    rows: tuple[tuple[int, str, float, int], ...]

    def boundaries(self, mode: int) -> tuple[float, ...]:
        raw = self.header.get(f"mode{mode}_boundaries", "")
        return tuple(float(v) for v in raw.split(";") if v)

    def axis(self, mode: int) -> str:
        return self.header.get(f"mode{mode}_axis", "t")

    @property
    def modes(self) -> tuple[int, ...]:
        seen: list[int] = []
        for m, _, _, _ in self.rows:
            if m not in seen:
                seen.append(m)
        return tuple(seen)

    def samples(self, mode: int) -> tuple[tuple[float, int], ...]:
        return tuple((t, a) for m, _, t, a in self.rows if m == mode)


def load_transitions(path: str | Path) -> TransitionsFile:
    header, rows = _split_header(Path(path).read_text())
    if not rows or rows[0] != "mode,axis,t,aspect_id":
        raise SchemaError(f"{path}: not a transitions file")
    if len(rows) == 1:
        raise SchemaError(f"{path}: empty transitions report")
    parsed = []
    for line in rows[1:]:
        m, axis, t, aid = line.split(",")
        parsed.append((int(m), axis, float(t), int(aid)))
    return TransitionsFile(header, tuple(parsed))
