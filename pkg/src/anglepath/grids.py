"""Occupancy grids and MovingAI map/scenario ingestion.

Coordinates are (col, row) with row 0 at the top of the file, matching the
conventions of MovingAI ``.scen`` files, so published scenario coordinates
work unmodified. The agent occupies cell centers.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

Cell = tuple[int, int]  # (col, row)

# Ground-agent terrain convention: trees and water block, swamp is passable.
PASSABLE_CHARS = frozenset(".GS")
BLOCKED_CHARS = frozenset("@OTW")


class ParseError(ValueError):
    """Malformed map or scenario input; message names the offending line."""


class InputError(ValueError):
    """Invalid planning input (bad start/goal, inconsistent config)."""


class Grid:
    """Immutable occupancy map of blocked and unblocked cells."""

    __slots__ = ("width", "height", "blocked", "_flat")

    def __init__(self, blocked: np.ndarray):
        blocked = np.asarray(blocked, dtype=bool)
        if blocked.ndim != 2 or blocked.size == 0:
            raise ValueError("blocked must be a nonempty 2-D boolean matrix")
        blocked = blocked.copy()
        blocked.flags.writeable = False
        self.height, self.width = blocked.shape
        self.blocked = blocked
        # Row-major byte view: fast scalar lookups in the search hot loop.
        self._flat = blocked.astype(np.uint8).tobytes()

    def in_bounds(self, col: int, row: int) -> bool:
        return 0 <= col < self.width and 0 <= row < self.height

    def blocked_at(self, col: int, row: int) -> bool:
        return bool(self._flat[row * self.width + col])

    def blocked_count(self) -> int:
        return int(self.blocked.sum())

    def __repr__(self) -> str:
        return f"Grid({self.width}x{self.height}, {self.blocked_count()} blocked)"


@dataclass(frozen=True)
class Instance:
    """One start/goal task bound to a named map."""

    map_id: str
    start: Cell
    goal: Cell
    bucket: int | None = None
    reference_length: float | None = None

    @property
    def instance_id(self) -> str:
        s, g = self.start, self.goal
        return f"{self.map_id}:{s[0]},{s[1]}->{g[0]},{g[1]}"


@dataclass(frozen=True)
class ScenarioSet:
    map_id: str
    instances: tuple[Instance, ...]

    def __len__(self) -> int:
        return len(self.instances)


def _as_text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_map(data: str | bytes) -> Grid:
    """Parse a MovingAI ``.map`` file into a Grid.

    Header must provide ``type``, ``height H`` and ``width W`` lines followed
    by a ``map`` line and exactly H rows of W terrain characters.
    """
    lines = _as_text(data).splitlines()
    height = width = None
    body_start = None
    for idx, raw in enumerate(lines):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        key = fields[0].lower()
        if key == "map":
            body_start = idx + 1
            break
        if key == "type":
            if len(fields) != 2:
                raise ParseError(f"line {idx + 1}: malformed type header: {raw!r}")
        elif key in ("height", "width"):
            if len(fields) != 2 or not fields[1].isdigit() or int(fields[1]) <= 0:
                raise ParseError(f"line {idx + 1}: malformed {key} header: {raw!r}")
            if key == "height":
                height = int(fields[1])
            else:
                width = int(fields[1])
        else:
            raise ParseError(f"line {idx + 1}: unexpected header line: {raw!r}")
    if body_start is None:
        raise ParseError("missing 'map' header line")
    if height is None or width is None:
        raise ParseError(f"line {body_start}: header lacks height or width")

    rows = [raw for raw in lines[body_start:] if raw.strip()]
    if len(rows) != height:
        raise ParseError(
            f"line {body_start + 1}: expected {height} map rows, found {len(rows)}"
        )
    blocked = np.zeros((height, width), dtype=bool)
    for r, raw in enumerate(rows):
        row = raw.rstrip("\r")
        if len(row) != width:
            raise ParseError(
                f"line {body_start + r + 1}: row length {len(row)} != width {width}"
            )
        for c, ch in enumerate(row):
            if ch in BLOCKED_CHARS:
                blocked[r, c] = True
            elif ch not in PASSABLE_CHARS:
                raise ParseError(
                    f"line {body_start + r + 1}: unknown terrain character {ch!r}"
                )
    return Grid(blocked)


def parse_ascii_map(data: str | bytes) -> Grid:
    """Parse the minimal test format: ``#`` blocked, ``.`` free, no header."""
    lines = [ln.strip() for ln in _as_text(data).splitlines()]
    rows = [ln for ln in lines if ln]
    if not rows:
        raise ParseError("empty map")
    width = len(rows[0])
    blocked = np.zeros((len(rows), width), dtype=bool)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"line {r + 1}: ragged row (length {len(row)} != {width})")
        for c, ch in enumerate(row):
            if ch == "#":
                blocked[r, c] = True
            elif ch != ".":
                raise ParseError(f"line {r + 1}: unknown character {ch!r}")
    return Grid(blocked)


def load_map(path: str | Path) -> Grid:
    """Load a map file, auto-detecting MovingAI vs minimal ASCII format."""
    text = Path(path).read_text()
    if text.lstrip().lower().startswith("type"):
        return parse_map(text)
    return parse_ascii_map(text)


def parse_scen(data: str | bytes) -> ScenarioSet:
    """Parse a MovingAI ``.scen`` file (version 1, 9 tab-separated fields)."""
    lines = _as_text(data).splitlines()
    version_seen = False
    map_id: str | None = None
    instances: list[Instance] = []
    for idx, raw in enumerate(lines):
        line = raw.strip()
        if not line:
            continue
        if not version_seen:
            fields = line.split()
            if len(fields) != 2 or fields[0].lower() != "version" or fields[1] != "1":
                raise ParseError(f"line {idx + 1}: expected 'version 1', got {raw!r}")
            version_seen = True
            continue
        fields = line.split()
        if len(fields) != 9:
            raise ParseError(f"line {idx + 1}: expected 9 fields, found {len(fields)}")
        try:
            bucket = int(fields[0])
            width, height = int(fields[2]), int(fields[3])
            scol, srow = int(fields[4]), int(fields[5])
            gcol, grow = int(fields[6]), int(fields[7])
            ref_len = float(fields[8])
        except ValueError:
            raise ParseError(f"line {idx + 1}: non-numeric field in {raw!r}") from None
        name = fields[1]
        if map_id is None:
            map_id = name
        elif name != map_id:
            raise ParseError(
                f"line {idx + 1}: map {name!r} differs from {map_id!r}; "
                "one scenario set per map"
            )
        for label, col, row in (("start", scol, srow), ("goal", gcol, grow)):
            if not (0 <= col < width and 0 <= row < height):
                raise ParseError(
                    f"line {idx + 1}: {label} ({col},{row}) outside declared "
                    f"{width}x{height} map"
                )
        instances.append(
            Instance(
                map_id=name,
                start=(scol, srow),
                goal=(gcol, grow),
                bucket=bucket,
                reference_length=ref_len,
            )
        )
    if not version_seen:
        raise ParseError("missing 'version 1' header")
    return ScenarioSet(map_id=map_id or "", instances=tuple(instances))


def load_scen(path: str | Path) -> ScenarioSet:
    return parse_scen(Path(path).read_text())


def is_traversable(grid: Grid, cell: Cell) -> bool:
    """True iff the cell is in bounds and not blocked."""
    col, row = cell
    return grid.in_bounds(col, row) and not grid.blocked_at(col, row)


def check_instance(grid: Grid, instance: Instance) -> None:
    """Reject instances whose endpoints are unusable before any search runs."""
    for label, cell in (("start", instance.start), ("goal", instance.goal)):
        col, row = cell
        if not grid.in_bounds(col, row):
            raise InputError(
                f"{instance.instance_id}: {label} ({col},{row}) out of bounds "
                f"for {grid.width}x{grid.height} map"
            )
        if grid.blocked_at(col, row):
            raise InputError(f"{instance.instance_id}: {label} ({col},{row}) is blocked")
