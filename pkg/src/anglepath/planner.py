"""LIAN / eLIAN search: best-first planning over (cell, parent-cell) nodes.

Both planners move in straight jumps of length delta and reject successors
that would turn the heading by more than alpha_max degrees. LIAN keeps
delta fixed. eLIAN lets delta slide within [delta_min, delta_max]: when an
expansion yields nothing, the node is re-queued with delta shrunk by the
factor k, and after success_streak consecutive successful expansions at the
same delta the successors are handed delta / k again (never above
delta_max). Setting delta_min = delta_max makes eLIAN degenerate exactly
into LIAN.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from enum import Enum

from .geometry import (
    ANGLE_EPS_DEG,
    _flat_segment,
    circle_offsets,
    euclid,
    line_of_sight,
    turn_angle,
)
from .grids import Cell, Grid, InputError, is_traversable

LIAN = "lian"
ELIAN = "elian"


class Verdict(str, Enum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class PlannerConfig:
    """All planner tunables.

    ``delta_min`` defaults to ``delta_max`` (for mode="lian" it must equal
    it). ``time_cap`` is wall-clock seconds checked once per expansion.
    """

    mode: str = LIAN
    delta_max: float = 20.0
    delta_min: float | None = None
    k: float = 0.5
    alpha_max: float = 25.0
    weight: float = 2.0
    time_cap: float = 30.0
    success_streak: int = 2
    label: str | None = None

    def __post_init__(self):
        if self.mode not in (LIAN, ELIAN):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.delta_max <= 0:
            raise InputError("delta_max must be > 0")
        if self.delta_min is None:
            object.__setattr__(self, "delta_min", self.delta_max)
        if not 0 < self.delta_min <= self.delta_max:
            raise InputError("need 0 < delta_min <= delta_max")
        if self.mode == LIAN and self.delta_min != self.delta_max:
            raise InputError("mode 'lian' requires delta_min == delta_max")
        if not 0.0 < self.k < 1.0:
            raise InputError("k must lie in (0, 1)")
        if not 0.0 <= self.alpha_max <= 180.0:
            raise InputError("alpha_max must lie in [0, 180] degrees")
        if self.weight < 1.0:
            raise InputError("weight must be >= 1")
        if self.success_streak < 1:
            raise InputError("success_streak must be >= 1")

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.mode == LIAN:
            return f"lian-{self.delta_max:g}"
        return f"elian-{self.delta_max:g}-{self.delta_min:g}"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "delta_max": self.delta_max,
            "delta_min": self.delta_min,
            "k": self.k,
            "alpha_max": self.alpha_max,
            "weight": self.weight,
            "time_cap": self.time_cap,
            "success_streak": self.success_streak,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlannerConfig":
        allowed = {
            "mode",
            "delta_max",
            "delta_min",
            "k",
            "alpha_max",
            "weight",
            "time_cap",
            "success_streak",
            "label",
        }
        unknown = set(data) - allowed
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def delta_levels(cfg: PlannerConfig) -> tuple[float, ...]:
    """The descending ladder of usable delta values: delta_max * k^i."""
    levels = []
    value = cfg.delta_max
    while value >= cfg.delta_min - 1e-9:
        levels.append(value)
        value *= cfg.k
    return tuple(levels)


class SearchNode:
    """One search state: a cell plus the cell it was reached from.

    ``level`` indexes the delta ladder; ``delta`` always equals
    ``levels[level]`` of the owning search.
    """

    __slots__ = ("cell", "parent", "g", "f", "level", "delta")

    def __init__(self, cell, parent, g, f, level, delta):
        self.cell = cell
        self.parent = parent
        self.g = g
        self.f = f
        self.level = level
        self.delta = delta

    def __repr__(self) -> str:
        bp = self.parent.cell if self.parent else None
        return f"SearchNode({self.cell}, bp={bp}, g={self.g:.3f}, delta={self.delta:g})"


@dataclass
class SearchStats:
    expansions: int = 0
    generated: int = 0
    reinsertions: int = 0
    max_open: int = 0
    runtime: float = 0.0


@dataclass
class Outcome:
    verdict: Verdict
    path: list[Cell] | None
    stats: SearchStats


def reconstruct_path(goal_node: SearchNode) -> list[Cell]:
    """Waypoints from start to goal by walking the parent chain."""
    path = []
    node = goal_node
    while node is not None:
        path.append(node.cell)
        node = node.parent
    path.reverse()
    return path


@dataclass(frozen=True)
class PathViolation:
    index: int
    kind: str  # "los" | "angle"
    message: str


def validate_path(grid: Grid, path: list[Cell], alpha_max: float) -> PathViolation | None:
    """Independent feasibility check of a waypoint list.

    Returns None when every consecutive pair has line of sight and every
    interior turn stays within alpha_max; otherwise the first violation in
    waypoint order. Paths need at least two distinct consecutive waypoints.
    """
    if len(path) < 2:
        raise InputError("path needs at least 2 waypoints")
    for a, b in zip(path, path[1:]):
        if a == b:
            raise InputError("path contains a zero-length segment")
    for i in range(len(path) - 1):
        if not line_of_sight(grid, path[i], path[i + 1]):
            return PathViolation(i, "los", f"no line of sight {path[i]}->{path[i + 1]}")
        if i > 0:
            angle = turn_angle(path[i - 1], path[i], path[i + 1])
            if angle > alpha_max + ANGLE_EPS_DEG:
                return PathViolation(
                    i, "angle", f"turn of {angle:.6f} deg at {path[i]} exceeds {alpha_max}"
                )
    return None


def delta_successors(node: SearchNode, grid: Grid, goal: Cell) -> list[Cell]:
    """Raw successor candidates: in-bounds circle cells, goal injected last.

    The goal is appended when it lies strictly closer than the node's delta.
    No line-of-sight or angle filtering happens here.
    """
    col, row = node.cell
    width, height = grid.width, grid.height
    radius = max(1, round(node.delta))
    cells = []
    for dc, dr in circle_offsets(radius):
        c, r = col + dc, row + dr
        if 0 <= c < width and 0 <= r < height:
            cells.append((c, r))
    if euclid(node.cell, goal) < node.delta and goal not in cells:
        cells.append(goal)
    return cells


class Search:
    """Single-shot search over one grid; owns all mutable state.

    The open list orders by smallest f, then largest g, then cell and
    parent-cell coordinates, then insertion order, so runs are fully
    deterministic.
    """

    def __init__(self, grid: Grid, start: Cell, goal: Cell, cfg: PlannerConfig):
        if not is_traversable(grid, start):
            raise InputError(f"start {start} is blocked or out of bounds")
        if not is_traversable(grid, goal):
            raise InputError(f"goal {goal} is blocked or out of bounds")
        if start == goal:
            raise InputError("start and goal coincide; nothing to plan")
        self.grid = grid
        self.start = start
        self.goal = goal
        self.cfg = cfg
        self.levels = delta_levels(cfg)
        self.open: list = []
        self.closed: dict = {}  # (cell, parent cell) -> expanded node
        self.stats = SearchStats()
        self._seq = 0
        self._deadline = None
        # cos threshold equivalent to turn_angle(...) <= alpha_max + eps;
        # comparing dot products against it avoids an acos per candidate.
        bound = cfg.alpha_max + ANGLE_EPS_DEG
        self._cos_threshold = math.cos(math.radians(bound)) if bound < 180.0 else -2.0
        self._circle_cache: dict[int, tuple] = {}

    def _circle(self, radius: int):
        cached = self._circle_cache.get(radius)
        if cached is None:
            offsets = circle_offsets(radius)
            norms = tuple(math.hypot(dc, dr) for dc, dr in offsets)
            cached = (offsets, frozenset(offsets), norms)
            self._circle_cache[radius] = cached
        return cached

    def _push(self, node: SearchNode) -> None:
        pcell = node.parent.cell if node.parent is not None else (-1, -1)
        self._seq += 1
        heapq.heappush(
            self.open,
            (node.f, -node.g, node.cell[0], node.cell[1], pcell[0], pcell[1], self._seq, node),
        )
        if len(self.open) > self.stats.max_open:
            self.stats.max_open = len(self.open)

    def _los_ok(self, a: Cell, b: Cell) -> bool:
        flat_cells, flat_pairs = _flat_segment(self.grid.width, b[0] - a[0], b[1] - a[1])
        base = a[1] * self.grid.width + a[0]
        occ = self.grid._flat
        for off in flat_cells:
            if occ[base + off]:
                return False
        for off1, off2 in flat_pairs:
            if occ[base + off1] and occ[base + off2]:
                return False
        return True

    def _streak_reached(self, node: SearchNode) -> bool:
        # True when success_streak nodes ending at `node` share its delta.
        current = node
        for _ in range(self.cfg.success_streak - 1):
            parent = current.parent
            if parent is None or parent.level != node.level:
                return False
            current = parent
        return True

    def expand(self, node: SearchNode) -> None:
        """Generate successors of an expanded node, or shrink its delta.

        Candidates are exactly delta_successors(node): the in-bounds circle
        cells at the node's delta, plus the goal when it is closer than
        delta. Candidates failing line of sight or the turn limit are
        dropped (start-node successors skip the turn test); so are
        candidates whose (cell, parent cell) identity was already expanded.
        If nothing survives, an eLIAN node re-enters the open list with
        delta * k as long as that stays within the ladder, otherwise it is
        discarded.
        """
        cfg = self.cfg
        grid = self.grid
        goal = self.goal
        col, row = node.cell
        parent_cell = node.parent.cell if node.parent is not None else None
        if parent_cell is not None:
            hx, hy = col - parent_cell[0], row - parent_cell[1]
            heading_norm = math.hypot(hx, hy)
        radius = max(1, round(node.delta))
        offsets, offset_set, norms = self._circle(radius)
        threshold = self._cos_threshold

        survivors = []
        for index, (dc, dr) in enumerate(offsets):
            cand = (col + dc, row + dr)
            if not (0 <= cand[0] < grid.width and 0 <= cand[1] < grid.height):
                continue
            if parent_cell is not None:
                if hx * dc + hy * dr < threshold * heading_norm * norms[index]:
                    continue
            if not self._los_ok(node.cell, cand):
                continue
            if (cand, node.cell) in self.closed:
                continue
            survivors.append(cand)
        dg = euclid(node.cell, goal)
        if dg < node.delta and (goal[0] - col, goal[1] - row) not in offset_set:
            keep = True
            if parent_cell is not None:
                dot = hx * (goal[0] - col) + hy * (goal[1] - row)
                keep = dot >= threshold * heading_norm * dg
            if keep and self._los_ok(node.cell, goal) and (goal, node.cell) not in self.closed:
                survivors.append(goal)

        if survivors:
            raise_level = (
                node.level > 0
                and node.parent is not None
                and self._streak_reached(node)
            )
            child_level = node.level - 1 if raise_level else node.level
            child_delta = self.levels[child_level]
            for cand in survivors:
                g = node.g + euclid(node.cell, cand)
                f = g + cfg.weight * euclid(cand, self.goal)
                self._push(SearchNode(cand, node, g, f, child_level, child_delta))
                self.stats.generated += 1
            return

        if node.level + 1 < len(self.levels):
            node.level += 1
            node.delta = self.levels[node.level]
            self.stats.reinsertions += 1
            self._push(node)

    def run(self) -> Outcome:
        cfg = self.cfg
        t0 = time.perf_counter()
        self._deadline = t0 + cfg.time_cap
        h0 = euclid(self.start, self.goal)
        self._push(SearchNode(self.start, None, 0.0, cfg.weight * h0, 0, self.levels[0]))

        verdict = Verdict.NOT_FOUND
        path = None
        while self.open:
            if time.perf_counter() > self._deadline:
                verdict = Verdict.TIMEOUT
                break
            entry = heapq.heappop(self.open)
            node: SearchNode = entry[7]
            if node.cell == self.goal:
                verdict = Verdict.FOUND
                path = reconstruct_path(node)
                break
            ident = (node.cell, node.parent.cell if node.parent is not None else None)
            prior = self.closed.get(ident)
            if prior is not None and prior is not node:
                # Stale duplicate of an identity already expanded via
                # another open-list entry; nothing new to generate.
                continue
            self.closed[ident] = node
            self.stats.expansions += 1
            self.expand(node)

        self.stats.runtime = time.perf_counter() - t0
        return Outcome(verdict, path, self.stats)


def search(grid: Grid, start: Cell, goal: Cell, cfg: PlannerConfig) -> Outcome:
    """Plan an angle-constrained path from start to goal on the grid."""
    return Search(grid, start, goal, cfg).run()
