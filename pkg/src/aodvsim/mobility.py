"""Node placement and random-waypoint motion inside a rectangular arena."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from aodvsim.engine import EventKind, RandomStream, Simulator, draw_uniform


class MobilityModel(enum.Enum):
    STATIC = "static"
    RANDOM_WAYPOINT = "random_waypoint"


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance_to(self, other: Position) -> float:
        # same correctly-rounded ops as Channel._distances_from
        dx = self.x - other.x
        dy = self.y - other.y
        return math.sqrt(dx * dx + dy * dy)


@dataclass(frozen=True)
class MobilityConfig:
    model: MobilityModel = MobilityModel.RANDOM_WAYPOINT
    v_min: float = 1.0
    v_max: float = 5.0
    pause: float = 10.0


@dataclass(frozen=True)
class MobilityState:
    current: Position
    waypoint: Position
    speed: float
    pause_until: float
    model: MobilityModel


class Mobility:
    """Positions of nodes ``1..node_count`` as piecewise-linear legs.

    Each node moves from ``origin`` to ``target`` between ``depart`` and
    ``arrive``; before ``depart`` (pausing) it sits at ``origin``, after
    ``arrive`` at ``target``. Legs are materialised one at a time when the
    WaypointArrival event fires, so a query past the current leg returns
    the waypoint the node is heading to.
    """

    def __init__(
        self,
        node_count: int,
        width: float,
        height: float,
        config: MobilityConfig,
        stream: RandomStream,
        sim: Simulator | None = None,
        pins: Mapping[int, tuple[float, float]] | None = None,
    ):
        self.node_count = node_count
        self.width = float(width)
        self.height = float(height)
        self.config = config
        self.stream = stream
        self.sim = sim
        # every node draws a placement so pins never shift the others
        xy = np.empty((node_count, 2))
        for i in range(node_count):
            xy[i, 0] = draw_uniform(stream, 0.0, self.width)
            xy[i, 1] = draw_uniform(stream, 0.0, self.height)
        for node, (x, y) in (pins or {}).items():
            self._index(node)
            xy[node - 1] = (x, y)
        self.origin = xy
        self.target = xy.copy()
        self.depart = np.zeros(node_count)
        self.arrive = np.zeros(node_count)
        self.speed = np.zeros(node_count)
        self.pause_until = np.zeros(node_count)

    def _index(self, node: int) -> int:
        if not 1 <= node <= self.node_count:
            raise KeyError(f"unknown node id {node}")
        return node - 1

    def start(self) -> None:
        if self.config.model is MobilityModel.RANDOM_WAYPOINT:
            if self.sim is None:
                raise ValueError("random waypoint mobility needs a simulator to schedule arrivals")
            self.sim.on(EventKind.WAYPOINT_ARRIVAL, self._on_arrival)
            for node in range(1, self.node_count + 1):
                self.next_waypoint(node, depart=0.0)

    def next_waypoint(self, node: int, depart: float | None = None) -> tuple[Position, float, float]:
        """Draw the next leg for ``node`` and schedule its arrival."""
        if self.config.model is not MobilityModel.RANDOM_WAYPOINT:
            raise ValueError(f"node {node} is not using random waypoint mobility")
        i = self._index(node)
        cfg = self.config
        if depart is None:
            depart = self.sim.now + cfg.pause
        wx = draw_uniform(self.stream, 0.0, self.width)
        wy = draw_uniform(self.stream, 0.0, self.height)
        speed = cfg.v_min if cfg.v_min == cfg.v_max else draw_uniform(self.stream, cfg.v_min, cfg.v_max)
        arrive = self.set_leg(node, self.position_at(node, depart), Position(wx, wy), depart, speed)
        self.sim.schedule(arrive, EventKind.WAYPOINT_ARRIVAL, node)
        return Position(wx, wy), speed, cfg.pause

    def set_leg(self, node: int, origin: Position, target: Position, depart: float, speed: float) -> float:
        """Move ``node`` from ``origin`` to ``target`` at ``speed``; returns the arrival time."""
        if not speed > 0:
            raise ValueError(f"leg speed must be positive, got {speed}")
        i = self._index(node)
        self.origin[i] = (origin.x, origin.y)
        self.target[i] = (target.x, target.y)
        self.depart[i] = depart
        self.arrive[i] = depart + origin.distance_to(target) / speed
        self.speed[i] = speed
        self.pause_until[i] = self.arrive[i] + self.config.pause
        return float(self.arrive[i])

    def _on_arrival(self, event) -> None:
        node = event.payload
        self.next_waypoint(node, depart=event.time + self.config.pause)

    def position_at(self, node: int, time: float) -> Position:
        if time < 0:
            raise ValueError(f"negative time {time}")
        i = self._index(node)
        ox, oy = self.origin[i]
        tx, ty = self.target[i]
        depart = self.depart[i]
        arrive = self.arrive[i]
        if time <= depart:
            frac = 0.0
        elif time >= arrive:
            frac = 1.0
        else:
            frac = (time - depart) / (arrive - depart)
        x = min(max(ox + (tx - ox) * frac, 0.0), self.width)
        y = min(max(oy + (ty - oy) * frac, 0.0), self.height)
        return Position(float(x), float(y))

    def positions_at(self, time: float) -> np.ndarray:
        """``(node_count, 2)`` array; row ``i`` is node ``i + 1``."""
        span = self.arrive - self.depart
        moving = span > 0
        frac = np.where(
            moving,
            (time - self.depart) / np.where(moving, span, 1.0),
            (time >= self.arrive).astype(float),
        )
        frac = np.clip(frac, 0.0, 1.0)[:, None]
        xy = self.origin + (self.target - self.origin) * frac
        np.clip(xy[:, 0], 0.0, self.width, out=xy[:, 0])
        np.clip(xy[:, 1], 0.0, self.height, out=xy[:, 1])
        return xy

    def state(self, node: int, time: float) -> MobilityState:
        i = self._index(node)
        tx, ty = self.target[i]
        return MobilityState(
            current=self.position_at(node, time),
            waypoint=Position(float(tx), float(ty)),
            speed=float(self.speed[i]),
            pause_until=float(self.pause_until[i]),
            model=self.config.model,
        )
