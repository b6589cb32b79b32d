"""Disk-model wireless channel with free-space path loss range closure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from aodvsim.engine import EventKind, Simulator
from aodvsim.mobility import Mobility

SPEED_OF_LIGHT = 3.0e8  # m/s
BROADCAST = -1


@dataclass(frozen=True)
class RadioConfig:
    tx_power_w: float = 1e-4
    rx_threshold_dbm: float = -95.0
    frequency_hz: float = 2.4e9
    bitrate_bps: float = 1e6
    range_override_m: float | None = None


@dataclass(frozen=True)
class Frame:
    sender: int
    recipient: int  # node id or BROADCAST
    size: float  # bits
    payload: Any

    def __post_init__(self):
        if not self.size > 0:
            raise ValueError(f"frame size must be positive, got {self.size}")


@dataclass(frozen=True)
class Delivery:
    frame: Frame
    receiver: int


@dataclass(frozen=True)
class LinkFailure:
    frame: Frame
    time: float


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts * 1000.0)


def free_space_loss_db(distance: float, frequency_hz: float) -> float:
    wavelength = SPEED_OF_LIGHT / frequency_hz
    return 20.0 * math.log10(4.0 * math.pi * distance / wavelength)


def compute_range(cfg: RadioConfig) -> float:
    """Largest distance at which received power still meets the threshold."""
    if cfg.range_override_m is not None:
        return cfg.range_override_m
    budget = watts_to_dbm(cfg.tx_power_w) - cfg.rx_threshold_dbm
    wavelength = SPEED_OF_LIGHT / cfg.frequency_hz
    return wavelength / (4.0 * math.pi) * 10.0 ** (budget / 20.0)


class Channel:
    """Ideal MAC: every in-range receiver gets the frame, no loss, no contention.

    Reachability is sampled when the frame is sent. A unicast to a node out of
    range produces no delivery and calls ``on_link_failure`` instead.
    """

    def __init__(
        self,
        cfg: RadioConfig,
        mobility: Mobility,
        sim: Simulator,
        on_link_failure: Callable[[LinkFailure], None] | None = None,
    ):
        self.cfg = cfg
        self.range = compute_range(cfg)
        if not self.range > 0:
            raise ValueError(f"radio range must be positive, got {self.range}")
        self.mobility = mobility
        self.sim = sim
        self.on_link_failure = on_link_failure
        self.frames_sent = 0

    def distance(self, a: int, b: int, time: float) -> float:
        return self.mobility.position_at(a, time).distance_to(self.mobility.position_at(b, time))

    def _distances_from(self, node: int, time: float) -> np.ndarray:
        xy = self.mobility.positions_at(time)
        dx = xy[:, 0] - xy[node - 1, 0]
        dy = xy[:, 1] - xy[node - 1, 1]
        return np.sqrt(dx * dx + dy * dy)

    def neighbors(self, node: int, time: float) -> set[int]:
        dist = self._distances_from(node, time)
        ids = np.flatnonzero(dist <= self.range) + 1
        return {int(n) for n in ids if n != node}

    def transmit(self, frame: Frame, time: float) -> list:
        self.frames_sent += 1
        serialization = frame.size / self.cfg.bitrate_bps
        events = []
        if frame.recipient == BROADCAST:
            dist = self._distances_from(frame.sender, time)
            for idx in np.flatnonzero(dist <= self.range):
                receiver = int(idx) + 1
                if receiver == frame.sender:
                    continue
                at = time + serialization + float(dist[idx]) / SPEED_OF_LIGHT
                events.append(
                    self.sim.schedule(at, EventKind.FRAME_DELIVERY, Delivery(frame, receiver))
                )
            return events
        d = self.distance(frame.sender, frame.recipient, time)
        if d <= self.range:
            at = time + serialization + d / SPEED_OF_LIGHT
            events.append(
                self.sim.schedule(at, EventKind.FRAME_DELIVERY, Delivery(frame, frame.recipient))
            )
        elif self.on_link_failure is not None:
            self.on_link_failure(LinkFailure(frame, time))
        return events
