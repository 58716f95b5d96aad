"""Adaptive SSD/HDD redirection driven by a history of stream percentages."""

from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

DEFAULT_CAPACITY = 10
DEFAULT_THRESHOLD = 0.5
STATIC_HIGH = 0.45
STATIC_LOW = 0.30


class Device(str, Enum):
    HDD = "HDD"
    SSD = "SSD"


class PercentList:
    """Ascending list of the most recent ``capacity`` stream percentages.

    When full, the entry belonging to the oldest observation is evicted.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.values: list[float] = []
        self._arrivals: deque[float] = deque()

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def insert(self, percentage: float) -> None:
        if not 0.0 <= percentage <= 1.0:
            raise ValueError(f"percentage out of range: {percentage}")
        if len(self._arrivals) == self.capacity:
            oldest = self._arrivals.popleft()
            del self.values[bisect.bisect_left(self.values, oldest)]
        bisect.insort(self.values, percentage)
        self._arrivals.append(percentage)

    def clear(self) -> None:
        self.values.clear()
        self._arrivals.clear()


def avgper(values) -> float:
    values = list(values)
    if not values:
        raise ValueError("avgper of an empty list")
    return math.fsum(values) / len(values)


def threshold_index(values) -> int:
    values = list(values)
    n = len(values)
    idx = math.floor((1.0 - avgper(values)) * (n - 1))
    return min(max(idx, 0), n - 1)


def threshold(values, default: float = DEFAULT_THRESHOLD) -> float:
    """Element of the sorted list picked by the recent mean randomness.

    Low recent randomness selects a high index, so fewer streams qualify
    for the SSD.
    """
    values = list(values)
    if not values:
        return default
    return values[threshold_index(values)]


def switch(target: Device, percentage: float, thr: float) -> Device:
    if percentage > thr and target is Device.HDD:
        return Device.SSD
    if percentage < thr and target is Device.SSD:
        return Device.HDD
    return target


@dataclass
class Redirector:
    capacity: int = DEFAULT_CAPACITY
    default_threshold: float = DEFAULT_THRESHOLD
    target: Device = Device.HDD
    plist: PercentList = field(init=False)
    threshold: float = field(init=False)

    def __post_init__(self) -> None:
        self.plist = PercentList(self.capacity)
        self.threshold = self.default_threshold

    def observe(self, percentage: float) -> float:
        self.plist.insert(percentage)
        self.threshold = threshold(self.plist.values, self.default_threshold)
        return self.threshold

    def decide(self, percentage: float) -> Device:
        """Device for the *next* stream."""
        self.target = switch(self.target, percentage, self.threshold)
        return self.target

    def step(self, percentage: float) -> tuple[Device, float]:
        """Route the next stream, then fold ``percentage`` into the history.

        The comparison uses the threshold in force when the stream was
        measured; returns ``(target, threshold_used)``.
        """
        used = self.threshold
        target = self.decide(percentage)
        self.observe(percentage)
        return target, used

    def reset(self) -> None:
        self.plist.clear()
        self.threshold = self.default_threshold
        self.target = Device.HDD


@dataclass
class WaterMarkRedirector:
    """Static high/low water-mark policy, kept for comparison runs."""

    high: float = STATIC_HIGH
    low: float = STATIC_LOW
    target: Device = Device.HDD

    @property
    def threshold(self) -> float:
        return self.high if self.target is Device.HDD else self.low

    def step(self, percentage: float) -> tuple[Device, float]:
        used = self.threshold
        if self.target is Device.HDD and percentage > self.high:
            self.target = Device.SSD
        elif self.target is Device.SSD and percentage < self.low:
            self.target = Device.HDD
        return self.target, used

    def reset(self) -> None:
        self.target = Device.HDD
