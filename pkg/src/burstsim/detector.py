"""Server-side randomness detection over fixed-length request streams."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import ConfigError, StatsUndefinedError
from .trace import Request

DEFAULT_WINDOW = 128


@dataclass(frozen=True)
class StreamStats:
    S: int
    N: int

    @property
    def percentage(self) -> float:
        return self.S / (self.N - 1)


def group(requests: Iterable[Request], W: int = DEFAULT_WINDOW) -> Iterator[list[Request]]:
    """Consecutive, non-overlapping windows of ``W`` requests in arrival order.

    The last window may be short.  Process and file ids are ignored.
    """
    if W < 2:
        raise ConfigError(f"stream length must be >= 2, got {W}")
    it = iter(requests)
    while True:
        window = list(islice(it, W))
        if not window:
            return
        yield window


def rf_pair(o1: int, o2: int, req_size: int) -> int:
    if o1 > o2:
        raise ValueError(f"offsets must be sorted: {o1} > {o2}")
    gap = o2 - o1
    return 0 if gap == req_size or gap == 0 else 1


def random_factor_sum(offsets: Sequence[int] | np.ndarray, req_size: int) -> int:
    return kernels.random_factor_sum(np.asarray(offsets, dtype=np.int64), req_size)


def stream_stats(stream: Sequence[Request], req_size: int | None = None) -> StreamStats:
    n = len(stream)
    if n < 2:
        raise StatsUndefinedError(f"random percentage needs at least 2 requests, got {n}")
    if req_size is None:
        req_size = stream[0].size
    offsets = np.fromiter((r.offset for r in stream), dtype=np.int64, count=n)
    return StreamStats(kernels.random_factor_sum(offsets, req_size), n)


def analyze(requests: Iterable[Request], W: int = DEFAULT_WINDOW,
            req_size: int | None = None) -> list[StreamStats]:
    """Stats for every window; single-request tail windows are skipped."""
    return [stream_stats(w, req_size) for w in group(requests, W) if len(w) >= 2]
