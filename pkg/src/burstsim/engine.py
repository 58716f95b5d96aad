"""Logical-time simulation of one I/O node under four buffering policies.

The node has one HDD head and one SSD.  Requests arrive in windows of
``window_W``; each window goes wholly to the device chosen after the
previous window was measured.  Flushing runs on the HDD in the background
and shares the head with direct HDD writes; when both are active the head
alternates between them, which is where flush/direct interference comes
from.  Logical time advances per device operation, so a run is a pure
function of its inputs.

``total_time`` is the application-visible completion time (last write
acknowledged, idle gaps included); draining what is left in the SSD after
that point is reported separately as ``drain_time``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from . import kernels
from .buffer import Gate, Region, RegionState, SSDBuffer, flush_gate, plan_flush
from .config import Config
from .detector import stream_stats
from .devices import FILE_SPAN
from .errors import BufferExhausted, ConfigError
from .redirector import Device, Redirector, WaterMarkRedirector
from .trace import Request, Trace


class PolicyMode(str, Enum):
    HDD_ONLY = "hdd-only"
    FULL_BB = "full-bb"
    STATIC = "ssdup-static"
    ADAPTIVE = "ssdup-adaptive"


MODES = tuple(m.value for m in PolicyMode)


@dataclass(frozen=True)
class Decision:
    stream_idx: int
    percentage: float
    threshold: float | None
    target: Device


@dataclass
class Metrics:
    mode: str
    total_bytes: int
    total_time: float = 0.0
    idle_time: float = 0.0
    drain_time: float = 0.0
    bytes_to_ssd: int = 0
    bytes_to_hdd_direct: int = 0
    bytes_flushed: int = 0
    flush_pause_total: float = 0.0
    pause_episodes: int = 0
    producer_stall_total: float = 0.0
    flushes: int = 0
    decisions: list[Decision] = field(default_factory=list, repr=False)

    @property
    def io_time(self) -> float:
        return self.total_time - self.idle_time

    @property
    def throughput(self) -> float:
        """Bytes per second of I/O time (idle gaps excluded)."""
        return self.total_bytes / self.io_time if self.io_time > 0 else math.inf

    @property
    def ssd_fraction(self) -> float:
        return self.bytes_to_ssd / self.total_bytes if self.total_bytes else 0.0


class _FlushJob:
    __slots__ = ("region", "addrs", "sizes", "pos", "ready", "nbytes")

    def __init__(self, region: Region, max_io: int, ready: float):
        plan = plan_flush(region.tree)
        self.region = region
        self.addrs, self.sizes = plan.io_arrays(max_io)
        self.pos = 0
        self.ready = ready
        self.nbytes = plan.total_bytes + region.superseded

    @property
    def done(self) -> bool:
        return self.pos >= len(self.addrs)


class _Policy:
    """Routing decision plus flush-gate state for one mode."""

    def __init__(self, mode: PolicyMode, cfg: Config):
        self.mode = mode
        self.redirector = None
        if mode is PolicyMode.ADAPTIVE:
            self.redirector = Redirector(cfg.percent_list_capacity, cfg.default_threshold)
        elif mode is PolicyMode.STATIC:
            self.redirector = WaterMarkRedirector(cfg.static_high, cfg.static_low)

    @property
    def target(self) -> Device:
        if self.mode is PolicyMode.HDD_ONLY:
            return Device.HDD
        if self.mode is PolicyMode.FULL_BB:
            return Device.SSD
        return self.redirector.target

    def step(self, p: float) -> tuple[Device, float | None, Gate]:
        """Route the next stream; returns ``(target, threshold used, gate)``."""
        if self.redirector is None:
            return self.target, None, Gate.PROCEED
        target, thr = self.redirector.step(p)
        # water-mark mode flushes as soon as a region fills
        gate = flush_gate(p, thr) if self.mode is PolicyMode.ADAPTIVE else Gate.PROCEED
        return target, thr, gate

    def boundary(self) -> None:
        if self.redirector is not None:
            self.redirector.reset()


class _Run:
    def __init__(self, trace: Trace, mode: PolicyMode, cfg: Config):
        self.cfg = cfg
        self.mode = mode
        self.policy = _Policy(mode, cfg)
        self.hdd = cfg.hdd.params
        self.ssd = cfg.ssd.params
        self.m = Metrics(mode.value, trace.total_bytes)

        self.now = 0.0
        self.gate = Gate.PROCEED
        self.hdd_free = 0.0
        self.head = 0
        self.gate_since = 0.0
        self.jobs: deque[_FlushJob] = deque()
        self.paused = False
        self.pause_mark = 0.0
        self.last_pause_end = -math.inf

        if mode is PolicyMode.HDD_ONLY:
            self.buffer = None
        elif mode is PolicyMode.FULL_BB:
            # conventional burst buffer: the whole SSD is one space
            self.buffer = SSDBuffer(2 * cfg.region_bytes, n_regions=1)
        else:
            self.buffer = SSDBuffer(cfg.region_bytes, n_regions=2)

    # -- flusher ---------------------------------------------------------

    def _set_gate(self, gate: Gate) -> None:
        if gate is Gate.PROCEED and self.gate is not Gate.PROCEED:
            self.gate_since = self.now
        self.gate = gate
        if gate is Gate.PROCEED and self.paused:
            self.paused = False
            self.last_pause_end = self.now

    def _account_pause(self, start: float, until: float) -> None:
        start = max(start, self.pause_mark)
        if start >= until:
            return
        if not self.paused:
            self.paused = True
            # pauses closer together than one gate-check interval are one episode
            if start - self.last_pause_end >= self.cfg.gate_check_interval_s:
                self.m.pause_episodes += 1
        self.m.flush_pause_total += until - start
        self.pause_mark = until

    def _start(self, job: _FlushJob) -> None:
        if job.region.state is RegionState.FULL:
            job.region.advance_state(RegionState.FLUSHING)

    def _finish(self, job: _FlushJob) -> None:
        job.region.advance_state(RegionState.EMPTY)
        self.m.bytes_flushed += job.nbytes
        self.m.flushes += 1
        self.jobs.popleft()

    def pump(self, until: float, force: bool = False) -> None:
        """Give the flusher the HDD up to time ``until``."""
        while self.jobs:
            job = self.jobs[0]
            t = max(self.hdd_free, job.ready)
            if t >= until:
                return
            if not force and self.gate is not Gate.PROCEED:
                self._account_pause(t, until)
                return
            t = max(t, self.gate_since) if not force else t
            if t >= until:
                return
            self._start(job)
            job.pos, elapsed, self.head = kernels.advance(
                job.addrs, job.sizes, job.pos, self.head, until - t, *self.hdd)
            self.hdd_free = t + elapsed
            if job.done:
                self._finish(job)

    def _enqueue(self, region: Region) -> None:
        self.jobs.append(_FlushJob(region, self.cfg.flush_io_bytes, self.now))

    def _force_from_now(self) -> None:
        self.pump(self.now)
        self.hdd_free = max(self.hdd_free, self.now)
        if self.paused:
            self.paused = False
            self.last_pause_end = self.now

    def _wait_for_empty(self, region: Region) -> None:
        """Producer stall: flush (ignoring the gate) until ``region`` is empty."""
        start = self.now
        self._force_from_now()
        while region.state is not RegionState.EMPTY:
            job = self.jobs[0]
            self._start(job)
            t = max(self.hdd_free, job.ready)
            job.pos, elapsed, self.head = kernels.advance(
                job.addrs, job.sizes, job.pos, self.head, math.inf, *self.hdd)
            self.hdd_free = t + elapsed
            self._finish(job)
        self.now = max(self.now, self.hdd_free)
        self.m.producer_stall_total += self.now - start
        self.pause_mark = max(self.pause_mark, self.now)

    # -- producer --------------------------------------------------------

    @staticmethod
    def _arrays(reqs: list[Request]) -> tuple[np.ndarray, np.ndarray]:
        addrs = np.fromiter((r.file * FILE_SPAN + r.offset for r in reqs), dtype=np.int64, count=len(reqs))
        sizes = np.fromiter((r.size for r in reqs), dtype=np.int64, count=len(reqs))
        return addrs, sizes

    def direct(self, reqs: list[Request]) -> None:
        self.pump(self.now)
        t = max(self.now, self.hdd_free)
        ops_a, ops_s = kernels.cfq_schedule(*self._arrays(reqs), self.cfg.cfq_Q)
        d = 0
        while (d < len(ops_a) and self.jobs and self.gate is Gate.PROCEED
               and self.jobs[0].ready <= t):
            job = self.jobs[0]
            self._start(job)
            d, job.pos, elapsed, self.head = kernels.interleave(
                ops_a, ops_s, d, job.addrs, job.sizes, job.pos, self.head, *self.hdd)
            t += elapsed
            if job.done:
                self._finish(job)
        if d < len(ops_a):
            elapsed, self.head = kernels.service_sequence(ops_a[d:], ops_s[d:], self.head, *self.hdd)
            t += elapsed
        if self.jobs and self.gate is not Gate.PROCEED:
            self._account_pause(max(self.now, self.jobs[0].ready), t)
        self.now = self.hdd_free = t
        self.m.bytes_to_hdd_direct += sum(r.size for r in reqs)

    def to_ssd(self, reqs: list[Request]) -> None:
        buf = self.buffer
        overhead, bw = self.ssd[0], self.ssd[1]
        for k, req in enumerate(reqs):
            region = buf.region
            if region.state is RegionState.FULL or region.free < req.size:
                if region.state is RegionState.FILLING:
                    buf.mark_full()
                    self._enqueue(region)
                if len(buf.regions) == 1:
                    self.pump(self.now)
                    if region.state is not RegionState.EMPTY:
                        # conventional burst buffer: bypass to the HDD while draining
                        self.direct(reqs[k:])
                        return
                else:
                    try:
                        buf.swap()
                    except BufferExhausted:
                        self._wait_for_empty(buf.other)
                        buf.swap()
            if req.size > buf.region.capacity:
                raise ConfigError(f"region of {buf.region.capacity} bytes cannot hold a {req.size}-byte request")
            buf.append(req)
            self.now += overhead + req.size / bw
            self.m.bytes_to_ssd += req.size
            if buf.region.state is RegionState.FULL:
                self._enqueue(buf.region)
        self.pump(self.now)

    def idle(self, seconds: float) -> None:
        self._set_gate(Gate.PROCEED)
        self.pump(self.now + seconds)
        self.now += seconds
        self.m.idle_time += seconds

    def drain(self) -> None:
        buf = self.buffer
        if buf is not None and buf.region.state is RegionState.FILLING:
            buf.mark_full()
            self._enqueue(buf.region)
        self._set_gate(Gate.PROCEED)
        self._force_from_now()
        self.pump(math.inf, force=True)
        self.m.drain_time = max(self.hdd_free, self.now)

    def run(self, trace: Trace, gaps: Mapping[int, float]) -> Metrics:
        W = self.cfg.window_W
        reqs = trace.requests
        cuts = sorted(s for s in gaps if 0 < s < len(reqs))
        bounds = [0, *cuts, len(reqs)]
        if 0 in gaps and gaps[0] > 0:
            self.idle(gaps[0])
        stream_idx = 0
        for ph, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
            if ph:
                self.policy.boundary()
                self._set_gate(Gate.PROCEED)
                if gaps[lo] > 0:
                    self.idle(gaps[lo])
            for w0 in range(lo, hi, W):
                window = reqs[w0:min(w0 + W, hi)]
                if self.policy.target is Device.SSD:
                    self.to_ssd(window)
                else:
                    self.direct(window)
                if len(window) >= 2:
                    p = stream_stats(window, trace.req_size).percentage
                    target, thr, gate = self.policy.step(p)
                    self._set_gate(gate)
                    self.m.decisions.append(Decision(stream_idx, p, thr, target))
                stream_idx += 1
        self.m.total_time = self.now
        self.drain()
        return self.m


def simulate(trace: Trace, mode: PolicyMode | str, config: Config | None = None,
             gaps: Mapping[int, float] | None = None) -> Metrics:
    """Run ``trace`` through one policy.

    ``gaps`` maps a request seq to idle (compute) seconds spent before that
    request is issued; every entry also marks a workload boundary, which
    resets the redirector.
    """
    cfg = config or Config()
    cfg.validate()
    mode = PolicyMode(mode)
    if len(trace) == 0:
        return Metrics(mode.value, 0)
    req_size = trace.require_req_size()
    if mode is not PolicyMode.HDD_ONLY and cfg.region_bytes < req_size:
        raise ConfigError(f"region_bytes {cfg.region_bytes} is smaller than one request ({req_size})")
    gaps = dict(gaps or {})
    if any(g < 0 for g in gaps.values()):
        raise ConfigError("idle gaps must be non-negative")
    return _Run(trace, mode, cfg).run(trace, gaps)


# -- analytic pipeline model ---------------------------------------------


@dataclass(frozen=True)
class PipelineParams:
    n: float
    m: float
    T_SSD: float
    T_HDD: float
    T_f: float
    T_b: float | None = None
    T_f_interfered: float | None = None

    def __post_init__(self):
        if self.T_b is None:
            object.__setattr__(self, "T_b", self.T_SSD)

    def validate(self) -> None:
        if not self.m < self.n:
            raise ValueError(f"need m < n, got m={self.m}, n={self.n}")
        if self.m < 0:
            raise ValueError("m must be non-negative")


def predict_no_pipeline(p: PipelineParams) -> float:
    p.validate()
    return p.m * p.T_SSD + (p.n - p.m) * p.T_HDD


def predict_pipeline(p: PipelineParams, interfered: bool = False) -> float:
    p.validate()
    t_f = p.T_f
    if interfered:
        if p.T_f_interfered is None:
            raise ValueError("interfered prediction needs T_f_interfered")
        t_f = p.T_f_interfered
    return p.m * p.T_SSD + (p.n - p.m) * max(t_f, p.T_b)
