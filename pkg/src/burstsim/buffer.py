"""Two-region log-structured SSD buffer with AVL-ordered flushing."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .avltree import AVLTree
from .devices import address
from .errors import BufferExhausted, RegionFull, RegionStateError
from .trace import Request

NODE_BYTES = 24  # three 8-byte values: original offset, new offset, size


class RegionState(str, Enum):
    EMPTY = "Empty"
    FILLING = "Filling"
    FULL = "Full"
    FLUSHING = "Flushing"


_NEXT = {
    RegionState.EMPTY: RegionState.FILLING,
    RegionState.FILLING: RegionState.FULL,
    RegionState.FULL: RegionState.FLUSHING,
    RegionState.FLUSHING: RegionState.EMPTY,
}


class Gate(str, Enum):
    PROCEED = "Proceed"
    PAUSE = "Pause"


@dataclass(slots=True)
class MetaNode:
    orig_file: int
    orig_offset: int
    orig_size: int
    ssd_region: int
    ssd_offset: int
    ssd_size: int


class MetaTree(AVLTree):
    """AVL tree of :class:`MetaNode` keyed by ``(orig_file, orig_offset)``."""

    def add(self, node: MetaNode) -> MetaNode | None:
        """Insert ``node``; returns the node it replaced, if any."""
        key = (node.orig_file, node.orig_offset)
        old = self.get(key)
        self.insert(key, node)
        return old

    def nodes(self):
        return self.values()


@dataclass
class Region:
    capacity: int
    rid: int = 0
    used: int = 0
    state: RegionState = RegionState.EMPTY
    tree: MetaTree = field(default_factory=MetaTree)
    superseded: int = 0  # bytes whose key was rewritten later in this region

    @property
    def cursor(self) -> int:
        return self.used

    @property
    def free(self) -> int:
        return self.capacity - self.used

    def advance_state(self, to: RegionState) -> None:
        if _NEXT[self.state] is not to:
            raise RegionStateError(f"region {self.rid}: illegal transition {self.state.value} -> {to.value}")
        self.state = to
        if to is RegionState.EMPTY:
            self.used = 0
            self.superseded = 0
            self.tree = MetaTree()


def append(region: Region, req: Request) -> tuple[int, int]:
    """Log-append ``req`` at the region cursor; returns ``(region id, ssd offset)``.

    The region turns Full once the next equally sized request would not fit.
    """
    if region.state not in (RegionState.EMPTY, RegionState.FILLING):
        raise RegionStateError(f"region {region.rid} is {region.state.value}, cannot append")
    if req.size > region.free:
        raise RegionFull(f"region {region.rid}: {req.size} bytes requested, {region.free} free")
    if region.state is RegionState.EMPTY:
        region.advance_state(RegionState.FILLING)
    loc = region.used
    old = region.tree.add(MetaNode(req.file, req.offset, req.size, region.rid, loc, req.size))
    if old is not None:
        region.superseded += old.ssd_size
    region.used += req.size
    if region.free < req.size:
        region.advance_state(RegionState.FULL)
    return region.rid, loc


class SSDBuffer:
    """Equal-sized regions; exactly one is the active (filling) region."""

    def __init__(self, capacity: int, n_regions: int = 2):
        if n_regions < 1:
            raise ValueError("need at least one region")
        self.regions = [Region(capacity, rid=k) for k in range(n_regions)]
        self.active = 0

    @property
    def region(self) -> Region:
        return self.regions[self.active]

    @property
    def other(self) -> Region:
        return self.regions[(self.active + 1) % len(self.regions)]

    def append(self, req: Request) -> tuple[int, int]:
        return append(self.region, req)

    def mark_full(self) -> Region:
        """Close the active region early (the next request does not fit)."""
        r = self.region
        if r.state is RegionState.FILLING:
            r.advance_state(RegionState.FULL)
        elif r.state is not RegionState.FULL:
            raise RegionStateError(f"region {r.rid} is {r.state.value}, nothing to close")
        return r

    def swap(self) -> Region:
        """Make the other region active; returns the region awaiting flush.

        The outgoing region may already have started flushing.
        """
        full = self.region
        if full.state not in (RegionState.FULL, RegionState.FLUSHING):
            raise RegionStateError(f"active region {full.rid} is {full.state.value}, not Full")
        nxt = self.other
        if nxt is full or nxt.state is not RegionState.EMPTY:
            raise BufferExhausted(f"no empty region to swap to (region {nxt.rid} is {nxt.state.value})")
        self.active = nxt.rid
        nxt.advance_state(RegionState.FILLING)
        return full


@dataclass(frozen=True)
class FlushEntry:
    file: int
    offset: int
    size: int
    reads: tuple[tuple[int, int, int], ...]  # (ssd region, ssd offset, size)


@dataclass
class FlushPlan:
    entries: list[FlushEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def total_bytes(self) -> int:
        return sum(e.size for e in self.entries)

    def io_arrays(self, max_io: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """HDD write operations as (address, size) arrays, each at most ``max_io`` bytes."""
        addrs, sizes = [], []
        for e in self.entries:
            base = address(e.file, e.offset)
            if max_io is None or e.size <= max_io:
                addrs.append(base)
                sizes.append(e.size)
                continue
            for off in range(0, e.size, max_io):
                addrs.append(base + off)
                sizes.append(min(max_io, e.size - off))
        return np.array(addrs, dtype=np.int64), np.array(sizes, dtype=np.int64)


def plan_flush(tree: MetaTree) -> FlushPlan:
    """In-order traversal, merging nodes whose original ranges touch."""
    entries: list[FlushEntry] = []
    cur = None
    for node in tree.nodes():
        read = (node.ssd_region, node.ssd_offset, node.ssd_size)
        if cur is not None and node.orig_file == cur[0] and node.orig_offset == cur[1] + cur[2]:
            cur[2] += node.orig_size
            cur[3].append(read)
            continue
        if cur is not None:
            entries.append(FlushEntry(cur[0], cur[1], cur[2], tuple(cur[3])))
        cur = [node.orig_file, node.orig_offset, node.orig_size, [read]]
    if cur is not None:
        entries.append(FlushEntry(cur[0], cur[1], cur[2], tuple(cur[3])))
    return FlushPlan(entries)


def flush_gate(current_percentage: float | None, threshold: float) -> Gate:
    """Flush only while recent traffic is random enough that the HDD is quiet.

    ``None`` means no stream is in flight (trace ended or idle).
    """
    if current_percentage is None or current_percentage >= threshold:
        return Gate.PROCEED
    return Gate.PAUSE


def metadata_footprint(tree_or_count) -> int:
    n = tree_or_count if isinstance(tree_or_count, int) else len(tree_or_count)
    return n * NODE_BYTES
