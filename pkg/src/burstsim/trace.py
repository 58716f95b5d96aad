"""Write-request traces: data model, synthetic HPC access patterns, CSV I/O.

Three IOR-style patterns are generated per process and then merged into a
single server-side arrival order:

``segmented-contiguous``
    process ``j`` of ``n`` writes its own ``1/n`` segment sequentially.
``segmented-random``
    same segments, but each process visits its slots in a seeded random order.
``strided``
    at iteration ``i`` process ``j`` writes slot ``i * n + j``.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from typing import IO, Sequence

from .errors import ConfigError, TraceParseError

PATTERNS = ("segmented-contiguous", "segmented-random", "strided")
PATTERN_ALIASES = {
    "contig": "segmented-contiguous",
    "contiguous": "segmented-contiguous",
    "random": "segmented-random",
    "strided": "strided",
}
INTERLEAVES = ("round-robin", "random")

CSV_HEADER = ("seq", "proc", "file", "offset", "size")


@dataclass(frozen=True, slots=True)
class Request:
    seq: int
    proc: int
    file: int
    offset: int
    size: int

    @property
    def end(self) -> int:
        return self.offset + self.size


@dataclass
class Trace:
    requests: list[Request] = field(default_factory=list)
    req_size: int | None = None

    def __post_init__(self) -> None:
        if self.req_size is None and self.requests:
            self.req_size = self.requests[0].size

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)

    def __getitem__(self, idx):
        return self.requests[idx]

    @property
    def total_bytes(self) -> int:
        return sum(r.size for r in self.requests)

    def require_req_size(self) -> int:
        if self.req_size is None:
            raise ConfigError("trace is empty: request size is undefined")
        return self.req_size


@dataclass(frozen=True)
class PatternSpec:
    pattern: str
    procs: int
    total_bytes: int
    req_size: int
    seed: int = 0
    file: int = 0

    def validate(self) -> None:
        if self.pattern not in PATTERNS:
            raise ConfigError(f"unknown pattern {self.pattern!r}; expected one of {PATTERNS}")
        if self.procs <= 0 or self.req_size <= 0 or self.total_bytes <= 0:
            raise ConfigError("procs, req_size and total_bytes must be positive")
        if self.total_bytes % self.req_size:
            raise ConfigError(
                f"total_bytes {self.total_bytes} is not a multiple of req_size {self.req_size}"
            )
        if (self.total_bytes // self.req_size) % self.procs:
            raise ConfigError(
                f"request count {self.total_bytes // self.req_size} is not divisible by {self.procs} processes"
            )


def canonical_pattern(name: str) -> str:
    name = PATTERN_ALIASES.get(name, name)
    if name not in PATTERNS:
        raise ConfigError(f"unknown pattern {name!r}")
    return name


def per_process_offsets(spec: PatternSpec) -> list[list[int]]:
    """Offset sequence issued by each process, in that process's issue order."""
    spec.validate()
    n = spec.procs
    per_proc = spec.total_bytes // spec.req_size // n
    size = spec.req_size
    if spec.pattern == "strided":
        return [[(i * n + j) * size for i in range(per_proc)] for j in range(n)]

    seqs = [[(j * per_proc + i) * size for i in range(per_proc)] for j in range(n)]
    if spec.pattern == "segmented-random":
        rng = random.Random(spec.seed)
        for s in seqs:
            rng.shuffle(s)
    return seqs


def _merge_order(lengths: Sequence[int], interleave: str, rng: random.Random) -> list[int]:
    """Source index for each arrival slot."""
    if interleave == "round-robin":
        order = []
        for i in range(max(lengths, default=0)):
            order.extend(j for j, n in enumerate(lengths) if i < n)
        return order
    if interleave == "random":
        # uniform over all merges that keep each source's internal order
        order = [j for j, n in enumerate(lengths) for _ in range(n)]
        rng.shuffle(order)
        return order
    raise ConfigError(f"unknown interleave policy {interleave!r}; expected one of {INTERLEAVES}")


def generate(spec: PatternSpec, interleave: str = "round-robin") -> Trace:
    """Build a uniform-size trace for one application instance.

    ``round-robin`` is iteration-major, process-minor; ``random`` is a seeded
    random merge of the per-process sequences.
    """
    seqs = per_process_offsets(spec)
    # independent stream so that the shuffle above does not shift the merge
    rng = random.Random(f"interleave:{spec.seed}")
    order = _merge_order([len(s) for s in seqs], interleave, rng)
    cursors = [0] * len(seqs)
    out = []
    for seq, j in enumerate(order):
        out.append(Request(seq, j, spec.file, seqs[j][cursors[j]], spec.req_size))
        cursors[j] += 1
    return Trace(out, spec.req_size)


def _check_same_size(traces: Sequence[Trace]) -> int | None:
    sizes = {t.req_size for t in traces if len(t)}
    if len(sizes) > 1:
        raise ConfigError(f"traces disagree on request size: {sorted(sizes)}")
    return sizes.pop() if sizes else None


def mix(traces: Sequence[Trace], seed: int = 0, burst: int = 1,
        interleave: str = "random") -> Trace:
    """Merge concurrently running traces into one arrival order.

    With ``interleave="random"`` each pick chooses one of the not-yet-exhausted
    inputs with equal probability and takes its next run of requests, so every
    input keeps its own order.  Run lengths are geometric with mean ``burst``;
    ``burst=1`` interleaves request by request.  ``"round-robin"`` cycles over
    the live inputs taking exactly ``burst`` requests each.  Process ids are
    offset so they stay distinct across inputs.
    """
    if burst < 1:
        raise ConfigError("burst must be >= 1")
    if interleave not in INTERLEAVES:
        raise ConfigError(f"unknown interleave {interleave!r}; expected one of {', '.join(INTERLEAVES)}")
    req_size = _check_same_size(traces)
    files = [t.requests[0].file for t in traces if len(t)]
    if len(set(files)) != len(files):
        raise ConfigError("mixed traces must use distinct file ids")

    rng = random.Random(seed)
    proc_base, base = [], 0
    for t in traces:
        proc_base.append(base)
        base += max((r.proc for r in t), default=-1) + 1

    pos = [0] * len(traces)
    live = [k for k, t in enumerate(traces) if len(t)]
    out: list[Request] = []
    turn = 0
    while live:
        if interleave == "round-robin":
            k = live[turn % len(live)]
            turn += 1
        else:
            k = rng.choice(live)
        t = traces[k].requests
        run = 1
        if interleave == "round-robin":
            run = burst
        elif burst > 1:
            # inverse-CDF draw of a geometric run length with mean `burst`
            run = 1 + int(math.log(1.0 - rng.random()) / math.log(1.0 - 1.0 / burst))
        stop = min(pos[k] + run, len(t))
        for r in t[pos[k]:stop]:
            out.append(Request(len(out), r.proc + proc_base[k], r.file, r.offset, r.size))
        pos[k] = stop
        if stop == len(t):
            live.remove(k)
            turn -= 1 if interleave == "round-robin" else 0
    return Trace(out, req_size)


def concat(traces: Sequence[Trace]) -> tuple[Trace, list[int]]:
    """Run traces back to back; returns the joined trace and the seq at which
    each input after the first begins (its phase boundary)."""
    req_size = _check_same_size(traces)
    out: list[Request] = []
    boundaries = []
    for k, t in enumerate(traces):
        if k:
            boundaries.append(len(out))
        for r in t:
            out.append(Request(len(out), r.proc, r.file, r.offset, r.size))
    return Trace(out, req_size), boundaries


def _is_binary(stream) -> bool:
    return isinstance(stream, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(stream, "mode", "")


def save_trace(trace: Trace, sink: IO) -> None:
    """Write ``trace`` as CSV to a text or byte stream."""
    if _is_binary(sink):
        sink.write(dumps(trace).encode("ascii"))
        return
    sink.write(",".join(CSV_HEADER) + "\n")
    for r in trace.requests:
        sink.write(f"{r.seq},{r.proc},{r.file},{r.offset},{r.size}\n")


def dumps(trace: Trace) -> str:
    buf = io.StringIO()
    save_trace(trace, buf)
    return buf.getvalue()


def load_trace(source: IO) -> Trace:
    """Parse a trace CSV from a text or byte stream."""
    if _is_binary(source):
        source = io.TextIOWrapper(source, encoding="ascii", newline="")
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise TraceParseError(1, f"expected header {','.join(CSV_HEADER)!r}, got {header!r}")
    requests: list[Request] = []
    req_size = None
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(CSV_HEADER):
            raise TraceParseError(lineno, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
        try:
            seq, proc, file, offset, size = (int(x) for x in row)
        except ValueError:
            raise TraceParseError(lineno, f"non-numeric field in {row!r}") from None
        if seq != len(requests):
            kind = "duplicate" if seq < len(requests) else "out-of-order"
            raise TraceParseError(lineno, f"{kind} seq {seq}, expected {len(requests)}")
        if min(proc, file, offset) < 0 or size <= 0:
            raise TraceParseError(lineno, "negative field or non-positive size")
        if req_size is None:
            req_size = size
        elif size != req_size:
            raise TraceParseError(lineno, f"size {size} differs from trace request size {req_size}")
        requests.append(Request(seq, proc, file, offset, size))
    return Trace(requests, req_size)


def loads(text: str) -> Trace:
    return load_trace(io.StringIO(text))
