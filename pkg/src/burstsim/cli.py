"""Command-line front end: ``burstsim {gen,analyze,simulate,compare}``.

All outputs are CSV.  Files are written atomically (temp file + rename) so a
failed run never leaves a truncated report behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import re
import statistics
import sys
import tempfile
from pathlib import Path

from .config import Config
from .detector import analyze
from .engine import MODES, Metrics, simulate
from .errors import BurstSimError, ConfigError
from .trace import INTERLEAVES, PATTERN_ALIASES, PatternSpec, dumps, generate, load_trace, mix

STATS_HEADER = ("stream_idx", "N", "S", "percentage")
METRICS_HEADER = ("mode", "total_time_s", "throughput_MBps", "ssd_fraction", "flush_pause_s", "stall_s")
DECISIONS_HEADER = ("stream_idx", "percentage", "threshold", "target")

_UNITS = {"": 1, "b": 1, "kib": 1 << 10, "mib": 1 << 20, "gib": 1 << 30, "tib": 1 << 40}
_SIZE_RE = re.compile(r"^\s*(\d+)\s*([a-zA-Z]*)\s*$")


def parse_size(text: str) -> int:
    """``"256KiB"`` -> 262144.  Only binary suffixes are accepted."""
    m = _SIZE_RE.match(text)
    if not m or m.group(2).lower() not in _UNITS:
        raise argparse.ArgumentTypeError(f"bad size {text!r}; use an integer with an optional KiB/MiB/GiB suffix")
    return int(m.group(1)) * _UNITS[m.group(2).lower()]


def parse_gap(text: str) -> tuple[int, float]:
    try:
        seq, secs = text.split(":")
        return int(seq), float(secs)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gap {text!r}; expected SEQ:SECONDS") from None


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _load(path: str):
    with open(path, newline="") as f:
        return load_trace(f)


def _seed(args) -> int:
    env = os.environ.get("BURSTSIM_SEED")
    if env is None:
        return args.seed
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"BURSTSIM_SEED must be an integer, got {env!r}") from None


def _config(args) -> Config:
    cfg = Config.load(args.config) if args.config else Config()
    cfg.validate()
    return cfg


def metrics_row(m: Metrics) -> list[str]:
    return [m.mode, f"{m.total_time:.6f}", f"{m.throughput / 1e6:.6f}", f"{m.ssd_fraction:.6f}",
            f"{m.flush_pause_total:.6f}", f"{m.producer_stall_total:.6f}"]


# -- commands ------------------------------------------------------------


def cmd_gen(args) -> int:
    seed = _seed(args)
    other = _load(args.mix) if args.mix else None
    file = args.file
    if file is None:
        file = 0 if other is None else max((r.file for r in other), default=-1) + 1
    spec = PatternSpec(PATTERN_ALIASES[args.pattern], args.procs, args.total, args.req, seed=seed, file=file)
    spec.validate()
    trace = generate(spec, args.interleave)
    if other is not None:
        trace = mix([other, trace], seed=seed, burst=args.burst, interleave=args.mix_interleave)
    atomic_write(args.out, dumps(trace))
    print(f"wrote {len(trace)} requests to {args.out}")
    return 0


def cmd_analyze(args) -> int:
    trace = _load(args.trace)
    stats = list(analyze(trace.requests, args.window, trace.req_size))
    rows = [[k, s.N, s.S, f"{s.percentage:.6f}"] for k, s in enumerate(stats)]
    atomic_write(args.out, _csv(STATS_HEADER, rows))
    if not stats:
        print("warning: trace has no stream of two or more requests; stats are empty", file=sys.stderr)
        return 0
    print(f"streams={len(stats)} mean_percentage={statistics.fmean(s.percentage for s in stats):.6f}")
    return 0


def _gaps(args) -> dict[int, float]:
    return dict(args.gap or [])


def cmd_simulate(args) -> int:
    cfg = _config(args)
    trace = _load(args.trace)
    m = simulate(trace, args.mode, cfg, _gaps(args))
    atomic_write(args.out, _csv(METRICS_HEADER, [metrics_row(m)]))
    if args.log_decisions:
        rows = [[d.stream_idx, f"{d.percentage:.6f}", "" if d.threshold is None else f"{d.threshold:.6f}",
                 d.target.value] for d in m.decisions]
        atomic_write(args.log_decisions, _csv(DECISIONS_HEADER, rows))
    print(",".join(metrics_row(m)))
    return 0


def cmd_compare(args) -> int:
    cfg = _config(args)
    trace = _load(args.trace)
    gaps = _gaps(args)
    rows = [metrics_row(simulate(trace, mode, cfg, gaps)) for mode in MODES]
    text = _csv(METRICS_HEADER, rows)
    atomic_write(args.out, text)
    sys.stdout.write(text)
    return 0


# -- parser --------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _window(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("window must be >= 2 (a stream needs at least one adjacent pair)")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="burstsim", description="Traffic-aware SSD burst buffer simulator")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic trace")
    g.add_argument("--pattern", required=True, choices=sorted(PATTERN_ALIASES))
    g.add_argument("--procs", required=True, type=_positive)
    g.add_argument("--total", required=True, type=parse_size)
    g.add_argument("--req", required=True, type=parse_size)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--interleave", choices=INTERLEAVES, default="round-robin")
    g.add_argument("--file", type=int, default=None, help="file id (default: 0, or next free id with --mix)")
    g.add_argument("--mix", metavar="OTHER.csv", help="merge with an existing trace as concurrent workloads")
    g.add_argument("--mix-interleave", choices=INTERLEAVES, default="random")
    g.add_argument("--burst", type=_positive, default=1, help="mean run length when mixing")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="per-stream random percentages")
    a.add_argument("trace")
    a.add_argument("--window", type=_window, default=128)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_analyze)

    for name, func, helptext in (("simulate", cmd_simulate, "run one policy"),
                                 ("compare", cmd_compare, "run all four policies")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("trace")
        if name == "simulate":
            s.add_argument("--mode", required=True, choices=MODES)
            s.add_argument("--log-decisions", metavar="DECISIONS.csv")
        s.add_argument("--config", metavar="CFG.json")
        s.add_argument("--gap", type=parse_gap, action="append", metavar="SEQ:SECONDS",
                       help="idle time before request SEQ; also a workload boundary (repeatable)")
        s.add_argument("--out", required=True)
        s.set_defaults(func=func)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BurstSimError, OSError) as exc:
        print(f"burstsim {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
