import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burstsim.errors import ConfigError, TraceParseError
from burstsim.trace import (PatternSpec, Request, Trace, canonical_pattern, concat, dumps, generate,
                            load_trace, loads, mix, per_process_offsets, save_trace)

from conftest import GiB, KiB, MiB


def test_strided_first_offset():
    seqs = per_process_offsets(PatternSpec("strided", 16, 16 * 16 * 256 * KiB, 256 * KiB))
    assert seqs[0][0] == 0


def test_strided_formula():
    seqs = per_process_offsets(PatternSpec("strided", 16, 16 * 16 * 256 * KiB, 256 * KiB))
    assert seqs[3][1] == (1 * 16 + 3) * 262144 == 4980736


def test_segmented_contiguous_segment_start():
    seqs = per_process_offsets(PatternSpec("segmented-contiguous", 4, 16 * KiB, KiB))
    assert seqs[2][0] == 8192


def test_segmented_random_is_permutation_of_segment():
    spec = PatternSpec("segmented-random", 4, 64 * KiB, KiB, seed=3)
    contig = per_process_offsets(PatternSpec("segmented-contiguous", 4, 64 * KiB, KiB))
    rand = per_process_offsets(spec)
    for a, b in zip(contig, rand):
        assert sorted(b) == a
    assert rand != contig


def test_generate_round_robin_order():
    t = generate(PatternSpec("strided", 4, 8 * KiB, KiB))
    assert [r.proc for r in t][:8] == [0, 1, 2, 3, 0, 1, 2, 3]
    assert [r.seq for r in t] == list(range(8))


def test_generate_random_interleave_keeps_process_order():
    t = generate(PatternSpec("segmented-contiguous", 4, 64 * KiB, KiB, seed=5), "random")
    for p in range(4):
        offs = [r.offset for r in t if r.proc == p]
        assert offs == sorted(offs)


def test_generate_is_deterministic():
    spec = PatternSpec("segmented-random", 8, 256 * KiB, KiB, seed=9)
    assert generate(spec, "random") == generate(spec, "random")


@pytest.mark.parametrize("spec", [
    PatternSpec("nope", 1, 1024, 1024),
    PatternSpec("strided", 0, 1024, 1024),
    PatternSpec("strided", 1, 1000, 1024),
    PatternSpec("strided", 3, 4 * 1024, 1024),
])
def test_invalid_specs(spec):
    with pytest.raises(ConfigError):
        generate(spec)


def test_unknown_interleave():
    with pytest.raises(ConfigError):
        generate(PatternSpec("strided", 1, 1024, 1024), "zigzag")


def test_pattern_aliases():
    assert canonical_pattern("contig") == "segmented-contiguous"
    assert canonical_pattern("random") == "segmented-random"
    with pytest.raises(ConfigError):
        canonical_pattern("diagonal")


def _two(file, offs, size=KiB):
    return Trace([Request(i, 0, file, o, size) for i, o in enumerate(offs)], size)


def test_mix_preserves_relative_order():
    a, b = _two(0, [0, 1024]), _two(1, [0, 4096])
    m = mix([a, b], seed=4)
    assert len(m) == 4
    assert [r.offset for r in m if r.file == 0] == [0, 1024]
    assert [r.seq for r in m] == [0, 1, 2, 3]


def test_mix_single_is_identity():
    a = _two(0, [4096, 0, 1024])
    m = mix([a])
    assert [r.offset for r in m] == [4096, 0, 1024]


def test_mix_full_size_request_count():
    a = generate(PatternSpec("segmented-contiguous", 16, 8 * GiB, 256 * KiB, file=0))
    b = generate(PatternSpec("segmented-random", 16, 8 * GiB, 256 * KiB, seed=1, file=1))
    assert len(mix([a, b], seed=1)) == 65536


def test_mix_process_ids_distinct():
    a = generate(PatternSpec("strided", 2, 4 * KiB, KiB, file=0))
    b = generate(PatternSpec("strided", 2, 4 * KiB, KiB, file=1))
    m = mix([a, b], seed=0)
    assert {(r.file, r.proc) for r in m} == {(0, 0), (0, 1), (1, 2), (1, 3)}


def test_mix_round_robin_alternates():
    a, b = _two(0, [0, 1024, 2048]), _two(1, [0, 1024])
    m = mix([a, b], interleave="round-robin")
    assert [r.file for r in m] == [0, 1, 0, 1, 0]
    m = mix([a, b], interleave="round-robin", burst=2)
    assert [r.file for r in m] == [0, 0, 1, 1, 0]


def test_mix_rejects_bad_inputs():
    with pytest.raises(ConfigError):
        mix([_two(0, [0]), _two(0, [0])])
    with pytest.raises(ConfigError):
        mix([_two(0, [0]), _two(1, [0], size=2048)])
    with pytest.raises(ConfigError):
        mix([_two(0, [0])], burst=0)
    with pytest.raises(ConfigError):
        mix([_two(0, [0])], interleave="zigzag")


@given(st.lists(st.integers(1, 40), min_size=1, max_size=4), st.integers(1, 20), st.integers(0, 99))
@settings(max_examples=60, deadline=None)
def test_mix_is_order_preserving_merge(lengths, burst, seed):
    traces = [_two(f, [i * KiB for i in range(n)]) for f, n in enumerate(lengths)]
    m = mix(traces, seed=seed, burst=burst)
    assert len(m) == sum(lengths)
    for f, n in enumerate(lengths):
        assert [r.offset for r in m if r.file == f] == [i * KiB for i in range(n)]


def test_concat_boundaries():
    t, bounds = concat([_two(0, [0, 1024]), _two(1, [0]), _two(2, [0, 1024, 2048])])
    assert bounds == [2, 3]
    assert [r.seq for r in t] == list(range(6))


def test_row_mapping():
    t = loads("seq,proc,file,offset,size\n0,3,1,262144,262144\n")
    assert t.requests[0] == Request(seq=0, proc=3, file=1, offset=262144, size=262144)


def test_header_only_trace():
    t = loads("seq,proc,file,offset,size\n")
    assert len(t) == 0
    with pytest.raises(ConfigError):
        t.require_req_size()


@pytest.mark.parametrize("body, line", [
    ("0,0,0,0\n", 2),
    ("0,0,0,x,1024\n", 2),
    ("0,0,0,0,1024\n0,0,0,1024,1024\n", 3),
    ("1,0,0,0,1024\n", 2),
    ("0,0,0,-1,1024\n", 2),
    ("0,0,0,0,0\n", 2),
    ("0,0,0,0,1024\n1,0,0,1024,2048\n", 3),
])
def test_parse_errors_carry_line(body, line):
    with pytest.raises(TraceParseError) as exc:
        loads("seq,proc,file,offset,size\n" + body)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_bad_header():
    with pytest.raises(TraceParseError):
        loads("a,b,c\n")
    with pytest.raises(TraceParseError):
        loads("")


@pytest.mark.parametrize("pattern", ["segmented-contiguous", "segmented-random", "strided"])
def test_round_trip_text_and_bytes(pattern):
    t = generate(PatternSpec(pattern, 4, 64 * KiB, KiB, seed=2), "random")
    assert loads(dumps(t)) == t
    buf = io.BytesIO()
    save_trace(t, buf)
    buf.seek(0)
    assert load_trace(buf) == t


def test_total_bytes():
    t = generate(PatternSpec("strided", 4, 4 * MiB, 256 * KiB))
    assert t.total_bytes == 4 * MiB
