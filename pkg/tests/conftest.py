import pytest

from burstsim.trace import Request, Trace

KiB = 1 << 10
MiB = 1 << 20
GiB = 1 << 30


def brute_force_rf(offsets, req_size):
    """Independent scorer: sort, then count adjacent gaps that are neither 0 nor one request."""
    o = sorted(offsets)
    s = 0
    for a, b in zip(o, o[1:]):
        if b - a not in (0, req_size):
            s += 1
    return s


def make_trace(offsets, size=256 * KiB, file=0):
    return Trace([Request(i, 0, file, o, size) for i, o in enumerate(offsets)], size)


@pytest.fixture
def small_trace():
    return make_trace([0, 256 * KiB, 5 * MiB, 1 * MiB])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
