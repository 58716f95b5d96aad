import numpy as np
import pytest

from burstsim.devices import (FILE_SPAN, DeviceProfile, HeadState, address, service_time,
                              service_window)
from burstsim.errors import ConfigError
from burstsim.trace import Request

KiB = 1 << 10
MiB = 1 << 20
R = 256 * KiB
HDD = DeviceProfile(100 * MiB, seek_base=5e-3)


def test_sequential_transfer_only():
    p = DeviceProfile(100 * MiB)
    assert service_time(p, HeadState(), 0, R) == pytest.approx(0.0025)


def test_seek_added_for_distance():
    head = HeadState(last_end_offset=10 * MiB)
    assert service_time(HDD, head, 0, R) == pytest.approx(0.0075)
    assert head.last_end_offset == R


def test_seek_per_byte():
    p = DeviceProfile(100 * MiB, seek_base=1e-3, seek_per_byte=1e-9)
    assert service_time(p, HeadState(), 1000, R) == pytest.approx(0.0025 + 1e-3 + 1e-6)


def test_ssd_profile_ignores_distance():
    ssd = DeviceProfile(100 * MiB, per_req_overhead=1e-4)
    assert service_time(ssd, HeadState(1 << 50), 0, R) == pytest.approx(0.0026)


def test_bad_profile():
    with pytest.raises(ConfigError):
        DeviceProfile(0).validate()
    with pytest.raises(ConfigError):
        DeviceProfile(1, seek_base=-1).validate()
    with pytest.raises(ValueError):
        service_time(HDD, HeadState(), 0, 0)


def reqs(offsets):
    return [Request(i, 0, 0, o, R) for i, o in enumerate(offsets)]


def test_window_merges_contiguous():
    t = service_window(HDD, HeadState(5 * MiB), reqs([3 * R, 0, 2 * R, R]), 4)
    assert t == pytest.approx(4 * R / HDD.seq_bw + 5e-3)


def test_window_q1_equals_arrival_order_sum():
    rq = reqs([3 * R, 0, 2 * R, R, 9 * R])
    h = HeadState()
    expected = sum(service_time(HDD, h, r.offset, r.size) for r in rq)
    assert service_window(HDD, HeadState(), rq, 1) == pytest.approx(expected)


def test_window_fully_random():
    rq = reqs([o * 2 * R for o in (5, 1, 9, 3)])
    t = service_window(HDD, HeadState(1 << 40), rq, 4)
    assert t == pytest.approx(4 * (R / HDD.seq_bw + 5e-3))


def test_window_accepts_arrays_and_empty():
    a = np.array([0, R], dtype=np.int64)
    s = np.array([R, R], dtype=np.int64)
    assert service_window(HDD, HeadState(), (a, s), 2) == pytest.approx(2 * R / HDD.seq_bw)
    assert service_window(HDD, HeadState(), [], 4) == 0.0
    with pytest.raises(ConfigError):
        service_window(HDD, HeadState(), [], 0)


def test_files_do_not_merge():
    rq = [Request(0, 0, 0, 0, R), Request(1, 0, 1, R, R)]
    assert address(1, R) == FILE_SPAN + R
    t = service_window(HDD, HeadState(), rq, 2)
    assert t == pytest.approx(2 * R / HDD.seq_bw + 5e-3)
