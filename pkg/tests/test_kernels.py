"""The compiled and fallback kernels must agree exactly."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burstsim import _pykernels as py
from burstsim import kernels

try:
    from burstsim import _ckernels as cy
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled kernels not built")
PROFILE = (1e-5, 2.5e8, 1.9e-3, 1e-12)

arrays = st.lists(st.tuples(st.integers(0, 64), st.integers(1, 4)), max_size=300)


def _arr(pairs, unit=4096):
    a = np.array([p[0] * unit for p in pairs], dtype=np.int64)
    s = np.array([p[1] * unit for p in pairs], dtype=np.int64)
    return a, s


def test_dispatch_reports_implementation():
    assert kernels.IMPLEMENTATION in ("cython", "python")
    if cy is not None:
        assert kernels.IMPLEMENTATION == "cython" or kernels.random_factor_sum is py.random_factor_sum


@needs_ext
@given(st.lists(st.integers(0, 200), max_size=300))
@settings(max_examples=200, deadline=None)
def test_random_factor_parity(slots):
    a = np.array([x * 4096 for x in slots], dtype=np.int64)
    assert cy.random_factor_sum(a, 4096) == py.random_factor_sum(a, 4096)


@needs_ext
@given(arrays, st.integers(1, 64))
@settings(max_examples=200, deadline=None)
def test_cfq_parity(pairs, q):
    a, s = _arr(pairs)
    ca, cs = cy.cfq_schedule(a, s, q)
    pa, ps = py.cfq_schedule(a, s, q)
    assert np.array_equal(ca, pa) and np.array_equal(cs, ps)
    assert int(cs.sum()) == int(s.sum())


@needs_ext
@given(arrays, st.integers(0, 1 << 30))
@settings(max_examples=200, deadline=None)
def test_service_sequence_parity(pairs, head):
    a, s = _arr(pairs)
    ct, ch = cy.service_sequence(a, s, head, *PROFILE)
    pt, ph = py.service_sequence(a, s, head, *PROFILE)
    assert ct == pytest.approx(pt, rel=1e-12, abs=1e-15) and ch == ph


@needs_ext
@given(arrays, st.floats(0, 0.05), st.integers(0, 5))
@settings(max_examples=200, deadline=None)
def test_advance_parity(pairs, budget, start):
    a, s = _arr(pairs)
    start = min(start, len(a))
    c = cy.advance(a, s, start, 0, budget, *PROFILE)
    p = py.advance(a, s, start, 0, budget, *PROFILE)
    assert c[0] == p[0] and c[2] == p[2]
    assert c[1] == pytest.approx(p[1], rel=1e-12, abs=1e-15)


@needs_ext
@given(arrays, arrays)
@settings(max_examples=200, deadline=None)
def test_interleave_parity(d, f):
    da, ds = _arr(d)
    fa, fs = _arr(f, unit=1 << 20)
    c = cy.interleave(da, ds, 0, fa, fs, 0, 0, *PROFILE)
    p = py.interleave(da, ds, 0, fa, fs, 0, 0, *PROFILE)
    assert c[:2] == p[:2] and c[3] == p[3]
    assert c[2] == pytest.approx(p[2], rel=1e-12, abs=1e-15)


def test_advance_overshoot_completes_operation():
    a = np.array([0, 1 << 20], dtype=np.int64)
    s = np.array([1 << 20, 1 << 20], dtype=np.int64)
    nxt, elapsed, head = kernels.advance(a, s, 0, 0, 1e-9, 0.0, 1e6, 0.0, 0.0)
    assert nxt == 1 and elapsed == pytest.approx((1 << 20) / 1e6) and head == 1 << 20


def test_interleave_alternates_until_one_side_ends():
    d = np.array([0, 10, 20], dtype=np.int64), np.array([1, 1, 1], dtype=np.int64)
    f = np.array([100], dtype=np.int64), np.array([1], dtype=np.int64)
    i, j, elapsed, head = kernels.interleave(*d, 0, *f, 0, 0, 0.0, 1.0, 1.0, 0.0)
    assert (i, j, head) == (1, 1, 101)
    # op 1 at head, op 2 seeks
    assert elapsed == pytest.approx(3.0)
