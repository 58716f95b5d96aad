# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; mirrors ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport qsort, malloc, free

cnp.import_array()

ctypedef long long i64


cdef int _cmp_i64(const void* a, const void* b) noexcept nogil:
    cdef i64 x = (<i64*>a)[0]
    cdef i64 y = (<i64*>b)[0]
    return (x > y) - (x < y)


ctypedef struct pair_t:
    i64 addr
    i64 size
    i64 order


cdef int _cmp_pair(const void* a, const void* b) noexcept nogil:
    cdef pair_t* p = <pair_t*>a
    cdef pair_t* q = <pair_t*>b
    if p.addr != q.addr:
        return (p.addr > q.addr) - (p.addr < q.addr)
    return (p.order > q.order) - (p.order < q.order)


cdef inline double _op(i64 addr, i64 size, i64 head, double overhead, double bw,
                       double seek_base, double seek_per_byte) noexcept nogil:
    cdef double t = overhead + size / bw
    cdef i64 dist = addr - head
    if dist != 0:
        if dist < 0:
            dist = -dist
        t += seek_base + seek_per_byte * dist
    return t


def random_factor_sum(const i64[::1] offsets, i64 req_size):
    cdef Py_ssize_t n = offsets.shape[0], k
    cdef i64 gap, total = 0
    if n < 2:
        return 0
    cdef i64* buf = <i64*>malloc(n * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(n):
                buf[k] = offsets[k]
            qsort(buf, n, sizeof(i64), _cmp_i64)
            for k in range(1, n):
                gap = buf[k] - buf[k - 1]
                if gap != req_size and gap != 0:
                    total += 1
    finally:
        free(buf)
    return int(total)


def cfq_schedule(const i64[::1] addrs, const i64[::1] sizes, Py_ssize_t Q):
    cdef Py_ssize_t n = addrs.shape[0], lo, hi, k, m = 0
    out_a = np.empty(n, dtype=np.int64)
    out_s = np.empty(n, dtype=np.int64)
    cdef i64[::1] oa = out_a
    cdef i64[::1] os_ = out_s
    cdef i64 cur_a, cur_s
    if n == 0:
        return out_a, out_s
    cdef pair_t* batch = <pair_t*>malloc(Q * sizeof(pair_t))
    if batch == NULL:
        raise MemoryError()
    try:
        with nogil:
            lo = 0
            while lo < n:
                hi = lo + Q
                if hi > n:
                    hi = n
                for k in range(lo, hi):
                    batch[k - lo].addr = addrs[k]
                    batch[k - lo].size = sizes[k]
                    batch[k - lo].order = k
                qsort(batch, hi - lo, sizeof(pair_t), _cmp_pair)
                cur_a = batch[0].addr
                cur_s = batch[0].size
                for k in range(1, hi - lo):
                    if batch[k].addr == cur_a + cur_s:
                        cur_s += batch[k].size
                    else:
                        oa[m] = cur_a
                        os_[m] = cur_s
                        m += 1
                        cur_a = batch[k].addr
                        cur_s = batch[k].size
                oa[m] = cur_a
                os_[m] = cur_s
                m += 1
                lo = hi
    finally:
        free(batch)
    return out_a[:m].copy(), out_s[:m].copy()


def service_sequence(const i64[::1] addrs, const i64[::1] sizes, i64 head,
                     double overhead, double bw, double seek_base, double seek_per_byte):
    cdef Py_ssize_t k, n = addrs.shape[0]
    cdef double total = 0.0
    with nogil:
        for k in range(n):
            total += _op(addrs[k], sizes[k], head, overhead, bw, seek_base, seek_per_byte)
            head = addrs[k] + sizes[k]
    return total, head


def advance(const i64[::1] addrs, const i64[::1] sizes, Py_ssize_t start, i64 head,
            double budget, double overhead, double bw, double seek_base, double seek_per_byte):
    cdef Py_ssize_t i = start, n = addrs.shape[0]
    cdef double elapsed = 0.0
    with nogil:
        while i < n and elapsed < budget:
            elapsed += _op(addrs[i], sizes[i], head, overhead, bw, seek_base, seek_per_byte)
            head = addrs[i] + sizes[i]
            i += 1
    return i, elapsed, head


def interleave(const i64[::1] d_addrs, const i64[::1] d_sizes, Py_ssize_t d_start,
               const i64[::1] f_addrs, const i64[::1] f_sizes, Py_ssize_t f_start, i64 head,
               double overhead, double bw, double seek_base, double seek_per_byte):
    cdef Py_ssize_t i = d_start, j = f_start
    cdef Py_ssize_t nd = d_addrs.shape[0], nf = f_addrs.shape[0]
    cdef double elapsed = 0.0
    with nogil:
        while i < nd and j < nf:
            elapsed += _op(d_addrs[i], d_sizes[i], head, overhead, bw, seek_base, seek_per_byte)
            head = d_addrs[i] + d_sizes[i]
            i += 1
            elapsed += _op(f_addrs[j], f_sizes[j], head, overhead, bw, seek_base, seek_per_byte)
            head = f_addrs[j] + f_sizes[j]
            j += 1
    return i, j, elapsed, head
