"""Reference implementations of the inner loops.

Same signatures as the compiled ``_ckernels`` module.  Offsets and sizes
are int64 numpy arrays; a device profile is passed as the four floats
``overhead, bw, seek_base, seek_per_byte``.
"""

import numpy as np


def random_factor_sum(offsets, req_size):
    if len(offsets) < 2:
        return 0
    o = np.sort(offsets, kind="stable")
    gaps = np.diff(o)
    return int(np.count_nonzero((gaps != req_size) & (gaps != 0)))


def cfq_schedule(addrs, sizes, Q):
    """Dispatch order of a CFQ-like elevator.

    Requests are taken ``Q`` at a time in arrival order, sorted by address
    and end-to-start adjacent neighbours merged into one operation.
    """
    a = addrs.tolist()
    s = sizes.tolist()
    out_a, out_s = [], []
    if not a:
        return np.array(out_a, dtype=np.int64), np.array(out_s, dtype=np.int64)
    for lo in range(0, len(a), Q):
        batch = sorted(zip(a[lo:lo + Q], s[lo:lo + Q]), key=lambda p: p[0])
        cur_a, cur_s = batch[0]
        for x, n in batch[1:]:
            if x == cur_a + cur_s:
                cur_s += n
            else:
                out_a.append(cur_a)
                out_s.append(cur_s)
                cur_a, cur_s = x, n
        out_a.append(cur_a)
        out_s.append(cur_s)
    return np.array(out_a, dtype=np.int64), np.array(out_s, dtype=np.int64)


def _op(addr, size, head, overhead, bw, seek_base, seek_per_byte):
    t = overhead + size / bw
    dist = addr - head
    if dist:
        t += seek_base + seek_per_byte * (dist if dist > 0 else -dist)
    return t


def service_sequence(addrs, sizes, head, overhead, bw, seek_base, seek_per_byte):
    """Total time to service the operations in the given order."""
    total = 0.0
    for x, n in zip(addrs.tolist(), sizes.tolist()):
        total += _op(x, n, head, overhead, bw, seek_base, seek_per_byte)
        head = x + n
    return total, head


def advance(addrs, sizes, start, head, budget, overhead, bw, seek_base, seek_per_byte):
    """Service operations from ``start`` until ``budget`` seconds are used.

    An operation that begins inside the budget runs to completion, so the
    returned elapsed time may overshoot by one operation.
    """
    elapsed = 0.0
    i = start
    n = len(addrs)
    while i < n and elapsed < budget:
        x = int(addrs[i])
        s = int(sizes[i])
        elapsed += _op(x, s, head, overhead, bw, seek_base, seek_per_byte)
        head = x + s
        i += 1
    return i, elapsed, head


def interleave(d_addrs, d_sizes, d_start, f_addrs, f_sizes, f_start, head,
               overhead, bw, seek_base, seek_per_byte):
    """Alternate one direct and one flush operation on a shared head.

    Stops as soon as either list is exhausted; returns
    ``(d_next, f_next, elapsed, head)``.
    """
    elapsed = 0.0
    i, j = d_start, f_start
    nd, nf = len(d_addrs), len(f_addrs)
    while i < nd and j < nf:
        x = int(d_addrs[i])
        s = int(d_sizes[i])
        elapsed += _op(x, s, head, overhead, bw, seek_base, seek_per_byte)
        head = x + s
        i += 1
        x = int(f_addrs[j])
        s = int(f_sizes[j])
        elapsed += _op(x, s, head, overhead, bw, seek_base, seek_per_byte)
        head = x + s
        j += 1
    return i, j, elapsed, head
