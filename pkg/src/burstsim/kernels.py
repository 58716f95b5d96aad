"""Kernel dispatch: compiled extension when available, numpy/Python otherwise.

Set ``BURSTSIM_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels

IMPLEMENTATION = "python"

if os.environ.get("BURSTSIM_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        IMPLEMENTATION = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

random_factor_sum = _impl.random_factor_sum
cfq_schedule = _impl.cfq_schedule
service_sequence = _impl.service_sequence
advance = _impl.advance
interleave = _impl.interleave

__all__ = [
    "IMPLEMENTATION",
    "random_factor_sum",
    "cfq_schedule",
    "service_sequence",
    "advance",
    "interleave",
]
