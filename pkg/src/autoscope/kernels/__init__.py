"""Hot kernels over group multiplication tables.

Two interchangeable backends:

* ``numba``  - the loop kernels in :mod:`._loops` compiled with ``@njit``
  (default whenever numba imports),
* ``numpy``  - vectorized closure/class kernels plus the plain-Python
  search loop, for environments without a working numba.

Select explicitly with ``AUTOSCOPE_BACKEND=numba|numpy``.  The active
backend is exported as ``BACKEND``; ``benchmarks/bench_kernels.py``
compares the two on representative workloads.
"""

from __future__ import annotations

import os

from . import _loops
from . import _vec

_requested = os.environ.get("AUTOSCOPE_BACKEND", "").strip().lower()

HAS_NUMBA = False
if _requested in ("", "numba"):
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        HAS_NUMBA = False

if HAS_NUMBA:
    BACKEND = "numba"
    _jit = njit(cache=True, nogil=True)
    close_mask = _jit(_loops.close_mask)
    class_ids = _jit(_loops.class_ids)
    iso_search = _jit(_loops.iso_search)
else:
    BACKEND = "numpy"
    close_mask = _vec.close_mask
    class_ids = _vec.class_ids
    iso_search = _loops.iso_search


def aut_search(table, gen_seq, cand_flat, cand_off, collect_stride, out_imgs, stop_after=0):
    """Search automorphisms: bijective homomorphisms of a table onto itself."""
    return iso_search(table, table, gen_seq, cand_flat, cand_off, collect_stride, out_imgs, stop_after)


__all__ = ["BACKEND", "HAS_NUMBA", "close_mask", "class_ids", "iso_search", "aut_search"]
