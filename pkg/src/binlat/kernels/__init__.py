"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time: numba is used when importable
unless the environment variable BINLAT_NUMBA is set to "0".  Both backends
stay importable (binlat.kernels.numba_impl / binlat.kernels.numpy_impl) so
they can be compared directly in tests and benchmarks.
"""

from __future__ import annotations

import os

from binlat.kernels import numpy_impl

_want_numba = os.environ.get("BINLAT_NUMBA", "1") != "0"

if _want_numba:
    try:
        from binlat.kernels import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = numpy_impl
        BACKEND = "numpy"
else:
    _impl = numpy_impl
    BACKEND = "numpy"

tridiag_eigh = _impl.tridiag_eigh
rk4_evolve = _impl.rk4_evolve

__all__ = ["BACKEND", "tridiag_eigh", "rk4_evolve", "numpy_impl"]
