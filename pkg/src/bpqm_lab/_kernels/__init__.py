"""Gate-application kernels with backend selection at import time.

The compiled extension is used when present; ``BPQM_PURE_PYTHON=1`` (or a
missing build) selects the numpy fallback. Both expose the same in-place
functions; ``benchmarks/bench_kernels.py`` compares them.
"""

import os

from . import _pure

BACKEND = "numpy"
_impl = _pure

if not os.environ.get("BPQM_PURE_PYTHON"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        pass

apply_h = _impl.apply_h
apply_cnot = _impl.apply_cnot
apply_uc2 = _impl.apply_uc2
