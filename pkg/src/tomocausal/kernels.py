"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
implementation takes over. Set ``TOMOCAUSAL_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from tomocausal import _pykernels
from tomocausal._pykernels import ConvergenceError

if os.environ.get("TOMOCAUSAL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from tomocausal import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

jacobi_eigh = _impl.jacobi_eigh
mutual_information = _impl.mutual_information
nelder_mead_max = _impl.nelder_mead_max

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "jacobi_eigh",
    "mutual_information",
    "nelder_mead_max",
]
