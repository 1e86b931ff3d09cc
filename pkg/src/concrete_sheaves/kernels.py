"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``CONCRETE_SHEAVES_PURE=1`` to force the Python kernels.
"""

import os

from . import _pykernels

BACKEND = "python"
solve_functional = _pykernels.solve_functional
partition = _pykernels.partition

if os.environ.get("CONCRETE_SHEAVES_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        solve_functional = _ckernels.solve_functional
        partition = _ckernels.partition
        BACKEND = "cython"

__all__ = ["BACKEND", "solve_functional", "partition"]
