"""Kernel backend selection: compiled extension when available, else the
pure-Python twin.  Set OPTIDYN_FORCE_PYTHON_KERNEL=1 to force the fallback."""

import os

from . import _scalar_py

if os.environ.get("OPTIDYN_FORCE_PYTHON_KERNEL"):
    kernels = _scalar_py
    KERNEL_BACKEND = "python"
else:
    try:
        from . import _speedups as kernels

        KERNEL_BACKEND = "compiled"
    except ImportError:
        kernels = _scalar_py
        KERNEL_BACKEND = "python"

python_kernels = _scalar_py
