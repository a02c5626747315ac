"""Kernel backend selection.

The compiled extension is preferred; set ``ACTIFLUX_PURE_PYTHON=1`` to force
the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("ACTIFLUX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "compiled"

eval_interfaces_1d = kernels.eval_interfaces_1d
recon2d_block = kernels.recon2d_block
