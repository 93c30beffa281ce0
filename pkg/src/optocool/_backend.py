"""Select the compiled response kernel, falling back to pure numpy.

Set OPTOCOOL_BACKEND=python to force the fallback (used by the benchmark and
the backend-parity tests).
"""
from __future__ import annotations

import os

if os.environ.get("OPTOCOOL_BACKEND", "").strip().lower() == "python":
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
