"""Kernel backend selection.

Imports the compiled extension when available and falls back to the NumPy
implementations otherwise.  Set CONSTEL_PURE_PYTHON=1 to force the fallback,
which the benchmark uses to compare the two lanes.
"""

import os

if os.environ.get("CONSTEL_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

mark_odd_composites = _impl.mark_odd_composites
count_pattern_starts = _impl.count_pattern_starts
