"""Kernel backend selection.

Imports the compiled kernels when available, otherwise the pure-Python
reference. Both expose the same functions and produce bit-identical results;
HOVERNAV_PURE_PYTHON=1 forces the pure backend (useful for benchmarking and
for debugging suspected backend divergence).
"""

import os

if os.environ.get("HOVERNAV_PURE_PYTHON"):
    from hovernav._kernels._pure import *  # noqa: F401,F403
else:
    try:
        from hovernav._kernels._native import *  # noqa: F401,F403
    except ImportError:
        from hovernav._kernels._pure import *  # noqa: F401,F403
