"""Hot numeric kernels with a numba path and a pure-numpy path.

The numba loop kernels are used when numba is importable and the environment
variable ``TOPEX_NUMBA`` is not set to ``0``/``false``/``off``. Both
implementations stay importable as ``loops`` and ``vectorized`` so tests and
the benchmark can compare them directly.
"""

import os

from . import loops, vectorized

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TOPEX_NUMBA", "1").strip().lower() not in ("0", "false", "off", "no")

_impl = loops if USE_NUMBA else vectorized

stretch_offsets = _impl.stretch_offsets
simpson_prefix = _impl.simpson_prefix
prefix_integral = _impl.prefix_integral
interpolate = _impl.interpolate
weierstrass = _impl.weierstrass
fill_boxes = _impl.fill_boxes
box_counts = _impl.box_counts
closure_violation = _impl.closure_violation

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = [
    "BACKEND", "USE_NUMBA", "HAVE_NUMBA", "loops", "vectorized",
    "stretch_offsets", "simpson_prefix", "prefix_integral", "interpolate",
    "weierstrass", "fill_boxes", "box_counts", "closure_violation",
]
