"""Chart/metric kernel backend selection.

Two interchangeable implementations of the hot kernels live here: `_fast`
(compiled extension) and `_slow` (pure numpy).  The compiled one is used
when importable; set NKS3X3_BACKEND=py or NKS3X3_BACKEND=c to force a
choice (forcing `c` raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _slow

_requested = os.environ.get("NKS3X3_BACKEND", "").strip().lower()

if _requested in ("py", "python", "slow"):
    _impl = _slow
    BACKEND = "python"
elif _requested in ("c", "fast", "compiled"):
    from . import _fast as _impl  # noqa: F401

    BACKEND = "compiled"
else:
    try:
        from . import _fast as _impl  # noqa: F401

        BACKEND = "compiled"
    except ImportError:
        _impl = _slow
        BACKEND = "python"

chart_point = _impl.chart_point
chart_coords = _impl.chart_coords
chart_frame = _impl.chart_frame
metric_matrix = _impl.metric_matrix
metric_derivs = _impl.metric_derivs
j_matrix = _impl.j_matrix
tangent_coords = _impl.tangent_coords


def get_backend(name):
    """Return a kernel module by name ('python' or 'compiled')."""
    if name == "python":
        return _slow
    if name == "compiled":
        from . import _fast

        return _fast
    raise ValueError(f"unknown backend {name!r}")
