"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the numpy
fallback is used. Set IRSBEAM_BACKEND=python (or =cython) to force a
choice; forcing cython raises if the extension is missing.
"""

import os

from . import _pure

_requested = os.environ.get("IRSBEAM_BACKEND", "auto").strip().lower()

if _requested in ("", "auto", "cython", "compiled", "c"):
    try:
        from . import _core as _impl
        _backend = "cython"
    except ImportError:
        if _requested not in ("", "auto"):
            raise
        _impl = _pure
        _backend = "python"
elif _requested in ("python", "pure", "numpy"):
    _impl = _pure
    _backend = "python"
else:
    raise ValueError(f"unrecognized IRSBEAM_BACKEND value {_requested!r}")


def backend_name() -> str:
    """Active kernel backend: "cython" or "python"."""
    return _backend


sweep_unit_rows = _impl.sweep_unit_rows
best_unit_modulus = _impl.best_unit_modulus
phase_grid_scan = _impl.phase_grid_scan
