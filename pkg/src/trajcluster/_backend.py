"""Kernel backend selection.

The compiled Cython kernels are used when importable; otherwise the pure
Python twins are. Set ``TRAJCLUSTER_BACKEND=python`` to force the fallback.
"""

import logging
import os

from . import _pykernels

log = logging.getLogger(__name__)


def _load_compiled():
    try:
        from . import _kernels
    except ImportError as exc:
        log.debug("compiled kernels unavailable: %s", exc)
        return None
    return _kernels


def available():
    """Names of importable backends."""
    names = ["python"]
    if _load_compiled() is not None:
        names.insert(0, "cython")
    return names


def get(name=None):
    """Return the kernel module for ``name`` ('cython' or 'python'; default: best available)."""
    if name is None:
        name = os.environ.get("TRAJCLUSTER_BACKEND", "").strip().lower() or "auto"
    if name == "python":
        return _pykernels
    compiled = _load_compiled()
    if name == "cython" and compiled is None:
        raise ImportError("trajcluster._kernels is not built; reinstall with Cython available")
    return compiled if compiled is not None else _pykernels


kernels = get()
BACKEND = kernels.NAME


def thread_count():
    """Worker count from ``TRAJCLUSTER_THREADS`` (0 or unset means all cores)."""
    raw = os.environ.get("TRAJCLUSTER_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        log.warning("ignoring non-integer TRAJCLUSTER_THREADS=%r", raw)
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n
