"""Pick the kernel backend at import time.

The compiled ``_core`` extension is used when it is importable; otherwise,
or when ``GNPSQUARE_PURE=1`` is set, the pure-Python twins in ``_purepy``.
"""
import importlib
import os

from . import _purepy


def load(name):
    """Return the kernel module for ``name`` ("cython" or "python")."""
    if name == "python":
        return _purepy
    if name == "cython":
        return importlib.import_module("gnpsquare._core")
    raise ValueError(f"unknown backend {name!r}")


def available():
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("GNPSQUARE_PURE", "") not in ("", "0"):
    kernels, BACKEND = _purepy, "python"
else:
    try:
        kernels, BACKEND = load("cython"), "cython"
    except ImportError:
        kernels, BACKEND = _purepy, "python"
