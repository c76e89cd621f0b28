"""Kernel backend selection.

The compiled ``_ckernels`` module is used when it imports; otherwise the
numpy implementation in ``_pykernels``. Setting ``TREEBOUND_BACKEND=python``
forces the fallback (used by the benchmark and the cross-backend tests).
"""

from __future__ import annotations

import importlib
import os

from . import _pykernels


def load(name: str):
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("treebound._ckernels")
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def _select():
    wanted = os.environ.get("TREEBOUND_BACKEND", "").strip().lower()
    if wanted == "python":
        return _pykernels
    try:
        return load("cython")
    except ImportError:
        if wanted == "cython":
            raise
        return _pykernels


kernels = _select()
