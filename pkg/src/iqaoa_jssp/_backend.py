"""Kernel backend selection.

The compiled extension is preferred; set ``IQAOA_BACKEND=python`` to force
the numpy fallback.
"""

import importlib
import logging
import os
from types import ModuleType

log = logging.getLogger(__name__)

_MODULES = {"cython": "iqaoa_jssp._ckernels", "python": "iqaoa_jssp._pykernels"}


def get_kernels(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``name`` ('cython' or 'python')."""
    if name is None:
        return kernels
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_MODULES)}")
    return importlib.import_module(_MODULES[name])


def available_backends() -> list[str]:
    found = []
    for name, mod in _MODULES.items():
        try:
            importlib.import_module(mod)
        except ImportError:
            continue
        found.append(name)
    return found


def _select() -> tuple[str, ModuleType]:
    wanted = os.environ.get("IQAOA_BACKEND", "").strip().lower()
    if wanted == "python":
        return "python", importlib.import_module(_MODULES["python"])
    try:
        return "cython", importlib.import_module(_MODULES["cython"])
    except ImportError:
        if wanted == "cython":
            raise
        log.warning("compiled kernels unavailable; using the numpy fallback")
        return "python", importlib.import_module(_MODULES["python"])


BACKEND, kernels = _select()
