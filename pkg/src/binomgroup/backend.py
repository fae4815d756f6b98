"""Kernel backend selection.

The hot loops exist twice: numba-jitted (``_kernels_numba``) and pure numpy
(``_kernels_numpy``).  The environment variable ``BINOMGROUP_NUMBA``
selects between them:

* unset or ``1``/``auto``: use numba when importable, else fall back;
* ``0``: force the numpy fallback.

``kernels`` is the module chosen at import time; ``get_backend`` fetches a
specific one (used by tests and the backend benchmark).
"""

from __future__ import annotations

import os


def get_backend(name: str):
    """Return the kernel module for 'numba' or 'numpy'."""
    if name == "numpy":
        from . import _kernels_numpy

        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")


def _select():
    flag = os.environ.get("BINOMGROUP_NUMBA", "auto").strip().lower()
    if flag in ("0", "off", "false", "numpy"):
        return get_backend("numpy")
    try:
        return get_backend("numba")
    except ImportError:
        if flag in ("1", "on", "true", "numba"):
            raise
        return get_backend("numpy")


kernels = _select()
USING_NUMBA = kernels.__name__.endswith("_kernels_numba")
