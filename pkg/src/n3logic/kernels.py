"""Backend selection for the join kernel.

The compiled extension is used when it was built; otherwise the pure-Python
implementation takes over. Setting ``N3LOGIC_PURE_PYTHON=1`` forces the
fallback, which the test suite uses to exercise both backends.
"""

import os

from . import _kernels_py

BACKEND = "python"
join = _kernels_py.join

if os.environ.get("N3LOGIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        join = _compiled.join


def available_backends():
    backends = {"python": _kernels_py.join}
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        backends["cython"] = _compiled.join
    return backends
