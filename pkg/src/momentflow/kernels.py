"""Backend dispatch for the hot numerical kernels.

The compiled extension is preferred when it imported cleanly; set
MOMENTFLOW_PURE=1 to force the NumPy fallback.  Both backends implement the
same two entry points with identical contracts, so callers never see the
difference.
"""

import os

from . import _kernels_py

STATUS_CONVERGED = _kernels_py.STATUS_CONVERGED
STATUS_MAX_STEPS = _kernels_py.STATUS_MAX_STEPS
STATUS_STAGNATED = _kernels_py.STATUS_STAGNATED

_backend = _kernels_py
_backend_name = "python"

if os.environ.get("MOMENTFLOW_PURE", "") != "1":
    try:
        from . import _kernels_c

        _backend = _kernels_c
        _backend_name = "compiled"
    except ImportError:
        pass


def backend_name() -> str:
    return _backend_name


def available_backends() -> dict:
    """Importable backends by name, for benchmarks and equivalence tests."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels_c

        out["compiled"] = _kernels_c
    except ImportError:
        pass
    return out


def flow_loop(*args, **kwargs):
    return _backend.flow_loop(*args, **kwargs)


def milnor_scan(*args, **kwargs):
    return _backend.milnor_scan(*args, **kwargs)
