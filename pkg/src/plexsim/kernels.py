"""Kernel backend selection.

The compiled extension ``plexsim._core`` is preferred; the pure-numpy
fallback ``plexsim._core_py`` is used when the extension is missing or
when the environment variable ``PLEXSIM_PURE_PYTHON`` is set to a truthy
value.  Both expose the same two functions with identical semantics.
"""

import os

_force_pure = os.environ.get("PLEXSIM_PURE_PYTHON", "").lower() in ("1", "true", "yes")

if _force_pure:
    from . import _core_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _core_py as _impl

        BACKEND = "python"

propagate_lindblad_arrays = _impl.propagate_lindblad_arrays
propagate_schrodinger_arrays = _impl.propagate_schrodinger_arrays


def backend_name():
    """Which kernel implementation is active, ``compiled`` or ``python``."""
    return BACKEND
