"""Hot inner loops, dispatched to numba or to a pure-numpy fallback.

The backend is chosen once, at import time. Set the environment variable
``WIENERHOPF_DISABLE_NUMBA=1`` to force the numpy path (useful for debugging
or on platforms without a working numba). Both backends are always importable
as :mod:`wienerhopf.kernels._numpy` and :mod:`wienerhopf.kernels._numba`.
"""

import os

from . import _numpy

SINC, PLUS, MINUS = _numpy.SINC, _numpy.PLUS, _numpy.MINUS

_DISABLED = os.environ.get("WIENERHOPF_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

if _DISABLED:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _impl = _numpy
        BACKEND = "numpy"

cardinal_series = _impl.cardinal_series
fourier_sum = _impl.fourier_sum
path_extrema = _impl.path_extrema

__all__ = ["BACKEND", "SINC", "PLUS", "MINUS", "cardinal_series", "fourier_sum", "path_extrema"]
