"""Hot truth-table kernels.

The numba implementations are used by default.  Setting the environment
variable ``ROQL_DISABLE_NUMBA`` to a non-empty value other than ``0``
selects the pure-numpy fallback at import time.  Both modules are importable
directly as :data:`numba_impl` and :data:`numpy_impl` for comparisons.
"""

import os

from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None

_disabled = os.environ.get("ROQL_DISABLE_NUMBA", "") not in ("", "0")

if numba_impl is not None and not _disabled:
    _impl = numba_impl
    BACKEND = "numba"
else:
    _impl = numpy_impl
    BACKEND = "numpy"

essential_mask = _impl.essential_mask
project = _impl.project
constant_value = _impl.constant_value
parity = _impl.parity
first_hypercube_base = _impl.first_hypercube_base
all_hypercube_bases = _impl.all_hypercube_bases
consistent = _impl.consistent
discriminatory_subset = _impl.discriminatory_subset

__all__ = [
    "BACKEND",
    "numba_impl",
    "numpy_impl",
    "essential_mask",
    "project",
    "constant_value",
    "parity",
    "first_hypercube_base",
    "all_hypercube_bases",
    "consistent",
    "discriminatory_subset",
]
